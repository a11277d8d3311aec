/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/sim/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include "relay/committee/group_size.hpp"
#include "relay/registry/registry.hpp"
#include "relay/sim/theorems.hpp"

namespace relay::sim {

namespace {

using nlohmann::json;

struct BehaviorName {
  Behavior behavior;
  const char* name;
};

constexpr BehaviorName kBehaviors[] = {
    {Behavior::kEquivocate, "equivocate"},
    {Behavior::kWithholdSignatures, "withhold-signatures"},
    {Behavior::kWithholdNotarization, "withhold-notarization"},
    {Behavior::kSelfishChain, "selfish-chain"},
    {Behavior::kCrash, "crash"},
    {Behavior::kBeaconAbstain, "beacon-abstain"},
};

SimTime time_of(const json& v) {
  if (v.is_number_integer()) return SimTime::units(v.get<std::int64_t>());
  if (v.is_string()) return SimTime::parse(v.get<std::string>());
  throw std::invalid_argument("time values must be integers or strings like \"5/2\"");
}

std::string mode_name(finality::Mode m) { return m == finality::Mode::kTimer ? "timer" : "two-round"; }

finality::Mode parse_mode(const std::string& s) {
  if (s == "timer") return finality::Mode::kTimer;
  if (s == "two-round") return finality::Mode::kTwoRound;
  throw std::invalid_argument("unknown finality mode: " + s);
}

std::vector<ReplicaId> ids_of(const json& v) {
  std::vector<ReplicaId> out;
  for (const auto& x : v) out.push_back(replica_id(x.get<std::uint32_t>()));
  return out;
}

json ids_json(const std::vector<ReplicaId>& ids) {
  json a = json::array();
  for (auto id : ids) a.push_back(to_underlying(id));
  return a;
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("unknown field '" + key + "' in " + where);
  }
}

}  // namespace

std::string behavior_name(Behavior b) {
  for (const auto& e : kBehaviors) {
    if (e.behavior == b) return e.name;
  }
  return "unknown";
}

Behavior parse_behavior(const std::string& name) {
  for (const auto& e : kBehaviors) {
    if (name == e.name) return e.behavior;
  }
  throw std::invalid_argument("unknown adversary behavior: " + name);
}

Scenario Scenario::from_json(const json& j) {
  reject_unknown(j,
                 {"schema_version", "name", "universe", "group_count", "group_size", "threshold", "crypto_preset",
                  "delta", "delay", "block_time", "T", "finality_mode", "resync_interval", "rounds", "beta",
                  "allow_assumption_violation", "adversaries", "observers", "partitions", "seed", "m_max",
                  "epoch_length", "growth_rho_log2", "quality_window", "quality_epsilon", "max_time"},
                 "scenario");
  if (j.value("schema_version", 0) != kScenarioSchemaVersion) {
    throw std::invalid_argument("unsupported scenario schema_version (expected " +
                                std::to_string(kScenarioSchemaVersion) + ")");
  }
  Scenario s;
  s.name = j.value("name", s.name);
  s.universe = j.at("universe").get<std::uint32_t>();
  s.group_count = j.value("group_count", s.group_count);
  s.group_size = j.value("group_size", s.group_size);
  s.threshold = j.value("threshold", s.threshold);
  s.crypto_preset = j.value("crypto_preset", s.crypto_preset);
  if (j.contains("delta")) s.delta = time_of(j["delta"]);
  if (j.contains("delay")) {
    const auto& d = j["delay"];
    reject_unknown(d, {"kind", "min", "value", "mean"}, "delay");
    auto kind = d.value("kind", std::string("uniform"));
    if (kind == "uniform") {
      s.delay.kind = DelaySpec::Kind::kUniform;
      if (d.contains("min")) s.delay.min = time_of(d["min"]);
    } else if (kind == "fixed") {
      s.delay.kind = DelaySpec::Kind::kFixed;
      s.delay.value = time_of(d.at("value"));
    } else if (kind == "exponential") {
      s.delay.kind = DelaySpec::Kind::kExponential;
      s.delay.mean = time_of(d.at("mean"));
    } else {
      throw std::invalid_argument("unknown delay kind: " + kind);
    }
  }
  if (j.contains("block_time")) s.block_time = time_of(j["block_time"]);
  if (j.contains("T")) s.T = time_of(j["T"]);
  if (j.contains("finality_mode")) s.finality_mode = parse_mode(j["finality_mode"].get<std::string>());
  if (j.contains("resync_interval")) s.resync_interval = time_of(j["resync_interval"]);
  s.rounds = j.value("rounds", s.rounds);
  if (j.contains("beta")) {
    s.beta = j["beta"].is_number_integer() ? mpq_class(j["beta"].get<long>())
                                            : committee::parse_rational(j["beta"].get<std::string>());
  }
  s.allow_assumption_violation = j.value("allow_assumption_violation", false);
  for (const auto& a : j.value("adversaries", json::array())) {
    reject_unknown(a, {"behavior", "replicas", "delay", "time"}, "adversary");
    AdversarySpec spec;
    spec.behavior = parse_behavior(a.at("behavior").get<std::string>());
    spec.replicas = ids_of(a.at("replicas"));
    if (a.contains("delay")) spec.release_delay = time_of(a["delay"]);
    if (a.contains("time")) spec.crash_time = time_of(a["time"]);
    s.adversaries.push_back(std::move(spec));
  }
  for (const auto& o : j.value("observers", json::array())) {
    reject_unknown(o, {"name", "T", "mode"}, "observer");
    ObserverSpec spec;
    spec.name = o.at("name").get<std::string>();
    if (o.contains("T")) spec.T = time_of(o["T"]);
    if (o.contains("mode")) spec.mode = parse_mode(o["mode"].get<std::string>());
    s.observers.push_back(std::move(spec));
  }
  for (const auto& p : j.value("partitions", json::array())) {
    reject_unknown(p, {"start", "start_round", "duration", "components"}, "partition");
    PartitionSpec spec;
    if (p.contains("start")) spec.start = time_of(p["start"]);
    if (p.contains("start_round")) spec.start_round = p["start_round"].get<std::uint64_t>();
    spec.duration = time_of(p.at("duration"));
    for (const auto& c : p.at("components")) spec.components.push_back(ids_of(c));
    s.partitions.push_back(std::move(spec));
  }
  s.seed = j.value("seed", s.seed);
  s.m_max = j.value("m_max", s.m_max);
  s.epoch_length = j.value("epoch_length", s.epoch_length);
  s.growth_rho_log2 = j.value("growth_rho_log2", s.growth_rho_log2);
  s.quality_window = j.value("quality_window", s.quality_window);
  if (j.contains("quality_epsilon")) s.quality_epsilon = committee::parse_rational(j["quality_epsilon"].get<std::string>());
  if (j.contains("max_time")) s.max_time = time_of(j["max_time"]);
  return s;
}

json Scenario::to_json() const {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = name;
  j["universe"] = universe;
  j["group_count"] = group_count;
  j["group_size"] = effective_group_size();
  j["threshold"] = effective_threshold();
  j["crypto_preset"] = crypto_preset;
  j["delta"] = delta.to_string();
  json d;
  switch (delay.kind) {
    case DelaySpec::Kind::kUniform:
      d["kind"] = "uniform";
      d["min"] = delay.min.to_string();
      break;
    case DelaySpec::Kind::kFixed:
      d["kind"] = "fixed";
      d["value"] = delay.value.to_string();
      break;
    case DelaySpec::Kind::kExponential:
      d["kind"] = "exponential";
      d["mean"] = delay.mean.to_string();
      break;
  }
  j["delay"] = d;
  j["block_time"] = block_time.to_string();
  j["T"] = T.to_string();
  j["finality_mode"] = mode_name(finality_mode);
  if (resync_interval) j["resync_interval"] = resync_interval->to_string();
  j["rounds"] = rounds;
  j["beta"] = rational_string(beta);
  j["allow_assumption_violation"] = allow_assumption_violation;
  j["adversaries"] = json::array();
  for (const auto& a : adversaries) {
    json x;
    x["behavior"] = behavior_name(a.behavior);
    x["replicas"] = ids_json(a.replicas);
    if (a.behavior == Behavior::kWithholdNotarization) x["delay"] = a.release_delay.to_string();
    if (a.behavior == Behavior::kCrash) x["time"] = a.crash_time.to_string();
    j["adversaries"].push_back(x);
  }
  j["observers"] = json::array();
  for (const auto& o : observers) {
    j["observers"].push_back({{"name", o.name}, {"T", o.T.to_string()}, {"mode", mode_name(o.mode)}});
  }
  j["partitions"] = json::array();
  for (const auto& p : partitions) {
    json x;
    if (p.start) x["start"] = p.start->to_string();
    if (p.start_round) x["start_round"] = *p.start_round;
    x["duration"] = p.duration.to_string();
    x["components"] = json::array();
    for (const auto& c : p.components) x["components"].push_back(ids_json(c));
    j["partitions"].push_back(x);
  }
  j["seed"] = seed;
  j["m_max"] = m_max;
  j["epoch_length"] = epoch_length;
  j["growth_rho_log2"] = growth_rho_log2;
  j["quality_window"] = quality_window;
  j["quality_epsilon"] = rational_string(quality_epsilon);
  if (max_time) j["max_time"] = max_time->to_string();
  return j;
}

void Scenario::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid scenario: " + what); };
  if (universe == 0) fail("universe must be non-empty");
  if (group_count == 0) fail("group_count must be >= 1");
  if (group_count > m_max) fail("group_count exceeds m_max");
  auto n = effective_group_size();
  if (n > universe) fail("group_size exceeds universe");
  auto t = effective_threshold();
  if (t < 1 || t > n) fail("threshold must satisfy 1 <= t <= n");
  if (t != n / 2 + 1) fail("groups use the majority threshold floor(n/2) + 1");
  if (delta <= SimTime{}) fail("delta must be positive");
  if (block_time <= SimTime{}) fail("block_time must be positive");
  if (T < SimTime{}) fail("T must be non-negative");
  if (rounds == 0) fail("rounds must be positive");
  if (beta <= 2) fail("beta must exceed 2");
  try {
    registry::RegistryConfig{epoch_length, m_max, 4, effective_group_size()}.validate(
        growth_parameter(beta, growth_rho_log2));
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  switch (delay.kind) {
    case DelaySpec::Kind::kUniform:
      if (delay.min < SimTime{} || delay.min >= delta) fail("uniform delay min must lie in [0, delta)");
      break;
    case DelaySpec::Kind::kFixed:
      if (delay.value < SimTime{} || delay.value >= delta) fail("fixed delay must lie in [0, delta)");
      break;
    case DelaySpec::Kind::kExponential:
      if (delay.mean <= SimTime{}) fail("exponential delay mean must be positive");
      break;
  }
  std::set<ReplicaId> seen;
  for (const auto& a : adversaries) {
    if (a.replicas.empty()) fail("adversary entry without replicas");
    for (auto id : a.replicas) {
      if (to_underlying(id) < 1 || to_underlying(id) > universe) fail("adversary replica outside universe");
      if (!seen.insert(id).second) fail("replica assigned two adversary behaviors");
    }
    if (a.behavior == Behavior::kWithholdNotarization && a.release_delay < SimTime{}) fail("negative release delay");
  }
  // |f| < |U| / beta unless the scenario deliberately breaks the assumption.
  if (!allow_assumption_violation && mpq_class(static_cast<unsigned long>(seen.size())) * beta >= universe) {
    fail("adversary count violates |byzantine| < |universe| / beta (set allow_assumption_violation to test this)");
  }
  std::set<std::string> names;
  for (const auto& o : observers) {
    if (!names.insert(o.name).second) fail("duplicate observer name " + o.name);
    if (o.T < SimTime{}) fail("observer T must be non-negative");
  }
  for (const auto& p : partitions) {
    if (p.start.has_value() == p.start_round.has_value()) fail("partition needs exactly one of start, start_round");
    if (p.duration <= SimTime{}) fail("partition duration must be positive");
    std::set<ReplicaId> members;
    for (const auto& c : p.components) {
      for (auto id : c) {
        if (to_underlying(id) < 1 || to_underlying(id) > universe) fail("partition member outside universe");
        if (!members.insert(id).second) fail("partition components overlap");
      }
    }
  }
}

std::set<ReplicaId> Scenario::byzantine() const {
  std::set<ReplicaId> out;
  for (const auto& a : adversaries) out.insert(a.replicas.begin(), a.replicas.end());
  return out;
}

const AdversarySpec* Scenario::adversary_of(ReplicaId id) const {
  for (const auto& a : adversaries) {
    for (auto r : a.replicas) {
      if (r == id) return &a;
    }
  }
  return nullptr;
}

SimTime Scenario::time_cap() const {
  if (max_time) return *max_time;
  // Each round needs at most BlockTime + (|U| + 2) * delta when the network is
  // synchronous; allow four times that plus partitions and slow delays.
  SimTime per_round = block_time + delta * (static_cast<std::int64_t>(universe) + 2);
  if (delay.kind == DelaySpec::Kind::kExponential) per_round += delay.mean * 20;
  SimTime cap = per_round * static_cast<std::int64_t>((rounds + 10) * 4);
  for (const auto& p : partitions) {
    cap += p.duration;
    if (p.start) cap += *p.start;
  }
  return cap;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file " + path);
  auto s = Scenario::from_json(nlohmann::json::parse(in));
  s.validate();
  return s;
}

}  // namespace relay::sim
