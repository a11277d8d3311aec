/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/sim/metrics.hpp"

#include <sstream>

namespace relay::sim {

namespace {

using nlohmann::json;

json time_json(const OptTime& t) {
  if (!t) return nullptr;
  return t->is_infinite() ? json("inf") : json(t->to_string());
}

OptTime time_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  auto s = j.get<std::string>();
  if (s == "inf") return SimTime::infinity();
  return SimTime::parse(s);
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

template <typename T>
std::string opt_csv(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else {
    return std::to_string(*v);
  }
}

json round_json(const RoundMetrics& r) {
  return {{"round", r.round},
          {"tau_min", time_json(r.tau_min)},
          {"tau_max", time_json(r.tau_max)},
          {"tau_star_min", time_json(r.tau_star_min)},
          {"xi_min", time_json(r.xi_min)},
          {"xi_max", time_json(r.xi_max)},
          {"best_honest_rank", opt_json(r.best_honest_rank)},
          {"top_rank_honest", r.top_rank_honest},
          {"notarized_count", r.notarized_count},
          {"final_owner_honest", opt_json(r.final_owner_honest)},
          {"min_final_len", opt_json(r.min_final_len)},
          {"honest_block_max_seen", time_json(r.honest_block_max_seen)},
          {"referenced_nota_max", time_json(r.referenced_nota_max)},
          {"min_sign_slack", time_json(r.min_sign_slack)}};
}

RoundMetrics round_from(const json& j) {
  RoundMetrics r;
  r.round = j.at("round").get<std::uint64_t>();
  r.tau_min = time_from(j.at("tau_min"));
  r.tau_max = time_from(j.at("tau_max"));
  r.tau_star_min = time_from(j.at("tau_star_min"));
  r.xi_min = time_from(j.at("xi_min"));
  r.xi_max = time_from(j.at("xi_max"));
  r.best_honest_rank = opt_from<std::uint64_t>(j.at("best_honest_rank"));
  r.top_rank_honest = j.at("top_rank_honest").get<bool>();
  r.notarized_count = j.at("notarized_count").get<std::uint64_t>();
  r.final_owner_honest = opt_from<bool>(j.at("final_owner_honest"));
  r.min_final_len = opt_from<std::uint64_t>(j.at("min_final_len"));
  r.honest_block_max_seen = time_from(j.at("honest_block_max_seen"));
  r.referenced_nota_max = time_from(j.at("referenced_nota_max"));
  r.min_sign_slack = time_from(j.at("min_sign_slack"));
  return r;
}

json observer_json(const ObserverMetrics& o) {
  json chain = json::array();
  for (const auto& c : o.chain) {
    chain.push_back({{"height", c.height},
                     {"digest", c.digest},
                     {"owner", c.owner},
                     {"rank", c.rank},
                     {"finalized_at", time_json(c.finalized_at)},
                     {"confirmation_at", time_json(c.confirmation_at)}});
  }
  return {{"name", o.name},
          {"id", o.id},
          {"external", o.external},
          {"mode", o.mode == finality::Mode::kTimer ? "timer" : "two-round"},
          {"T", o.T.to_string()},
          {"safe", o.safe},
          {"chain", chain}};
}

ObserverMetrics observer_from(const json& j) {
  ObserverMetrics o;
  o.name = j.at("name").get<std::string>();
  o.id = j.at("id").get<std::uint32_t>();
  o.external = j.at("external").get<bool>();
  o.mode = j.at("mode").get<std::string>() == "timer" ? finality::Mode::kTimer : finality::Mode::kTwoRound;
  o.T = SimTime::parse(j.at("T").get<std::string>());
  o.safe = j.at("safe").get<bool>();
  for (const auto& c : j.at("chain")) {
    FinalizedRecord rec;
    rec.height = c.at("height").get<std::uint64_t>();
    rec.digest = c.at("digest").get<std::string>();
    rec.owner = c.at("owner").get<std::uint32_t>();
    rec.rank = c.at("rank").get<std::uint64_t>();
    rec.finalized_at = time_from(c.at("finalized_at"));
    rec.confirmation_at = time_from(c.at("confirmation_at"));
    o.chain.push_back(std::move(rec));
  }
  return o;
}

json partition_json(const PartitionMetrics& p) {
  json comps = json::array();
  for (const auto& c : p.components) {
    json prods = json::array();
    for (const auto& [r, t] : c.productions) prods.push_back({{"round", r}, {"time", t.to_string()}});
    comps.push_back({{"members", c.members}, {"honest_members", c.honest_members}, {"productions", prods}});
  }
  return {{"start", time_json(p.start)}, {"end", time_json(p.end)}, {"components", comps}};
}

PartitionMetrics partition_from(const json& j) {
  PartitionMetrics p;
  p.start = time_from(j.at("start"));
  p.end = time_from(j.at("end"));
  for (const auto& c : j.at("components")) {
    ComponentBeacon cb;
    cb.members = c.at("members").get<std::vector<std::uint32_t>>();
    cb.honest_members = c.at("honest_members").get<std::uint64_t>();
    for (const auto& x : c.at("productions")) {
      cb.productions.emplace_back(x.at("round").get<std::uint64_t>(), SimTime::parse(x.at("time").get<std::string>()));
    }
    p.components.push_back(std::move(cb));
  }
  return p;
}

}  // namespace

std::string time_string(const OptTime& t) {
  if (!t) return "";
  return t->is_infinite() ? "inf" : t->to_string();
}

json Metrics::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["scenario"] = scenario;
  j["rounds"] = json::array();
  for (const auto& r : rounds) j["rounds"].push_back(round_json(r));
  j["observers"] = json::array();
  for (const auto& o : observers) j["observers"].push_back(observer_json(o));
  j["partitions"] = json::array();
  for (const auto& p : partitions) j["partitions"].push_back(partition_json(p));
  j["consistency_violations"] = consistency_violations;
  j["append_only_violations"] = append_only_violations;
  j["low_t_consistency_violations"] = low_t_consistency_violations;
  j["low_t_append_only_violations"] = low_t_append_only_violations;
  j["beacon_disagreements"] = beacon_disagreements;
  j["finalize_events_checked"] = finalize_events_checked;
  j["low_t_finalize_events_checked"] = low_t_finalize_events_checked;
  j["honest_replicas"] = honest_replicas;
  j["min_honest_round"] = min_honest_round;
  j["max_honest_round"] = max_honest_round;
  j["horizon_reached"] = horizon_reached;
  j["hit_time_cap"] = hit_time_cap;
  j["end_time"] = end_time.to_string();
  j["deliveries"] = deliveries;
  j["dropped"] = dropped;
  j["rejected"] = rejected;
  j["events"] = events;
  j["honest_group_members"] = honest_group_members;
  j["group_thresholds"] = group_thresholds;
  return j;
}

Metrics Metrics::from_json(const json& j) {
  if (j.value("schema_version", 0) != 1) throw std::invalid_argument("unsupported metrics schema_version");
  Metrics m;
  m.scenario = j.at("scenario");
  for (const auto& r : j.at("rounds")) m.rounds.push_back(round_from(r));
  for (const auto& o : j.at("observers")) m.observers.push_back(observer_from(o));
  for (const auto& p : j.at("partitions")) m.partitions.push_back(partition_from(p));
  m.consistency_violations = j.at("consistency_violations").get<std::vector<json>>();
  m.append_only_violations = j.at("append_only_violations").get<std::vector<json>>();
  m.low_t_consistency_violations = j.at("low_t_consistency_violations").get<std::vector<json>>();
  m.low_t_append_only_violations = j.at("low_t_append_only_violations").get<std::vector<json>>();
  m.beacon_disagreements = j.at("beacon_disagreements").get<std::vector<json>>();
  m.finalize_events_checked = j.at("finalize_events_checked").get<std::uint64_t>();
  m.low_t_finalize_events_checked = j.at("low_t_finalize_events_checked").get<std::uint64_t>();
  m.honest_replicas = j.at("honest_replicas").get<std::uint64_t>();
  m.min_honest_round = j.at("min_honest_round").get<std::uint64_t>();
  m.max_honest_round = j.at("max_honest_round").get<std::uint64_t>();
  m.horizon_reached = j.at("horizon_reached").get<bool>();
  m.hit_time_cap = j.at("hit_time_cap").get<bool>();
  m.end_time = SimTime::parse(j.at("end_time").get<std::string>());
  m.deliveries = j.at("deliveries").get<std::uint64_t>();
  m.dropped = j.at("dropped").get<std::uint64_t>();
  m.rejected = j.at("rejected").get<std::uint64_t>();
  m.events = j.at("events").get<std::uint64_t>();
  m.honest_group_members = j.at("honest_group_members").get<std::vector<std::uint64_t>>();
  m.group_thresholds = j.at("group_thresholds").get<std::vector<std::uint64_t>>();
  return m;
}

std::string Metrics::rounds_csv() const {
  std::ostringstream out;
  out << "round,tau_min,tau_max,tau_star_min,xi_min,xi_max,best_honest_rank,top_rank_honest,notarized_count,"
         "normal_operation,final_owner_honest,min_final_len,honest_block_max_seen,referenced_nota_max,"
         "min_sign_slack\n";
  for (const auto& r : rounds) {
    out << r.round << ',' << time_string(r.tau_min) << ',' << time_string(r.tau_max) << ','
        << time_string(r.tau_star_min) << ',' << time_string(r.xi_min) << ',' << time_string(r.xi_max) << ','
        << opt_csv(r.best_honest_rank) << ',' << (r.top_rank_honest ? 1 : 0) << ',' << r.notarized_count << ','
        << (r.notarized_count == 1 ? 1 : 0) << ',' << opt_csv(r.final_owner_honest) << ','
        << opt_csv(r.min_final_len) << ',' << time_string(r.honest_block_max_seen) << ','
        << time_string(r.referenced_nota_max) << ',' << time_string(r.min_sign_slack) << '\n';
  }
  return out.str();
}

std::string Metrics::observers_csv() const {
  std::ostringstream out;
  out << "observer,height,digest,owner,rank,finalized_at,confirmation_at\n";
  for (const auto& o : observers) {
    for (const auto& c : o.chain) {
      out << o.name << ',' << c.height << ',' << c.digest << ',' << c.owner << ',' << c.rank << ','
          << time_string(c.finalized_at) << ',' << time_string(c.confirmation_at) << '\n';
    }
  }
  return out.str();
}

}  // namespace relay::sim
