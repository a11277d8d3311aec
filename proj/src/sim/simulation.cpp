/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/sim/simulation.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#include "relay/codec.hpp"
#include "relay/protocol/replica.hpp"
#include "relay/sim/adversary.hpp"

namespace relay::sim {

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x = rng();
  while (x > limit) x = rng();
  return x % bound;
}

DelayModel::DelayModel(const DelaySpec& spec, SimTime delta) : spec_(spec), delta_(delta) {}

SimTime DelayModel::draw(std::mt19937_64& rng) const {
  switch (spec_.kind) {
    case DelaySpec::Kind::kFixed:
      return spec_.value;
    case DelaySpec::Kind::kUniform: {
      auto span = static_cast<std::uint64_t>((delta_ - spec_.min).ticks());
      return spec_.min + SimTime::from_ticks(static_cast<std::int64_t>(draw_below(rng, span)));
    }
    case DelaySpec::Kind::kExponential: {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      double ticks = -std::log1p(-u) * static_cast<double>(spec_.mean.ticks());
      return SimTime::from_ticks(static_cast<std::int64_t>(std::llround(ticks)));
    }
  }
  return delta_;
}

void EventQueue::push(SimTime at, std::uint32_t slot) {
  if (at < now_) throw std::logic_error("event scheduled in the past");
  heap_.push(Entry{at.ticks(), seq_++, slot});
}

EventQueue::Entry EventQueue::pop() {
  auto e = heap_.top();
  heap_.pop();
  now_ = SimTime::from_ticks(e.ticks);
  return e;
}

namespace {

using crypto::Digest;
using protocol::MessagePtr;

constexpr std::size_t kMaxWitnesses = 1000;

void keep(std::vector<nlohmann::json>& list, nlohmann::json w) {
  if (list.size() < kMaxWitnesses) list.push_back(std::move(w));
}

void set_min(OptTime& slot, SimTime t) {
  if (!slot || t < *slot) slot = t;
}

void set_max(OptTime& slot, SimTime t) {
  if (!slot || *slot < t) slot = t;
}

crypto::Seed derive_seed(std::string_view tag, std::uint64_t seed) {
  ByteWriter w;
  w.raw(to_bytes(tag)).u64(seed);
  return crypto::Seed::from_digest(crypto::hash(w.bytes()));
}

std::uint64_t rng_seed(std::uint64_t seed) {
  auto s = derive_seed("relay/sim-network", seed);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | s.bytes[i];
  return v;
}

bool observer_is_safe(finality::Mode mode, SimTime T, SimTime delta, SimTime block_time) {
  if (mode == finality::Mode::kTimer) return T >= delta * 2;
  return block_time >= delta * 2;
}

class Simulation final : public protocol::Network, public protocol::EventSink {
 public:
  explicit Simulation(const Scenario& s);
  Metrics run();

  SimTime now() const override { return queue_.now(); }
  void broadcast(ReplicaId from, const MessagePtr& m) override;
  void send(ReplicaId from, ReplicaId to, const MessagePtr& m) override;
  void request_block(ReplicaId from, ReplicaId peer, const Digest& digest) override;
  void request_beacon(ReplicaId from, std::uint64_t round) override;
  void set_timer(ReplicaId owner, SimTime delay, std::function<void()> callback) override;

  void on_enter_round(ReplicaId id, std::uint64_t round, SimTime t) override;
  void on_beacon(ReplicaId id, std::uint64_t round, const crypto::Seed& xi, SimTime t) override;
  void on_block_seen(ReplicaId id, const chain::PoolEntry& entry, SimTime t) override;
  void on_sign(ReplicaId id, const chain::PoolEntry& entry, SimTime t) override;
  void on_notarized(ReplicaId id, const chain::PoolEntry& entry, SimTime t) override;
  void on_rejected(ReplicaId, const protocol::Message&, SimTime) override { ++rejected_; }
  void on_finalized(ReplicaId id, std::uint64_t h, const chain::Chain& before, const chain::Chain& after,
                    SimTime t) override;

 private:
  struct Pending {
    enum Kind : std::uint8_t { kDeliver, kRequest, kBeaconRequest, kTimer } kind = kTimer;
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    MessagePtr msg;
    Digest digest;
    std::uint64_t round = 0;
    std::function<void()> fn;
  };

  struct Track {  // per finalization observer
    bool tracked = false;
    bool safe = false;
    std::string name;
    std::unordered_map<Digest, SimTime> first_child;
    std::vector<OptTime> finalized_at;  // by height
  };

  struct RoundTrack {
    OptTime tau_min, tau_max, tau_star_min;
    std::uint64_t entered = 0;
    OptTime xi_min, xi_max;
    std::uint64_t xi_count = 0;
    std::optional<crypto::Seed> xi;
    std::optional<std::uint64_t> best_honest_rank;
    bool top_rank_honest = false;
    std::vector<Digest> notarized;
    std::optional<std::uint64_t> min_final_len;
    OptTime min_sign_slack;
  };

  struct SeenTrack {
    std::uint64_t round = 0;
    std::uint64_t count = 0;
    SimTime max;
  };

  struct PartitionRuntime {
    OptTime start, end;
    std::vector<int> component;  // by node index, -1 = never cut off
    std::vector<std::map<std::uint64_t, SimTime>> productions;
  };

  std::size_t index_of(ReplicaId id) const { return to_underlying(id) - 1; }
  bool in_universe(std::size_t idx) const { return idx < s_.universe; }
  bool honest(std::size_t idx) const { return idx < s_.universe && honest_[idx]; }
  bool reachable(std::size_t from, std::size_t to) const;
  void schedule(SimTime at, Pending p);
  void dispatch(Pending& p);
  void start_partition(PartitionRuntime& p, SimTime t);
  void check_chain(Track& track, std::size_t idx, const chain::Chain& before, const chain::Chain& after, SimTime t);
  Metrics collect();

  const Scenario& s_;
  committee::Universe universe_;
  protocol::Directory dir_;
  protocol::ProtocolConfig config_;
  protocol::VerifyCache cache_;
  Coalition coalition_;
  std::mt19937_64 rng_;
  DelayModel delay_;
  EventQueue queue_;
  std::vector<Pending> slots_;
  std::vector<std::uint32_t> free_slots_;
  std::vector<std::unique_ptr<protocol::Replica>> nodes_;
  std::vector<bool> honest_;
  std::uint64_t honest_count_ = 0;
  std::vector<Track> tracks_;
  std::vector<std::uint64_t> last_round_;
  std::vector<SimTime> entered_at_;
  std::vector<RoundTrack> rounds_;  // index = round, 0..R+2
  std::unordered_map<Digest, SeenTrack> honest_blocks_;
  std::unordered_map<Digest, SeenTrack> honest_notas_;
  std::unordered_map<Digest, std::uint64_t> referenced_;
  std::vector<PartitionRuntime> partitions_;
  std::vector<std::optional<Digest>> safe_map_, low_map_;
  Metrics out_;
  std::uint64_t at_horizon_ = 0;
  std::uint64_t deliveries_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t rejected_ = 0;
};

Simulation::Simulation(const Scenario& s)
    : s_(s),
      universe_(committee::Universe::range(s.universe)),
      rng_(rng_seed(s.seed)),
      delay_(s.delay, s.delta) {
  universe_.byzantine = s.byzantine();
  universe_.validate();
  const auto& params = crypto::GroupParams::preset(s.crypto_preset);
  dir_.params = &params;
  dir_.universe = universe_.labels;

  config_.block_time = s.block_time;
  if (s.resync_interval) config_.resync_interval = *s.resync_interval;

  const auto nodes = s.universe + s.observers.size();
  honest_.assign(s.universe, true);
  for (auto id : universe_.byzantine) honest_[index_of(id)] = false;
  honest_count_ = s.universe - universe_.byzantine.size();
  coalition_.members = universe_.byzantine;

  // Static groups: slot j is sampled with index j + 1 from the group seed.
  std::vector<std::map<std::size_t, crypto::SecretKeyShare>> shares(s.universe);
  const auto group_seed = derive_seed("relay-sim-groups", s.seed);
  const auto dkg_seed = derive_seed("relay/dkg", s.seed);
  for (std::size_t j = 0; j < s.group_count; ++j) {
    auto formed = committee::form_group(params, group_seed, j + 1, universe_.labels, s.effective_group_size(),
                                        crypto::prg(dkg_seed, j + 1));
    std::uint64_t honest_members = 0;
    for (std::size_t k = 0; k < formed.group.members.size(); ++k) {
      auto idx = index_of(formed.group.members[k]);
      shares[idx].emplace(j, formed.secret_shares[k]);
      honest_members += honest_[idx] ? 1 : 0;
    }
    out_.honest_group_members.push_back(honest_members);
    out_.group_thresholds.push_back(formed.group.threshold());
    dir_.groups.push_back(std::move(formed.group));
  }

  tracks_.resize(nodes);
  last_round_.assign(nodes, 0);
  entered_at_.assign(nodes, SimTime{});
  rounds_.resize(s.rounds + 3);

  protocol::ReplicaOptions replica_options;
  replica_options.observer = {s.finality_mode, s.T};
  for (std::uint32_t i = 0; i < s.universe; ++i) {
    auto id = replica_id(i + 1);
    if (const auto* adv = s.adversary_of(id)) {
      nodes_.push_back(std::make_unique<ByzantineReplica>(id, dir_, config_, std::move(shares[i]), *this, cache_,
                                                          this, replica_options, *adv, coalition_));
    } else {
      nodes_.push_back(std::make_unique<protocol::Replica>(id, dir_, config_, std::move(shares[i]), *this, cache_,
                                                           this, replica_options));
      auto& tr = tracks_[i];
      tr.tracked = true;
      tr.safe = observer_is_safe(s.finality_mode, s.T, s.delta, s.block_time);
      tr.name = "replica-" + std::to_string(i + 1);
    }
  }
  for (std::size_t k = 0; k < s.observers.size(); ++k) {
    const auto& spec = s.observers[k];
    auto id = replica_id(static_cast<std::uint32_t>(s.universe + k + 1));
    protocol::ReplicaOptions options;
    options.passive = true;
    options.observer = {spec.mode, spec.T};
    nodes_.push_back(std::make_unique<protocol::Replica>(id, dir_, config_, std::map<std::size_t, crypto::SecretKeyShare>{},
                                                         *this, cache_, this, options));
    auto& tr = tracks_[s.universe + k];
    tr.tracked = true;
    tr.safe = observer_is_safe(spec.mode, spec.T, s.delta, s.block_time);
    tr.name = spec.name;
  }

  for (const auto& p : s.partitions) {
    PartitionRuntime rt;
    rt.component.assign(nodes, -1);
    for (std::size_t c = 0; c < p.components.size(); ++c) {
      for (auto id : p.components[c]) rt.component[index_of(id)] = static_cast<int>(c);
    }
    int rest = static_cast<int>(p.components.size());
    bool has_rest = false;
    for (std::size_t i = 0; i < s.universe; ++i) {
      if (rt.component[i] < 0) {
        rt.component[i] = rest;
        has_rest = true;
      }
    }
    rt.productions.resize(p.components.size() + (has_rest ? 1 : 0));
    partitions_.push_back(std::move(rt));
    if (p.start) start_partition(partitions_.back(), *p.start);
  }
}

void Simulation::start_partition(PartitionRuntime& p, SimTime t) {
  const auto& spec = s_.partitions[&p - partitions_.data()];
  p.start = t;
  p.end = t + spec.duration;
}

bool Simulation::reachable(std::size_t from, std::size_t to) const {
  const auto t = now();
  for (const auto& p : partitions_) {
    if (!p.start || t < *p.start || t >= *p.end) continue;
    int a = p.component[from], b = p.component[to];
    if (a >= 0 && b >= 0 && a != b) return false;
  }
  return true;
}

void Simulation::schedule(SimTime at, Pending p) {
  std::uint32_t slot;
  if (free_slots_.empty()) {
    slot = static_cast<std::uint32_t>(slots_.size());
    slots_.push_back(std::move(p));
  } else {
    slot = free_slots_.back();
    free_slots_.pop_back();
    slots_[slot] = std::move(p);
  }
  queue_.push(at, slot);
}

void Simulation::broadcast(ReplicaId from, const MessagePtr& m) {
  auto f = index_of(from);
  if (!nodes_[f]->alive()) return;
  for (std::size_t to = 0; to < nodes_.size(); ++to) {
    if (to == f) continue;
    if (!reachable(f, to)) {
      ++dropped_;
      continue;
    }
    Pending p;
    p.kind = Pending::kDeliver;
    p.from = static_cast<std::uint32_t>(f);
    p.to = static_cast<std::uint32_t>(to);
    p.msg = m;
    schedule(now() + delay_.draw(rng_), std::move(p));
  }
}

void Simulation::send(ReplicaId from, ReplicaId to, const MessagePtr& m) {
  auto f = index_of(from), t = index_of(to);
  if (!nodes_[f]->alive() || f == t) return;
  if (!reachable(f, t)) {
    ++dropped_;
    return;
  }
  Pending p;
  p.kind = Pending::kDeliver;
  p.from = static_cast<std::uint32_t>(f);
  p.to = static_cast<std::uint32_t>(t);
  p.msg = m;
  schedule(now() + delay_.draw(rng_), std::move(p));
}

void Simulation::request_block(ReplicaId from, ReplicaId peer, const Digest& digest) {
  auto f = index_of(from), t = index_of(peer);
  if (t >= nodes_.size() || f == t) return;
  if (!reachable(f, t)) {
    ++dropped_;
    return;
  }
  Pending p;
  p.kind = Pending::kRequest;
  p.from = static_cast<std::uint32_t>(f);
  p.to = static_cast<std::uint32_t>(t);
  p.digest = digest;
  schedule(now() + delay_.draw(rng_), std::move(p));
}

void Simulation::request_beacon(ReplicaId from, std::uint64_t round) {
  auto f = index_of(from);
  for (std::size_t to = 0; to < nodes_.size(); ++to) {
    if (to == f) continue;
    if (!reachable(f, to)) {
      ++dropped_;
      continue;
    }
    Pending p;
    p.kind = Pending::kBeaconRequest;
    p.from = static_cast<std::uint32_t>(f);
    p.to = static_cast<std::uint32_t>(to);
    p.round = round;
    schedule(now() + delay_.draw(rng_), std::move(p));
  }
}

void Simulation::set_timer(ReplicaId owner, SimTime delay, std::function<void()> callback) {
  Pending p;
  p.kind = Pending::kTimer;
  p.to = static_cast<std::uint32_t>(index_of(owner));
  p.fn = std::move(callback);
  schedule(now() + delay, std::move(p));
}

void Simulation::dispatch(Pending& p) {
  switch (p.kind) {
    case Pending::kDeliver:
      ++deliveries_;
      nodes_[p.to]->receive(replica_id(p.from + 1), p.msg);
      break;
    case Pending::kRequest:
      nodes_[p.to]->serve_block_request(replica_id(p.from + 1), p.digest);
      break;
    case Pending::kBeaconRequest:
      nodes_[p.to]->serve_beacon_request(replica_id(p.from + 1), p.round);
      break;
    case Pending::kTimer:
      p.fn();
      break;
  }
}

// ---- ground truth ---------------------------------------------------------------

void Simulation::on_enter_round(ReplicaId id, std::uint64_t round, SimTime t) {
  auto idx = index_of(id);
  if (!in_universe(idx)) return;
  const auto horizon = s_.rounds + 2;
  for (auto r = last_round_[idx] + 1; r <= round; ++r) {
    if (r <= horizon) set_min(rounds_[r].tau_star_min, t);
    if (!honest(idx)) continue;
    if (r <= horizon) {
      auto& rt = rounds_[r];
      set_min(rt.tau_min, t);
      set_max(rt.tau_max, t);
      ++rt.entered;
      if (r >= 2) {
        std::uint64_t len = nodes_[idx]->observer().finalized().length();
        auto& ended = rounds_[r - 1].min_final_len;
        if (!ended || len < *ended) ended = len;
      }
    }
    if (r == horizon) ++at_horizon_;
    for (std::size_t k = 0; k < partitions_.size(); ++k) {
      const auto& spec = s_.partitions[k];
      if (spec.start_round && *spec.start_round == r && !partitions_[k].start) start_partition(partitions_[k], t);
    }
  }
  last_round_[idx] = std::max(last_round_[idx], round);
  entered_at_[idx] = t;
}

void Simulation::on_beacon(ReplicaId id, std::uint64_t round, const crypto::Seed& xi, SimTime t) {
  auto idx = index_of(id);
  if (!in_universe(idx) || round > s_.rounds + 2) return;
  auto& rt = rounds_[round];
  if (!rt.xi) {
    rt.xi = xi;
    auto perm = crypto::permutation(universe_.labels, xi);
    rt.top_rank_honest = honest_[index_of(perm.order()[0])];
    for (std::size_t k = 0; k < perm.order().size(); ++k) {
      if (honest_[index_of(perm.order()[k])]) {
        rt.best_honest_rank = k;
        break;
      }
    }
  } else if (*rt.xi != xi) {
    keep(out_.beacon_disagreements, {{"round", round},
                                     {"replica", to_underlying(id)},
                                     {"time", t.to_string()},
                                     {"expected", to_hex(rt.xi->view())},
                                     {"got", to_hex(xi.view())}});
  }
  if (!honest(idx)) return;
  set_min(rt.xi_min, t);
  set_max(rt.xi_max, t);
  ++rt.xi_count;
  for (auto& p : partitions_) {
    if (!p.start || t < *p.start || t >= *p.end) continue;
    auto& first = p.productions[p.component[idx]];
    first.emplace(round, t);  // keeps the earliest
  }
}

void Simulation::on_block_seen(ReplicaId id, const chain::PoolEntry& entry, SimTime t) {
  auto idx = index_of(id);
  if (!honest(idx) || entry.round() > s_.rounds + 2) return;
  if (!honest(index_of(entry.block->owner()))) return;
  auto& tr = honest_blocks_[entry.digest()];
  tr.round = entry.round();
  ++tr.count;
  tr.max = std::max(tr.max, t);
}

void Simulation::on_sign(ReplicaId id, const chain::PoolEntry& entry, SimTime t) {
  auto idx = index_of(id);
  if (!honest(idx) || entry.round() > s_.rounds + 2) return;
  set_min(rounds_[entry.round()].min_sign_slack, t - entered_at_[idx] - s_.block_time);
}

void Simulation::on_notarized(ReplicaId id, const chain::PoolEntry& entry, SimTime t) {
  auto idx = index_of(id);
  const auto r = entry.round();
  if (in_universe(idx) && r <= s_.rounds + 2) {
    auto& list = rounds_[r].notarized;
    if (std::find(list.begin(), list.end(), entry.digest()) == list.end()) list.push_back(entry.digest());
    if (r >= 2) referenced_.emplace(entry.parent->digest(), r - 1);
  }
  if (honest(idx) && r <= s_.rounds + 2) {
    auto& tr = honest_notas_[entry.digest()];
    tr.round = r;
    ++tr.count;
    tr.max = std::max(tr.max, t);
  }
  if (tracks_[idx].tracked && entry.parent) tracks_[idx].first_child.emplace(entry.parent->digest(), t);
}

void Simulation::on_finalized(ReplicaId id, std::uint64_t /*h*/, const chain::Chain& before,
                              const chain::Chain& after, SimTime t) {
  auto idx = index_of(id);
  if (idx >= tracks_.size() || !tracks_[idx].tracked) return;
  check_chain(tracks_[idx], idx, before, after, t);
}

void Simulation::check_chain(Track& track, std::size_t /*idx*/, const chain::Chain& before, const chain::Chain& after,
                             SimTime t) {
  const chain::PoolEntry* a = &after.head();
  const chain::PoolEntry* b = &before.head();
  std::vector<const chain::PoolEntry*> fresh;
  while (a->round() > b->round()) {
    fresh.push_back(a);
    a = a->parent;
  }
  while (b->round() > a->round()) b = b->parent;
  const bool append_only = b == &before.head() && a == b;
  while (a != b) {
    fresh.push_back(a);
    a = a->parent;
    b = b->parent;
  }

  auto& ao_list = track.safe ? out_.append_only_violations : out_.low_t_append_only_violations;
  auto& cons_list = track.safe ? out_.consistency_violations : out_.low_t_consistency_violations;
  (track.safe ? out_.finalize_events_checked : out_.low_t_finalize_events_checked) += 1;
  if (!append_only) {
    keep(ao_list, {{"observer", track.name},
                   {"time", t.to_string()},
                   {"before_length", before.length()},
                   {"after_length", after.length()},
                   {"diverged_at", a->round() + 1}});
  }
  for (const auto* e : fresh) {
    const auto h = e->round();
    if (track.finalized_at.size() <= h) track.finalized_at.resize(h + 1);
    track.finalized_at[h] = t;
    auto check = [&](std::vector<std::optional<Digest>>& map, bool insert) {
      if (map.size() <= h) map.resize(h + 1);
      if (!map[h]) {
        if (insert) map[h] = e->digest();
        return;
      }
      if (*map[h] != e->digest()) {
        keep(cons_list, {{"observer", track.name},
                         {"time", t.to_string()},
                         {"height", h},
                         {"expected", to_hex(map[h]->view())},
                         {"got", to_hex(e->digest().view())}});
      }
    };
    if (track.safe) {
      check(safe_map_, true);
    } else {
      // Observers outside the hypothesis are compared against the safe ones
      // and among themselves, but never pollute the safe reference.
      if (h < safe_map_.size() && safe_map_[h]) {
        check(safe_map_, false);
      } else {
        check(low_map_, true);
      }
    }
  }
}

// ---- main loop ------------------------------------------------------------------

Metrics Simulation::run() {
  for (auto& n : nodes_) n->start();
  const auto cap = s_.time_cap();
  SimTime drain = s_.T;
  for (const auto& o : s_.observers) drain = std::max(drain, o.T);
  drain += s_.delta * 2;
  std::optional<SimTime> stop;
  std::uint64_t events = 0;
  bool hit_cap = false;
  while (!queue_.empty()) {
    auto next = queue_.next_time();
    if (stop && next > *stop) break;
    if (next > cap) {
      hit_cap = true;
      break;
    }
    auto e = queue_.pop();
    Pending p = std::move(slots_[e.slot]);
    slots_[e.slot] = Pending{};
    free_slots_.push_back(e.slot);
    dispatch(p);
    ++events;
    if (!stop && at_horizon_ >= honest_count_) stop = now() + drain;
  }
  out_.events = events;
  out_.hit_time_cap = hit_cap;
  out_.horizon_reached = at_horizon_ >= honest_count_;
  return collect();
}

Metrics Simulation::collect() {
  Metrics& m = out_;
  m.scenario = s_.to_json();
  m.end_time = now();
  m.deliveries = deliveries_;
  m.dropped = dropped_;
  m.rejected = rejected_;
  m.honest_replicas = honest_count_;
  m.min_honest_round = UINT64_MAX;
  for (std::size_t i = 0; i < s_.universe; ++i) {
    if (!honest_[i]) continue;
    m.min_honest_round = std::min(m.min_honest_round, nodes_[i]->round());
    m.max_honest_round = std::max(m.max_honest_round, nodes_[i]->round());
  }
  if (m.min_honest_round == UINT64_MAX) m.min_honest_round = 0;

  // Honest proposals and referenced notarizations not seen by every honest
  // replica count as seen at infinity.
  std::vector<OptTime> block_seen(s_.rounds + 3), nota_seen(s_.rounds + 3);
  for (const auto& [_, tr] : honest_blocks_) {
    set_max(block_seen[tr.round], tr.count >= honest_count_ ? tr.max : SimTime::infinity());
  }
  for (const auto& [digest, round] : referenced_) {
    if (round > s_.rounds + 2) continue;
    auto it = honest_notas_.find(digest);
    bool all = it != honest_notas_.end() && it->second.count >= honest_count_;
    set_max(nota_seen[round], all ? it->second.max : SimTime::infinity());
  }

  // Reference finalized chain: the longest one among honest replicas.
  const chain::PoolEntry* ref = nullptr;
  for (std::size_t i = 0; i < s_.universe; ++i) {
    if (!honest_[i]) continue;
    const auto& head = nodes_[i]->observer().finalized().head();
    if (ref == nullptr || head.round() > ref->round()) ref = &head;
  }
  std::vector<std::optional<bool>> ref_honest(s_.rounds + 3);
  for (const auto* e = ref; e && !e->block->is_genesis(); e = e->parent) {
    if (e->round() < ref_honest.size()) ref_honest[e->round()] = honest(index_of(e->block->owner()));
  }

  for (std::uint64_t r = 1; r <= s_.rounds; ++r) {
    const auto& rt = rounds_[r];
    RoundMetrics rm;
    rm.round = r;
    rm.tau_min = rt.tau_min;
    rm.tau_max = rt.entered >= honest_count_ ? rt.tau_max : (rt.tau_min ? OptTime(SimTime::infinity()) : std::nullopt);
    rm.tau_star_min = rt.tau_star_min;
    rm.xi_min = rt.xi_min;
    rm.xi_max = rt.xi_count >= honest_count_ ? rt.xi_max : (rt.xi_min ? OptTime(SimTime::infinity()) : std::nullopt);
    rm.best_honest_rank = rt.best_honest_rank;
    rm.top_rank_honest = rt.top_rank_honest;
    rm.notarized_count = rt.notarized.size();
    rm.final_owner_honest = ref_honest[r];
    rm.min_final_len = rt.min_final_len;
    rm.honest_block_max_seen = block_seen[r];
    rm.referenced_nota_max = nota_seen[r];
    rm.min_sign_slack = rt.min_sign_slack;
    m.rounds.push_back(rm);
  }

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& tr = tracks_[i];
    if (!tr.tracked) continue;
    ObserverMetrics om;
    om.name = tr.name;
    om.id = static_cast<std::uint32_t>(i + 1);
    om.external = i >= s_.universe;
    om.mode = nodes_[i]->observer().config().mode;
    om.T = nodes_[i]->observer().config().T;
    om.safe = tr.safe;
    std::vector<const chain::PoolEntry*> entries;
    for (const auto* e = &nodes_[i]->observer().finalized().head(); !e->block->is_genesis(); e = e->parent) {
      entries.push_back(e);
    }
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
      const auto* e = *it;
      FinalizedRecord rec;
      rec.height = e->round();
      rec.digest = to_hex(e->digest().view());
      rec.owner = to_underlying(e->block->owner());
      rec.rank = e->rank;
      if (rec.height < tr.finalized_at.size()) rec.finalized_at = tr.finalized_at[rec.height];
      if (auto c = tr.first_child.find(e->digest()); c != tr.first_child.end()) rec.confirmation_at = c->second;
      om.chain.push_back(std::move(rec));
    }
    om.log = nodes_[i]->observer().export_log();
    m.observers.push_back(std::move(om));
  }

  for (std::size_t k = 0; k < partitions_.size(); ++k) {
    const auto& rt = partitions_[k];
    PartitionMetrics pm;
    pm.start = rt.start;
    pm.end = rt.end;
    pm.components.resize(rt.productions.size());
    for (std::size_t i = 0; i < s_.universe; ++i) {
      auto& c = pm.components[rt.component[i]];
      c.members.push_back(static_cast<std::uint32_t>(i + 1));
      // Honest members of the (single) notary group in this component.
      if (honest_[i] && !dir_.groups.empty() && dir_.groups[0].position_of(replica_id(i + 1)) != 0) {
        ++c.honest_members;
      }
    }
    for (std::size_t c = 0; c < rt.productions.size(); ++c) {
      for (const auto& [r, t] : rt.productions[c]) pm.components[c].productions.emplace_back(r, t);
    }
    m.partitions.push_back(std::move(pm));
  }
  return std::move(m);
}

}  // namespace

Metrics run_scenario(const Scenario& scenario) {
  scenario.validate();
  Simulation sim(scenario);
  return sim.run();
}

}  // namespace relay::sim
