/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relay/sim/scenario.hpp"
#include "relay/time.hpp"

namespace relay::sim {

/// nullopt: no such event. SimTime::infinity(): the event should have
/// happened for every honest replica but some never saw it.
using OptTime = std::optional<SimTime>;

/// Ground truth for one round. tau values are entry times (first notarization
/// of round - 1 seen); bars and unders range over honest replicas, the star
/// variant over all replicas.
struct RoundMetrics {
  std::uint64_t round = 0;
  OptTime tau_min, tau_max, tau_star_min;
  OptTime xi_min, xi_max;
  std::optional<std::uint64_t> best_honest_rank;  // d
  bool top_rank_honest = false;
  std::uint64_t notarized_count = 0;  // distinct blocks of this round notarized anywhere
  std::optional<bool> final_owner_honest;  // block at this height of the reference finalized chain
  std::optional<std::uint64_t> min_final_len;  // over honest replicas, at the end of this round
  OptTime honest_block_max_seen;  // max over honest proposals B of tau-bar(B)
  OptTime referenced_nota_max;    // max over referenced notarizations z of this round of tau-bar(z)
  OptTime min_sign_slack;         // min over honest signatures of (sign time - entry - BlockTime)
};

struct FinalizedRecord {
  std::uint64_t height = 0;
  std::string digest;
  std::uint32_t owner = 0;
  std::uint64_t rank = 0;
  OptTime finalized_at;
  OptTime confirmation_at;  // first time a notarized child was seen
};

struct ObserverMetrics {
  std::string name;
  std::uint32_t id = 0;
  bool external = false;
  finality::Mode mode = finality::Mode::kTimer;
  SimTime T;
  bool safe = false;  // meets the finalization hypothesis (T >= 2 delta, or two-round with BlockTime >= 2 delta)
  std::vector<FinalizedRecord> chain;
  std::string log;  // export_log(); written to its own file, not to metrics.json
};

struct ComponentBeacon {
  std::vector<std::uint32_t> members;
  std::uint64_t honest_members = 0;
  std::vector<std::pair<std::uint64_t, SimTime>> productions;  // (round, first time in component)
};

struct PartitionMetrics {
  OptTime start, end;
  std::vector<ComponentBeacon> components;
};

struct Metrics {
  nlohmann::json scenario;  // echo, so a metrics file is self-contained
  std::vector<RoundMetrics> rounds;  // index r - 1
  std::vector<ObserverMetrics> observers;
  std::vector<PartitionMetrics> partitions;
  // Safety witnesses collected online (every finalization event is checked).
  std::vector<nlohmann::json> consistency_violations;
  std::vector<nlohmann::json> append_only_violations;
  std::vector<nlohmann::json> low_t_consistency_violations;
  std::vector<nlohmann::json> low_t_append_only_violations;
  std::vector<nlohmann::json> beacon_disagreements;
  std::uint64_t finalize_events_checked = 0;
  std::uint64_t low_t_finalize_events_checked = 0;
  // Run statistics.
  std::uint64_t honest_replicas = 0;
  std::uint64_t min_honest_round = 0;
  std::uint64_t max_honest_round = 0;
  bool horizon_reached = false;
  bool hit_time_cap = false;
  SimTime end_time;
  std::uint64_t deliveries = 0;
  std::uint64_t dropped = 0;
  std::uint64_t rejected = 0;
  std::uint64_t events = 0;
  std::vector<std::uint64_t> honest_group_members;  // per group slot
  std::vector<std::uint64_t> group_thresholds;

  nlohmann::json to_json() const;
  static Metrics from_json(const nlohmann::json& j);

  std::string rounds_csv() const;
  std::string observers_csv() const;
};

std::string time_string(const OptTime& t);

}  // namespace relay::sim
