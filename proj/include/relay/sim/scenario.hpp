/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <gmpxx.h>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "relay/finality/observer.hpp"
#include "relay/time.hpp"
#include "relay/types.hpp"

namespace relay::sim {

inline constexpr int kScenarioSchemaVersion = 1;

enum class Behavior {
  kEquivocate,
  kWithholdSignatures,
  kWithholdNotarization,
  kSelfishChain,
  kCrash,
  kBeaconAbstain,
};

std::string behavior_name(Behavior b);
Behavior parse_behavior(const std::string& name);

struct AdversarySpec {
  Behavior behavior = Behavior::kEquivocate;
  std::vector<ReplicaId> replicas;
  SimTime release_delay{};  // withhold-notarization: delta
  SimTime crash_time{};     // crash
};

/// External observer: a passive replica with its own finalization settings.
struct ObserverSpec {
  std::string name;
  SimTime T = SimTime::units(2);
  finality::Mode mode = finality::Mode::kTimer;
};

/// While active, messages between different components are dropped at send
/// time. Replicas not listed form one extra component. External observers are
/// never cut off.
struct PartitionSpec {
  std::optional<SimTime> start;             // absolute start time, or
  std::optional<std::uint64_t> start_round; // when the first honest replica enters this round
  SimTime duration;
  std::vector<std::vector<ReplicaId>> components;
};

struct DelaySpec {
  enum class Kind { kUniform, kFixed, kExponential };
  Kind kind = Kind::kUniform;
  SimTime min{};    // uniform: draws in [min, delta)
  SimTime value{};  // fixed
  SimTime mean{};   // exponential (unbounded, semi-synchronous)

  bool synchronous() const { return kind != Kind::kExponential; }
};

struct Scenario {
  std::string name = "unnamed";
  std::uint32_t universe = 4;
  std::size_t group_count = 1;          // m
  std::size_t group_size = 0;           // n; 0 = whole universe
  std::size_t threshold = 0;            // t; 0 = floor(n/2) + 1
  std::string crypto_preset = "toy";
  SimTime delta = SimTime::units(1);
  DelaySpec delay;
  SimTime block_time = SimTime::units(3);
  SimTime T = SimTime::units(2);        // replicas' own observers
  finality::Mode finality_mode = finality::Mode::kTimer;
  std::optional<SimTime> resync_interval;
  std::uint64_t rounds = 50;
  mpq_class beta = 3;
  bool allow_assumption_violation = false;
  std::vector<AdversarySpec> adversaries;
  std::vector<ObserverSpec> observers;
  std::vector<PartitionSpec> partitions;
  std::uint64_t seed = 1;
  // Registry plumbing carried for completeness; the simulator uses static groups.
  std::size_t m_max = 4;
  std::uint64_t epoch_length = 20;
  // Parameters of the statistical bounds.
  unsigned growth_rho_log2 = 10;
  std::uint64_t quality_window = 100;
  mpq_class quality_epsilon{1, 5};
  std::optional<SimTime> max_time;

  static Scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Throws std::invalid_argument with a descriptive message.
  void validate() const;

  std::size_t effective_group_size() const { return group_size ? group_size : universe; }
  std::size_t effective_threshold() const { return threshold ? threshold : effective_group_size() / 2 + 1; }
  std::set<ReplicaId> byzantine() const;
  const AdversarySpec* adversary_of(ReplicaId id) const;
  /// Time cap: explicit max_time or a generous bound derived from the config.
  SimTime time_cap() const;
};

Scenario load_scenario(const std::string& path);

}  // namespace relay::sim
