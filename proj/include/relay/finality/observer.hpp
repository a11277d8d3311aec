/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "relay/chain/pool.hpp"
#include "relay/time.hpp"

namespace relay::finality {

enum class Mode {
  kTimer,     // schedule Finalize(r - 1) T after N_r becomes non-empty
  kTwoRound,  // call Finalize(r - 2) at that moment instead
};

struct ObserverConfig {
  Mode mode = Mode::kTimer;
  SimTime T = SimTime::units(2);
};

/// Finalization from notarized blocks only. Entries handed to ingest() must
/// stay alive (they live in the owner's BlockPool) and must arrive parent
/// first; bucket N_0 holds genesis from the start.
class Observer {
 public:
  using Scheduler = std::function<void(SimTime delay, std::function<void()> callback)>;
  /// Called after each effective Finalize(h) with the previous and new chain.
  using FinalizeHook = std::function<void(std::uint64_t h, const chain::Chain& before, const chain::Chain& after)>;

  Observer(const chain::PoolEntry& genesis, ObserverConfig config, Scheduler scheduler);

  /// Stores a notarized block in N_{round}. Repeated entries are ignored.
  /// Throws std::logic_error if the entry skips an empty bucket, which the
  /// parent-first rule rules out.
  void ingest(const chain::PoolEntry& notarized);
  /// C <- C(N_h) for h > 0; no-op for h == 0.
  void finalize(std::uint64_t h);

  const chain::Chain& finalized() const { return finalized_; }
  /// Round whose bucket the main loop is waiting on.
  std::uint64_t current() const { return current_; }
  const std::vector<const chain::PoolEntry*>& bucket(std::uint64_t round) const;
  const ObserverConfig& config() const { return config_; }
  void set_finalize_hook(FinalizeHook hook) { hook_ = std::move(hook); }

  /// One line per finalized block: "round digest owner rank".
  std::string export_log() const;

 private:
  ObserverConfig config_;
  Scheduler scheduler_;
  FinalizeHook hook_;
  std::map<std::uint64_t, std::vector<const chain::PoolEntry*>> buckets_;
  chain::Chain finalized_;
  std::uint64_t current_ = 1;
};

}  // namespace relay::finality
