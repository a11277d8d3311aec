/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <vector>

#include "relay/sim/metrics.hpp"
#include "relay/sim/scenario.hpp"

namespace relay::sim {

/// Uniform draw in [0, bound) by rejection, so results do not depend on the
/// standard library's distribution implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound);

/// Per-edge network delay. Synchronous kinds always return values < delta.
class DelayModel {
 public:
  DelayModel(const DelaySpec& spec, SimTime delta);
  SimTime draw(std::mt19937_64& rng) const;

 private:
  DelaySpec spec_;
  SimTime delta_;
};

/// Time-ordered queue of opaque slots. Equal times pop in push order.
class EventQueue {
 public:
  struct Entry {
    std::int64_t ticks;
    std::uint64_t seq;
    std::uint32_t slot;
  };

  /// Throws std::logic_error if `at` precedes the last popped time.
  void push(SimTime at, std::uint32_t slot);
  bool empty() const { return heap_.empty(); }
  SimTime next_time() const { return SimTime::from_ticks(heap_.top().ticks); }
  Entry pop();
  SimTime now() const { return now_; }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.ticks != b.ticks ? a.ticks > b.ticks : a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t seq_ = 0;
  SimTime now_{};
};

/// Simulates the full stack for the configured rounds. Identical (scenario,
/// seed) pairs give identical metrics. Throws std::invalid_argument if the
/// scenario does not validate.
Metrics run_scenario(const Scenario& scenario);

}  // namespace relay::sim
