/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/finality/observer.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace relay::finality {

Observer::Observer(const chain::PoolEntry& genesis, ObserverConfig config, Scheduler scheduler)
    : config_(config), scheduler_(std::move(scheduler)), finalized_(&genesis) {
  buckets_[0].push_back(&genesis);
}

void Observer::ingest(const chain::PoolEntry& notarized) {
  auto round = notarized.round();
  if (round > current_) throw std::logic_error("notarized block skips an empty bucket");
  auto& bucket = buckets_[round];
  if (std::find(bucket.begin(), bucket.end(), &notarized) != bucket.end()) return;
  bucket.push_back(&notarized);

  while (!buckets_[current_].empty()) {
    auto r = current_;
    if (config_.mode == Mode::kTimer) {
      scheduler_(config_.T, [this, r] { finalize(r - 1); });
    } else if (r >= 2) {
      finalize(r - 2);
    }
    ++current_;
  }
}

void Observer::finalize(std::uint64_t h) {
  if (h == 0) return;
  auto before = finalized_;
  finalized_ = chain::common_prefix(buckets_.at(h));
  if (hook_) hook_(h, before, finalized_);
}

const std::vector<const chain::PoolEntry*>& Observer::bucket(std::uint64_t round) const {
  static const std::vector<const chain::PoolEntry*> kEmpty;
  auto it = buckets_.find(round);
  return it == buckets_.end() ? kEmpty : it->second;
}

std::string Observer::export_log() const {
  std::ostringstream out;
  for (std::uint64_t h = 0; h < finalized_.length(); ++h) {
    const auto& e = finalized_.at(h);
    out << h << ' ' << e.digest().hex() << ' ' << to_underlying(e.block->owner()) << ' ' << e.rank << '\n';
  }
  return out.str();
}

}  // namespace relay::finality
