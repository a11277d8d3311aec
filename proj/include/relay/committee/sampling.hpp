/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "relay/crypto/primitives.hpp"
#include "relay/crypto/threshold.hpp"
#include "relay/types.hpp"

namespace relay::committee {

struct Universe {
  std::vector<ReplicaId> labels;
  // Ground truth for the simulator only. Protocol code never reads this.
  std::set<ReplicaId> byzantine;

  static Universe range(std::uint32_t size);  // labels 1..size
  void validate() const;
};

/// A sampled group together with its DKG output. Member k (0-based) holds
/// group position k + 1.
struct Group {
  std::uint64_t id = 0;
  std::vector<ReplicaId> members;
  std::shared_ptr<const crypto::GroupKeys> keys;

  std::size_t threshold() const { return keys ? keys->threshold() : 0; }
  /// 1-based position of `member`, or 0 if not a member.
  std::uint32_t position_of(ReplicaId member) const;
};

/// Perm_U(prg(xi, j)) restricted to positions 1..n. Throws
/// std::invalid_argument if n > |universe| or n == 0.
std::vector<ReplicaId> group_derive(const crypto::Seed& xi, std::uint64_t j, std::span<const ReplicaId> universe,
                                    std::size_t n);

/// integer(xi) mod m.
std::size_t committee_select(const crypto::Seed& xi, std::size_t m);

struct FormedGroup {
  Group group;
  std::vector<crypto::SecretKeyShare> secret_shares;  // by position - 1
  std::set<std::uint32_t> disqualified;
};

/// Samples members with group_derive(xi, j, ...) and runs the DKG among them
/// with t = floor(n/2) + 1. Dealer randomness is prg(dkg_seed, position).
FormedGroup form_group(const crypto::GroupParams& params, const crypto::Seed& xi, std::uint64_t j,
                       std::span<const ReplicaId> universe, std::size_t n, const crypto::Seed& dkg_seed);

}  // namespace relay::committee
