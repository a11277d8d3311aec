/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/committee/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace relay::committee {

Universe Universe::range(std::uint32_t size) {
  Universe u;
  for (std::uint32_t i = 1; i <= size; ++i) u.labels.push_back(replica_id(i));
  return u;
}

void Universe::validate() const {
  if (labels.empty()) throw std::invalid_argument("empty universe");
  auto sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("universe labels must be distinct");
  }
  for (auto b : byzantine) {
    if (!std::binary_search(sorted.begin(), sorted.end(), b)) {
      throw std::invalid_argument("byzantine replica outside universe");
    }
  }
}

std::uint32_t Group::position_of(ReplicaId member) const {
  auto it = std::find(members.begin(), members.end(), member);
  return it == members.end() ? 0 : static_cast<std::uint32_t>(it - members.begin()) + 1;
}

std::vector<ReplicaId> group_derive(const crypto::Seed& xi, std::uint64_t j, std::span<const ReplicaId> universe,
                                    std::size_t n) {
  if (n == 0 || n > universe.size()) throw std::invalid_argument("group size must be in 1..|universe|");
  auto perm = crypto::permutation(universe, crypto::prg(xi, j));
  return {perm.order().begin(), perm.order().begin() + static_cast<std::ptrdiff_t>(n)};
}

std::size_t committee_select(const crypto::Seed& xi, std::size_t m) {
  if (m == 0) throw std::invalid_argument("group count must be positive");
  return crypto::reduce(xi.view(), m);
}

FormedGroup form_group(const crypto::GroupParams& params, const crypto::Seed& xi, std::uint64_t j,
                       std::span<const ReplicaId> universe, std::size_t n, const crypto::Seed& dkg_seed) {
  FormedGroup out;
  out.group.id = j;
  out.group.members = group_derive(xi, j, universe, n);

  auto scheme = crypto::SchemeParams::majority(params, n);
  std::vector<crypto::Seed> randomness;
  for (std::uint64_t k = 1; k <= n; ++k) randomness.push_back(crypto::prg(dkg_seed, k));
  auto result = crypto::dkg(scheme, randomness);

  out.group.keys = std::make_shared<const crypto::GroupKeys>(params, std::move(result.verification), n);
  out.secret_shares = std::move(result.shares);
  out.disqualified = std::move(result.disqualified);
  return out;
}

}  // namespace relay::committee
