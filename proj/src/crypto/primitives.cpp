/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/crypto/primitives.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

#include "relay/codec.hpp"

namespace relay::crypto {

Digest Digest::from_hex(std::string_view hex) {
  auto raw = relay::from_hex(hex);
  if (raw.size() != kDigestSize) throw std::invalid_argument("digest must be 32 octets");
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

Digest hash(ByteView data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != kDigestSize) {
    throw std::runtime_error("SHA-256 failed");
  }
  return d;
}

Seed prg(const Seed& seed, std::uint64_t index) {
  ByteWriter w;
  w.raw(seed.view()).u64(index);
  return Seed::from_digest(hash(w.bytes()));
}

std::uint64_t reduce(ByteView value, std::uint64_t modulus) {
  if (modulus == 0) throw std::invalid_argument("modulus must be positive");
  unsigned __int128 acc = 0;
  for (auto b : value) acc = ((acc << 8) | b) % modulus;
  return static_cast<std::uint64_t>(acc);
}

Permutation::Permutation(std::vector<ReplicaId> order) : order_(std::move(order)) {}

std::size_t Permutation::rank_of(ReplicaId label) const {
  auto it = std::find(order_.begin(), order_.end(), label);
  if (it == order_.end()) throw std::out_of_range("label not in universe");
  return static_cast<std::size_t>(it - order_.begin());
}

Permutation permutation(std::span<const ReplicaId> universe, const Seed& seed) {
  if (universe.empty()) throw std::invalid_argument("empty universe");
  std::vector<ReplicaId> order(universe.begin(), universe.end());
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("universe labels must be distinct");
    }
  }
  for (std::size_t j = order.size() - 1; j >= 1; --j) {
    auto swap_with = reduce(prg(seed, j).view(), j + 1);
    std::swap(order[j], order[swap_with]);
  }
  return Permutation(std::move(order));
}

}  // namespace relay::crypto
