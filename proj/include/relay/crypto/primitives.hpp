/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "relay/types.hpp"

namespace relay::crypto {

/// Name of the concrete hash. Every frozen vector in tests/fixtures depends on it.
inline constexpr std::string_view kHashFunction = "SHA-256";
inline constexpr std::size_t kDigestSize = 32;

struct Digest {
  std::array<std::uint8_t, kDigestSize> bytes{};

  auto operator<=>(const Digest&) const = default;
  ByteView view() const { return bytes; }
  std::string hex() const { return to_hex(bytes); }
  static Digest from_hex(std::string_view hex);
};

/// 32-octet seed; the total order is the big-endian integer order, which for a
/// fixed-width array coincides with lexicographic order.
struct Seed {
  std::array<std::uint8_t, kDigestSize> bytes{};

  auto operator<=>(const Seed&) const = default;
  ByteView view() const { return bytes; }
  std::string hex() const { return to_hex(bytes); }
  static Seed from_digest(const Digest& d) { return Seed{d.bytes}; }
  static Seed from_hex(std::string_view hex) { return from_digest(Digest::from_hex(hex)); }
};

Digest hash(ByteView data);
inline Digest hash(std::string_view text) {
  return hash(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// prg(seed, i) = hash(seed || be64(i)).
Seed prg(const Seed& seed, std::uint64_t index);

/// Integer value of the 32 octets (big-endian) reduced modulo `modulus` (> 0).
std::uint64_t reduce(ByteView value, std::uint64_t modulus);

/// Bijection {1..|U|} -> U produced by a Fisher-Yates shuffle driven by prg.
class Permutation {
 public:
  explicit Permutation(std::vector<ReplicaId> order);

  std::size_t size() const { return order_.size(); }
  /// Label at 1-based position.
  ReplicaId at(std::size_t position) const { return order_.at(position - 1); }
  /// Zero-based position of `label`; throws std::out_of_range for unknown labels.
  std::size_t rank_of(ReplicaId label) const;
  const std::vector<ReplicaId>& order() const { return order_; }

 private:
  std::vector<ReplicaId> order_;
};

/// Shuffles `universe` with swap index prg(seed, j) mod (j + 1) for
/// j = |U|-1 down to 1 (Knuth 3.4.2P). Modulo bias is accepted.
Permutation permutation(std::span<const ReplicaId> universe, const Seed& seed);

}  // namespace relay::crypto

template <>
struct std::hash<relay::crypto::Digest> {
  std::size_t operator()(const relay::crypto::Digest& d) const noexcept {
    std::size_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | d.bytes[i];
    return v;
  }
};
