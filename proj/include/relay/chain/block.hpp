/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "relay/crypto/group.hpp"
#include "relay/crypto/primitives.hpp"
#include "relay/crypto/threshold.hpp"
#include "relay/types.hpp"

namespace relay::chain {

inline constexpr std::string_view kGenesisPayload = "DFINITY-GENESIS";
inline constexpr std::string_view kGenesisBeaconInput = "DFINITY";

/// xi_0 = hash("DFINITY").
crypto::Seed genesis_randomness();

/// Immutable block (prev, round, nota, payload, owner). The genesis block has
/// round 0 and neither prev nor nota. Round-1 blocks reference genesis, which
/// counts as notarized without a signature, so their nota is also empty.
class Block {
 public:
  static std::shared_ptr<const Block> genesis(const crypto::GroupParams& params);
  static std::shared_ptr<const Block> make(const crypto::GroupParams& params, const crypto::Digest& prev,
                                           std::uint64_t round, std::optional<crypto::GroupSignature> nota,
                                           Bytes payload, ReplicaId owner);

  bool is_genesis() const { return round_ == 0; }
  const crypto::Digest& prev() const { return prev_; }
  std::uint64_t round() const { return round_; }
  const std::optional<crypto::GroupSignature>& nota() const { return nota_; }
  const Bytes& payload() const { return payload_; }
  ReplicaId owner() const { return owner_; }

  /// hash(encode()).
  const crypto::Digest& digest() const { return digest_; }
  /// Length-prefixed fields in declaration order: prev, round, nota, payload,
  /// owner. Absent prev and nota encode as empty fields.
  Bytes encode() const;
  static std::shared_ptr<const Block> decode(const crypto::GroupParams& params, ByteView data);

 private:
  Block() = default;
  void seal(const crypto::GroupParams& params);

  crypto::Digest prev_;
  std::uint64_t round_ = 0;
  std::optional<crypto::GroupSignature> nota_;
  Bytes payload_;
  ReplicaId owner_{};
  Bytes encoding_;
  crypto::Digest digest_;
};

using BlockPtr = std::shared_ptr<const Block>;

struct NotarizedBlock {
  BlockPtr block;
  crypto::GroupSignature notarization;
};

/// Message a notary committee signs for a block: "NOTARY" || digest.
Bytes notary_message(const crypto::Digest& block_digest);
/// Message the beacon committee signs in round r: "BEACON" || be64(r) || xi_{r-1}.
Bytes beacon_message(std::uint64_t round, const crypto::Seed& previous);

}  // namespace relay::chain
