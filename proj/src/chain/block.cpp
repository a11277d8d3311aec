/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/chain/block.hpp"

#include <stdexcept>

#include "relay/codec.hpp"

namespace relay::chain {

crypto::Seed genesis_randomness() { return crypto::Seed::from_digest(crypto::hash(kGenesisBeaconInput)); }

std::shared_ptr<const Block> Block::genesis(const crypto::GroupParams& params) {
  std::shared_ptr<Block> b(new Block());
  b->payload_ = to_bytes(kGenesisPayload);
  b->seal(params);
  return b;
}

std::shared_ptr<const Block> Block::make(const crypto::GroupParams& params, const crypto::Digest& prev,
                                         std::uint64_t round, std::optional<crypto::GroupSignature> nota,
                                         Bytes payload, ReplicaId owner) {
  if (round == 0) throw std::invalid_argument("only genesis has round 0");
  std::shared_ptr<Block> b(new Block());
  b->prev_ = prev;
  b->round_ = round;
  b->nota_ = std::move(nota);
  b->payload_ = std::move(payload);
  b->owner_ = owner;
  b->seal(params);
  return b;
}

void Block::seal(const crypto::GroupParams& params) {
  ByteWriter w;
  if (is_genesis()) {
    w.field({});
  } else {
    w.field(prev_.view());
  }
  w.u64(round_);
  w.field(nota_ ? crypto::encode(params, *nota_) : Bytes{});
  w.field(payload_);
  w.u32(to_underlying(owner_));
  encoding_ = std::move(w).bytes();
  digest_ = crypto::hash(encoding_);
}

Bytes Block::encode() const { return encoding_; }

std::shared_ptr<const Block> Block::decode(const crypto::GroupParams& params, ByteView data) {
  ByteReader r(data);
  auto prev = r.field();
  auto round = r.u64();
  auto nota = r.field();
  auto payload = r.field();
  auto owner = r.u32();
  if (!r.empty()) throw std::invalid_argument("trailing bytes after block");
  if (round == 0) {
    auto g = genesis(params);
    if (g->encoding_ != Bytes(data.begin(), data.end())) throw std::invalid_argument("malformed genesis");
    return g;
  }
  if (prev.size() != crypto::kDigestSize) throw std::invalid_argument("malformed prev digest");
  crypto::Digest p;
  std::copy(prev.begin(), prev.end(), p.bytes.begin());
  std::optional<crypto::GroupSignature> z;
  if (!nota.empty()) z = crypto::decode_group_signature(params, nota);
  return make(params, p, round, std::move(z), Bytes(payload.begin(), payload.end()), replica_id(owner));
}

Bytes notary_message(const crypto::Digest& block_digest) {
  ByteWriter w;
  w.raw(to_bytes("NOTARY")).raw(block_digest.view());
  return std::move(w).bytes();
}

Bytes beacon_message(std::uint64_t round, const crypto::Seed& previous) {
  ByteWriter w;
  w.raw(to_bytes("BEACON")).u64(round).raw(previous.view());
  return std::move(w).bytes();
}

}  // namespace relay::chain
