/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <compare>
#include <memory>
#include <string_view>
#include <variant>

#include "relay/chain/block.hpp"

namespace relay::protocol {

enum class MessageKind : std::uint8_t {
  kBeaconShare,
  kBlockProposal,
  kBlockSignature,
  kNotarization,
  kNotarizedBlock,
};

std::string_view kind_name(MessageKind kind);

struct BeaconShare {
  std::uint64_t round = 0;  // share towards xi_round
  crypto::SignatureShare share;
};

struct BlockProposal {
  chain::BlockPtr block;
};

struct BlockSignature {
  crypto::Digest block;
  std::uint64_t round = 0;
  crypto::SignatureShare share;
};

struct Notarization {
  crypto::Digest block;
  std::uint64_t round = 0;
  crypto::GroupSignature notarization;
};

struct NotarizedBlockMsg {
  chain::NotarizedBlock notarized;
};

/// Identity of an artifact for duplicate suppression. Two messages with the
/// same key carry interchangeable content once validated.
struct ArtifactKey {
  MessageKind kind{};
  crypto::Digest subject;  // block digest, or zero for beacon shares
  std::uint64_t round = 0;
  std::uint32_t index = 0;  // signer position, 0 if not applicable

  auto operator<=>(const ArtifactKey&) const = default;
};

/// Relaying forwards the same immutable object; the transport tracks which
/// peer a copy arrived from.
struct Message {
  ReplicaId origin{};  // replica that created the artifact
  std::variant<BeaconShare, BlockProposal, BlockSignature, Notarization, NotarizedBlockMsg> body;

  MessageKind kind() const { return static_cast<MessageKind>(body.index()); }
  std::uint64_t round() const;
  ArtifactKey key() const;
};

using MessagePtr = std::shared_ptr<const Message>;

template <typename Body>
MessagePtr make_message(ReplicaId origin, Body body) {
  auto m = std::make_shared<Message>();
  m->origin = origin;
  m->body = std::move(body);
  return m;
}

}  // namespace relay::protocol
