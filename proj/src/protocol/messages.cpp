/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/protocol/messages.hpp"

namespace relay::protocol {

std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::kBeaconShare: return "beacon-share";
    case MessageKind::kBlockProposal: return "block-proposal";
    case MessageKind::kBlockSignature: return "block-signature";
    case MessageKind::kNotarization: return "notarization";
    case MessageKind::kNotarizedBlock: return "notarized-block";
  }
  return "unknown";
}

std::uint64_t Message::round() const {
  struct {
    std::uint64_t operator()(const BeaconShare& b) const { return b.round; }
    std::uint64_t operator()(const BlockProposal& b) const { return b.block->round(); }
    std::uint64_t operator()(const BlockSignature& b) const { return b.round; }
    std::uint64_t operator()(const Notarization& b) const { return b.round; }
    std::uint64_t operator()(const NotarizedBlockMsg& b) const { return b.notarized.block->round(); }
  } visitor;
  return std::visit(visitor, body);
}

ArtifactKey Message::key() const {
  ArtifactKey k;
  k.kind = kind();
  k.round = round();
  switch (k.kind) {
    case MessageKind::kBeaconShare:
      k.index = std::get<BeaconShare>(body).share.index;
      break;
    case MessageKind::kBlockProposal:
      k.subject = std::get<BlockProposal>(body).block->digest();
      break;
    case MessageKind::kBlockSignature:
      k.subject = std::get<BlockSignature>(body).block;
      k.index = std::get<BlockSignature>(body).share.index;
      break;
    case MessageKind::kNotarization:
      k.subject = std::get<Notarization>(body).block;
      break;
    case MessageKind::kNotarizedBlock:
      k.subject = std::get<NotarizedBlockMsg>(body).notarized.block->digest();
      break;
  }
  return k;
}

}  // namespace relay::protocol
