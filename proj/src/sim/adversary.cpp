/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/sim/adversary.hpp"

namespace relay::sim {

using protocol::MessageKind;

ByzantineReplica::ByzantineReplica(ReplicaId id, const protocol::Directory& directory,
                                   const protocol::ProtocolConfig& config,
                                   std::map<std::size_t, crypto::SecretKeyShare> shares,
                                   protocol::Network& network, protocol::VerifyCache& cache,
                                   protocol::EventSink* sink, protocol::ReplicaOptions options,
                                   const AdversarySpec& spec, Coalition& coalition)
    : Replica(id, directory, config, std::move(shares), network, cache, sink, options),
      clock_(network),
      spec_(spec),
      coalition_(coalition) {}

bool ByzantineReplica::alive() const {
  return spec_.behavior != Behavior::kCrash || clock_.now() < spec_.crash_time;
}

const chain::PoolEntry* ByzantineReplica::choose_parent(std::uint64_t r) {
  if (spec_.behavior == Behavior::kSelfishChain) {
    // Extend the heaviest notarized coalition block, if there is one.
    const chain::PoolEntry* best = nullptr;
    for (const auto* e : pool().notarized(r - 1)) {
      if (e->block->is_genesis() || !is_member(e->block->owner())) continue;
      if (best == nullptr || best->chain_weight < e->chain_weight ||
          (best->chain_weight == e->chain_weight && e->digest() < best->digest())) {
        best = e;
      }
    }
    if (best) return best;
  }
  return Replica::choose_parent(r);
}

std::vector<chain::BlockPtr> ByzantineReplica::make_proposals(std::uint64_t r, const chain::PoolEntry& parent,
                                                              std::size_t rank) {
  auto blocks = Replica::make_proposals(r, parent, rank);
  if (spec_.behavior == Behavior::kEquivocate && rank == 0) {
    auto payload = default_payload(r);
    payload.push_back('#');
    blocks.push_back(chain::Block::make(*directory().params, parent.digest(), r, parent.notarization,
                                        std::move(payload), id()));
  }
  return blocks;
}

bool ByzantineReplica::should_emit_beacon_share(std::uint64_t /*r*/) {
  return spec_.behavior != Behavior::kBeaconAbstain;
}

std::vector<const chain::PoolEntry*> ByzantineReplica::choose_to_sign(std::uint64_t r,
                                                                      std::vector<const chain::PoolEntry*> minimal) {
  switch (spec_.behavior) {
    case Behavior::kWithholdSignatures:
      return {};
    case Behavior::kSelfishChain:
      std::erase_if(minimal, [&](const chain::PoolEntry* e) { return !is_member(e->block->owner()); });
      return minimal;
    default:
      return Replica::choose_to_sign(r, std::move(minimal));
  }
}

void ByzantineReplica::publish(const protocol::MessagePtr& m) {
  if (spec_.behavior == Behavior::kWithholdNotarization) {
    switch (m->kind()) {
      case MessageKind::kBlockSignature:
        for (auto member : coalition_.members) {
          if (member != id()) network().send(id(), member, m);
        }
        return;
      case MessageKind::kNotarization:
      case MessageKind::kNotarizedBlock:
        return;
      default:
        break;
    }
  }
  Replica::publish(m);
}

bool ByzantineReplica::should_relay(const protocol::Message& m) const {
  if (spec_.behavior == Behavior::kWithholdNotarization &&
      (m.kind() == MessageKind::kNotarization || m.kind() == MessageKind::kNotarizedBlock)) {
    return false;
  }
  return Replica::should_relay(m);
}

void ByzantineReplica::on_notarization_constructed(const chain::PoolEntry& entry,
                                                   const crypto::GroupSignature& sigma) {
  if (spec_.behavior != Behavior::kWithholdNotarization) {
    Replica::on_notarization_constructed(entry, sigma);
    return;
  }
  deliver_local(protocol::make_message(id(), protocol::Notarization{entry.digest(), entry.round(), sigma}));
  if (!coalition_.released.insert(entry.digest()).second) return;
  auto release = protocol::make_message(
      id(), protocol::NotarizedBlockMsg{chain::NotarizedBlock{entry.block, sigma}});
  auto self = id();
  auto& net = network();
  net.set_timer(self, spec_.release_delay, [&net, self, release] { net.broadcast(self, release); });
}

}  // namespace relay::sim
