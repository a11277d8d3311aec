/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <set>

#include "relay/protocol/replica.hpp"
#include "relay/sim/scenario.hpp"

namespace relay::sim {

/// State shared by all Byzantine replicas of one run.
struct Coalition {
  std::set<ReplicaId> members;
  std::set<crypto::Digest> released;  // withheld notarizations already scheduled for release
};

/// A replica controlled by the adversary. Everything not overridden follows
/// the honest protocol, so each behavior deviates in exactly one way.
class ByzantineReplica final : public protocol::Replica {
 public:
  ByzantineReplica(ReplicaId id, const protocol::Directory& directory, const protocol::ProtocolConfig& config,
                   std::map<std::size_t, crypto::SecretKeyShare> shares, protocol::Network& network,
                   protocol::VerifyCache& cache, protocol::EventSink* sink, protocol::ReplicaOptions options,
                   const AdversarySpec& spec, Coalition& coalition);

  bool alive() const override;
  Behavior behavior() const { return spec_.behavior; }

 protected:
  const chain::PoolEntry* choose_parent(std::uint64_t r) override;
  std::vector<chain::BlockPtr> make_proposals(std::uint64_t r, const chain::PoolEntry& parent,
                                              std::size_t rank) override;
  bool should_emit_beacon_share(std::uint64_t r) override;
  std::vector<const chain::PoolEntry*> choose_to_sign(std::uint64_t r,
                                                      std::vector<const chain::PoolEntry*> minimal) override;
  void publish(const protocol::MessagePtr& m) override;
  bool should_relay(const protocol::Message& m) const override;
  void on_notarization_constructed(const chain::PoolEntry& entry, const crypto::GroupSignature& sigma) override;

 private:
  bool is_member(ReplicaId id) const { return coalition_.members.count(id) > 0; }

  const protocol::Network& clock_;
  AdversarySpec spec_;
  Coalition& coalition_;
};

}  // namespace relay::sim
