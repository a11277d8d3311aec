/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "relay/finality/observer.hpp"
#include "relay/protocol/context.hpp"

namespace relay::protocol {

struct ReplicaOptions {
  /// A passive replica follows beacon and chain and runs its observer, but
  /// never proposes, signs, emits beacon shares or relays.
  bool passive = false;
  finality::ObserverConfig observer;
};

/// One replica: beacon participation, block making, notarization (waiting
/// BlockTime, then signing every minimal-rank proposal until the round is
/// notarized), the relay policy and an embedded finalization observer.
///
/// The virtual hooks are the seams adversary controllers override; the base
/// implementations are the honest protocol.
class Replica {
 public:
  /// `shares` maps group slot -> this replica's secret key share in it.
  Replica(ReplicaId id, const Directory& directory, const ProtocolConfig& config,
          std::map<std::size_t, crypto::SecretKeyShare> shares, Network& network, VerifyCache& cache,
          EventSink* sink, ReplicaOptions options = {});
  virtual ~Replica() = default;
  Replica(const Replica&) = delete;
  Replica& operator=(const Replica&) = delete;

  /// Enters round 1 at the current time (genesis counts as notarized).
  void start();
  void receive(ReplicaId from, const MessagePtr& m);
  void serve_block_request(ReplicaId requester, const crypto::Digest& digest);
  void serve_beacon_request(ReplicaId requester, std::uint64_t round);

  ReplicaId id() const { return id_; }
  std::uint64_t round() const { return round_; }
  SimTime entered_at() const { return entered_at_; }
  const chain::BlockPool& pool() const { return pool_; }
  const finality::Observer& observer() const { return observer_; }
  std::optional<crypto::Seed> beacon(std::uint64_t round) const;
  bool passive() const { return options_.passive; }
  virtual bool alive() const { return true; }

 protected:
  // ---- hooks --------------------------------------------------------------
  /// Parent for this replica's round-r proposals.
  virtual const chain::PoolEntry* choose_parent(std::uint64_t r);
  /// Blocks proposed in round r on top of `parent`; honest: exactly one.
  virtual std::vector<chain::BlockPtr> make_proposals(std::uint64_t r, const chain::PoolEntry& parent,
                                                      std::size_t rank);
  virtual bool should_emit_beacon_share(std::uint64_t /*r*/) { return true; }
  /// Which of the unsigned minimal-rank proposals to sign; honest: all.
  virtual std::vector<const chain::PoolEntry*> choose_to_sign(std::uint64_t r,
                                                              std::vector<const chain::PoolEntry*> minimal);
  /// Sends an artifact this replica created (or constructed from shares).
  virtual void publish(const MessagePtr& m);
  /// Relay policy for a validated artifact received from a peer.
  virtual bool should_relay(const Message& m) const;
  /// Called when this replica recovers a notarization from signature shares.
  virtual void on_notarization_constructed(const chain::PoolEntry& entry, const crypto::GroupSignature& sigma);

  // ---- helpers for subclasses ---------------------------------------------
  Network& network() { return net_; }
  const Directory& directory() const { return dir_; }
  const ProtocolConfig& config() const { return config_; }
  std::size_t rank_in(std::uint64_t r) const;
  /// Signature share on block `entry` with this replica's notary key, or
  /// nullopt if it is not on the round's notary committee.
  std::optional<crypto::SignatureShare> notary_share(const chain::PoolEntry& entry) const;
  const committee::Group* notary_committee(std::uint64_t r) const;
  /// Honest default payload for a proposal.
  Bytes default_payload(std::uint64_t r) const;
  /// Feeds an artifact to this replica as if received, without relaying it.
  void deliver_local(const MessagePtr& m) { receive(id_, m); }
  MessagePtr notarized_block_message(const chain::PoolEntry& entry) const;

 private:
  enum class Outcome { kAccepted, kDuplicate, kStale, kRejected, kWait };
  using Dependency = std::tuple<int, crypto::Digest, std::uint64_t>;

  Outcome handle(ReplicaId from, const Message& m, Dependency& dep);
  Outcome on_beacon_share(const BeaconShare& b, Dependency& dep);
  Outcome on_proposal(ReplicaId from, const BlockProposal& p, Dependency& dep);
  Outcome on_signature(const BlockSignature& s, Dependency& dep);
  Outcome on_notarization(ReplicaId from, const Notarization& n, Dependency& dep);
  Outcome on_notarized_block(ReplicaId from, const NotarizedBlockMsg& n, Dependency& dep);
  /// Validates and inserts a block; kAccepted also when already present.
  Outcome admit_block(ReplicaId from, const chain::BlockPtr& block, Dependency& dep);
  void prune();
  void newly_notarized(const chain::PoolEntry& entry);
  void beacon_output(std::uint64_t r, const crypto::Seed& xi);
  void enter_round(std::uint64_t r);
  void emit_beacon_share();
  void propose();
  void notarization_step();
  void resync(std::uint64_t r);
  void wake(const Dependency& dep);
  void maybe_request(ReplicaId peer, const crypto::Digest& digest);
  void maybe_request_beacon(std::uint64_t r);
  std::optional<crypto::SignatureShare> beacon_share(std::uint64_t r) const;

  static Dependency on_block(const crypto::Digest& d) { return {0, d, 0}; }
  static Dependency on_beacon_round(std::uint64_t r) { return {1, {}, r}; }
  static Dependency on_round(std::uint64_t r) { return {2, {}, r}; }

  ReplicaId id_;
  const Directory& dir_;
  const ProtocolConfig& config_;
  std::map<std::size_t, crypto::SecretKeyShare> shares_;
  Network& net_;
  VerifyCache& cache_;
  EventSink* sink_;
  ReplicaOptions options_;

  chain::BlockPool pool_;
  finality::Observer observer_;
  chain::ValidationContext validation_;

  std::uint64_t round_ = 0;
  SimTime entered_at_{};
  bool window_open_ = false;  // BlockTime has elapsed in the current round
  std::map<std::uint64_t, crypto::Seed> xi_;
  std::map<std::uint64_t, std::map<std::uint32_t, crypto::SignatureShare>> beacon_shares_;
  std::map<std::uint64_t, std::map<crypto::Digest, std::map<std::uint32_t, crypto::SignatureShare>>> block_shares_;
  mutable std::map<std::uint64_t, crypto::Permutation> ranking_;
  std::set<crypto::Digest> signed_;
  std::set<std::uint64_t> proposed_;
  std::set<std::uint64_t> beacon_emitted_;
  std::map<std::uint64_t, std::set<ArtifactKey>> processed_;  // by round, pruned
  std::map<Dependency, std::vector<std::pair<ReplicaId, MessagePtr>>> waiting_;
  std::map<crypto::Digest, SimTime> requested_;
  std::map<std::uint64_t, SimTime> requested_beacon_;
  std::vector<MessagePtr> own_current_;   // own artifacts of the current round, for resync
  MessagePtr entry_notarization_;         // notarized block that opened the current round
};

}  // namespace relay::protocol
