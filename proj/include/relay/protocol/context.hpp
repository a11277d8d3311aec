/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "relay/chain/pool.hpp"
#include "relay/committee/sampling.hpp"
#include "relay/protocol/messages.hpp"
#include "relay/time.hpp"

namespace relay::protocol {

struct ProtocolConfig {
  SimTime block_time = SimTime::units(3);
  /// How long a replica waits in one round before re-broadcasting its own
  /// current-round artifacts (recovers from messages lost to partitions).
  /// Zero means 2 * block_time.
  SimTime resync_interval{};
  std::function<bool(ByteView payload)> payload_ok;

  SimTime effective_resync() const { return resync_interval > SimTime{} ? resync_interval : block_time * 2; }
};

/// Public system parameters every replica knows from genesis.
struct Directory {
  const crypto::GroupParams* params = &crypto::GroupParams::toy();
  std::vector<ReplicaId> universe;
  std::vector<committee::Group> groups;  // slot j is selected by integer(xi) mod m == j

  /// G_{xi mod m}. With xi = xi_r this is the committee that notarizes round r
  /// and produces xi_{r+1}.
  const committee::Group& committee_for(const crypto::Seed& xi) const;
  std::size_t slot_for(const crypto::Seed& xi) const;
};

/// Memoizes signature checks. Every replica of a simulation verifies the
/// same artifacts, so one shared cache removes most of the group arithmetic.
/// Not thread-safe; one per simulation.
class VerifyCache {
 public:
  bool verify_share(const crypto::GroupKeys& keys, ByteView message, const crypto::SignatureShare& s);
  bool verify_group(const crypto::GroupKeys& keys, ByteView message, const crypto::GroupSignature& sigma);

  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

 private:
  std::unordered_map<crypto::Digest, bool> memo_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

/// Transport and clock as seen by one replica.
class Network {
 public:
  virtual ~Network() = default;
  virtual SimTime now() const = 0;
  virtual void broadcast(ReplicaId from, const MessagePtr& m) = 0;
  virtual void send(ReplicaId from, ReplicaId to, const MessagePtr& m) = 0;
  /// Asks `peer` for the artifact with this block digest; the peer answers
  /// through serve_block_request.
  virtual void request_block(ReplicaId from, ReplicaId peer, const crypto::Digest& digest) = 0;
  /// Asks every peer for its beacon share of `round`; peers answer through
  /// serve_beacon_request.
  virtual void request_beacon(ReplicaId from, std::uint64_t round) = 0;
  virtual void set_timer(ReplicaId owner, SimTime delay, std::function<void()> callback) = 0;
};

/// Ground-truth instrumentation. Protocol code reports what it does; only the
/// harness interprets it.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void on_enter_round(ReplicaId, std::uint64_t /*round*/, SimTime) {}
  virtual void on_beacon(ReplicaId, std::uint64_t /*round*/, const crypto::Seed&, SimTime) {}
  virtual void on_block_seen(ReplicaId, const chain::PoolEntry&, SimTime) {}
  virtual void on_sign(ReplicaId, const chain::PoolEntry&, SimTime) {}
  virtual void on_notarized(ReplicaId, const chain::PoolEntry&, SimTime) {}
  virtual void on_publish(ReplicaId, const Message&, SimTime) {}
  virtual void on_rejected(ReplicaId, const Message&, SimTime) {}
  virtual void on_finalized(ReplicaId, std::uint64_t /*h*/, const chain::Chain& /*before*/,
                            const chain::Chain& /*after*/, SimTime) {}
};

}  // namespace relay::protocol
