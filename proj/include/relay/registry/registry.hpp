/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "relay/chain/block.hpp"
#include "relay/crypto/threshold.hpp"
#include "relay/types.hpp"

namespace relay::registry {

// Rounds are split into epochs of l rounds; epoch e starts at round e*l and
// its first block is the key frame. Anything included in epoch e becomes
// active in epoch e+2.

struct RegistryConfig {
  std::uint64_t epoch_length = 20;  // l
  std::uint64_t m_max = 4;          // candidate groups per epoch
  std::uint64_t group_lifetime = 4; // epochs a registered group stays active
  std::size_t group_size = 0;       // n of candidate groups

  /// Throws std::invalid_argument unless l >= growth_k + 2 and the other
  /// fields are positive.
  void validate(std::uint64_t growth_k) const;
};

inline std::uint64_t epoch_of(std::uint64_t round, std::uint64_t l) { return round / l; }
inline std::uint64_t first_round(std::uint64_t epoch, std::uint64_t l) { return epoch * l; }

enum class EntryKind : std::uint8_t { kReplicaJoin = 1, kReplicaLeave = 2, kGroupJoin = 3 };

std::string_view kind_name(EntryKind kind);

/// x = (e, j, pk_G). The verification vector rides along so that the
/// members' signatures on x can be checked against their key shares.
struct GroupTuple {
  std::uint64_t epoch = 0;
  std::uint64_t index = 0;  // j
  crypto::VerificationVector verification;

  /// "REGISTER-GROUP" || e || j || pk_G.
  Bytes message(const crypto::GroupParams& params) const;
};

struct RegistryEntry {
  EntryKind kind = EntryKind::kReplicaJoin;
  std::uint32_t subject = 0;  // replica label, or j for a group
  std::uint64_t epoch_submitted = 0;
  Bytes payload;      // public key bytes, or the encoded GroupTuple
  Bytes endorsement;  // opaque; see RegistryContext::endorsement_ok
  std::vector<crypto::SignatureShare> signatures;  // group-join only

  Bytes encode(const crypto::GroupParams& params) const;
  static RegistryEntry decode(const crypto::GroupParams& params, ByteView data);
  GroupTuple tuple(const crypto::GroupParams& params) const;
  bool operator==(const RegistryEntry&) const;
};

Bytes encode_tuple(const crypto::GroupParams& params, const GroupTuple& x);

struct GroupRecord {
  std::uint64_t epoch = 0;  // registration epoch; 0 with genesis = true for genesis groups
  std::uint64_t index = 0;
  bool genesis = false;
  std::vector<ReplicaId> members;
  crypto::VerificationVector verification;
};

/// Registry summary carried by the key frame of `epoch`: every valid entry
/// included during epoch - 1, in chain order.
struct KeyFrame {
  std::uint64_t epoch = 0;
  std::vector<RegistryEntry> entries;

  Bytes encode(const crypto::GroupParams& params) const;
  static KeyFrame decode(const crypto::GroupParams& params, ByteView data);
  /// hash("relay/key-frame" || encode()).
  crypto::Digest digest(const crypto::GroupParams& params) const;
  nlohmann::json to_json(const crypto::GroupParams& params) const;
};

/// Registry content of a block payload. Payloads that do not start with the
/// registry tag decode to an empty Payload.
struct Payload {
  std::optional<KeyFrame> key_frame;
  std::vector<RegistryEntry> entries;

  Bytes encode(const crypto::GroupParams& params) const;
  static Payload decode(const crypto::GroupParams& params, ByteView data);
};

struct RegistryContext {
  const crypto::GroupParams* params = &crypto::GroupParams::toy();
  RegistryConfig config;
  std::vector<ReplicaId> genesis_replicas;
  std::vector<GroupRecord> genesis_groups;
  /// xi_r for the first round of an epoch; nullopt if unknown.
  std::function<std::optional<crypto::Seed>(std::uint64_t round)> beacon;
  std::function<bool(const RegistryEntry&)> endorsement_ok = [](const RegistryEntry&) { return true; };
};

class RegistryNotFinal : public std::runtime_error {
 public:
  RegistryNotFinal() : std::runtime_error("registry not final") {}
};

struct ActiveSet {
  std::vector<ReplicaId> replicas;  // sorted
  std::vector<GroupRecord> groups;  // genesis first, then by (epoch, j)
};

/// Finalized chain with one block per round: blocks[h]->round() == h.
using ChainView = std::span<const chain::BlockPtr>;

/// Key frame of epoch e recomputed from the blocks of epoch e-1. Throws
/// std::invalid_argument when the chain does not contain all of them.
KeyFrame build_key_frame(const RegistryContext& ctx, ChainView chain, std::uint64_t epoch);

/// True iff the key frame block of `epoch` carries exactly the summary
/// build_key_frame computes.
bool key_frame_matches(const RegistryContext& ctx, ChainView chain, std::uint64_t epoch);

/// Replicas and groups active in round r. Needs the key frame of r's epoch
/// to be finalized; throws RegistryNotFinal otherwise.
ActiveSet active_set(const RegistryContext& ctx, ChainView chain, std::uint64_t r);

/// Members of candidate group j of epoch e: group_derive(xi_{e*l}, j, U, n)
/// with U the replicas active at round e*l.
std::vector<ReplicaId> candidate_group(const RegistryContext& ctx, ChainView chain, std::uint64_t epoch,
                                       std::uint64_t j);

struct Rejection {
  enum class Reason { kInvalidCandidate, kDkgFailed, kQuorumMissed, kDeadlinePassed };
  Reason reason;
  std::string detail;
};

std::string_view reason_name(Rejection::Reason reason);

/// ceil(2n/3).
std::size_t super_majority(std::size_t n);

/// Builds the group-join entry for candidate j of `epoch`. `dkg` is nullopt
/// when the DKG failed. `signatures` are the members' shares on x;
/// `inclusion_round` is where the entry would be included.
std::variant<RegistryEntry, Rejection> register_group(const RegistryContext& ctx, ChainView chain,
                                                      std::uint64_t epoch, std::uint64_t j,
                                                      const std::optional<crypto::DkgResult>& dkg,
                                                      std::span<const crypto::SignatureShare> signatures,
                                                      std::uint64_t inclusion_round);

}  // namespace relay::registry
