/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "relay/chain/block.hpp"
#include "relay/chain/weight.hpp"

namespace relay::chain {

/// A block that passed validation, linked to its parent entry.
struct PoolEntry {
  BlockPtr block;
  const PoolEntry* parent = nullptr;  // nullptr only for genesis
  std::size_t rank = 0;
  DyadicWeight chain_weight;  // sum of block weights from genesis (weight 0) to here
  bool notarized = false;
  std::optional<crypto::GroupSignature> notarization;

  std::uint64_t round() const { return block->round(); }
  const crypto::Digest& digest() const { return block->digest(); }
};

/// Position of `label` under permutation(universe, xi_r), zero-based.
std::size_t replica_rank(ReplicaId label, const crypto::Seed& xi_r, std::span<const ReplicaId> universe);

/// 2^-rank.
inline DyadicWeight block_weight(std::size_t rank) { return DyadicWeight::of_rank(rank); }

/// Valid blocks known to one replica or observer, indexed by digest and round.
/// Genesis is present from construction and counts as notarized.
class BlockPool {
 public:
  explicit BlockPool(const crypto::GroupParams& params);
  BlockPool(const BlockPool&) = delete;
  BlockPool& operator=(const BlockPool&) = delete;

  const PoolEntry& genesis() const { return *genesis_; }
  const PoolEntry* find(const crypto::Digest& digest) const;
  bool contains(const crypto::Digest& digest) const { return find(digest) != nullptr; }

  /// Adds a block whose parent is already in the pool. Idempotent. Throws
  /// std::invalid_argument if the parent is missing or the round is not
  /// parent round + 1.
  const PoolEntry& insert(BlockPtr block, std::size_t rank);
  /// Returns true if the block was not notarized before.
  bool mark_notarized(const crypto::Digest& digest, crypto::GroupSignature notarization);

  /// Entries of a round in insertion order.
  std::span<const PoolEntry* const> proposals(std::uint64_t round) const;
  std::vector<const PoolEntry*> notarized(std::uint64_t round) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<crypto::Digest, std::unique_ptr<PoolEntry>> entries_;
  std::map<std::uint64_t, std::vector<const PoolEntry*>> by_round_;
  const PoolEntry* genesis_ = nullptr;
};

/// Chain B_0..B_h viewed through its head entry. len = h + 1.
class Chain {
 public:
  explicit Chain(const PoolEntry* head);

  const PoolEntry& head() const { return *head_; }
  std::uint64_t length() const { return head_->round() + 1; }
  const DyadicWeight& weight() const { return head_->chain_weight; }
  /// Entry at height h <= head round.
  const PoolEntry& at(std::uint64_t height) const;
  std::vector<BlockPtr> blocks() const;
  /// True iff this chain is a prefix of (or equal to) `other`.
  bool is_prefix_of(const Chain& other) const;
  bool operator==(const Chain& o) const { return head_ == o.head_; }

 private:
  const PoolEntry* head_;
};

inline const DyadicWeight& chain_weight(const Chain& c) { return c.weight(); }

/// Longest common prefix of the chains ending in each entry. Throws
/// std::invalid_argument on an empty set.
Chain common_prefix(std::span<const PoolEntry* const> heads);

/// Heaviest chain of length r, i.e. with a notarized round-(r-1) head. Equal
/// weights go to the smaller head digest. Throws std::runtime_error
/// ("no extendable chain") when round r-1 has no notarized block.
Chain heaviest_valid_chain(const BlockPool& pool, std::uint64_t r);

enum class Validity { kValid, kInvalid, kMissingDependency };

/// What validate_block needs from outside the pool. Every callback is
/// required except payload_ok.
struct ValidationContext {
  /// Key material of the committee notarizing blocks of `round`, or nullptr
  /// if the beacon output selecting it is not known yet.
  std::function<const crypto::GroupKeys*(std::uint64_t round)> notary_keys;
  /// Rank of `owner` in `round`; nullopt if xi_round is not known yet.
  /// Throws std::out_of_range for labels outside the universe.
  std::function<std::optional<std::size_t>(std::uint64_t round, ReplicaId owner)> rank;
  /// Group-signature check; a caller may memoize here.
  std::function<bool(const crypto::GroupKeys&, ByteView message, const crypto::GroupSignature&)> verify;
  /// Payload predicate, "always valid" if empty.
  std::function<bool(ByteView payload)> payload_ok;
};

struct ValidationResult {
  Validity validity = Validity::kInvalid;
  std::size_t rank = 0;  // meaningful when valid
};

/// Checks: the parent is in the pool with round r-1 and prev = hash(parent);
/// nota is a valid notarization of the parent by the round-(r-1) notary
/// committee (absent iff the parent is genesis); the payload predicate holds.
/// A missing parent, committee or beacon value yields kMissingDependency.
ValidationResult validate_block(const Block& block, const BlockPool& pool, const ValidationContext& ctx);

}  // namespace relay::chain
