/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/chain/pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace relay::chain {

std::size_t replica_rank(ReplicaId label, const crypto::Seed& xi_r, std::span<const ReplicaId> universe) {
  return crypto::permutation(universe, xi_r).rank_of(label);
}

BlockPool::BlockPool(const crypto::GroupParams& params) {
  auto entry = std::make_unique<PoolEntry>();
  entry->block = Block::genesis(params);
  entry->notarized = true;
  genesis_ = entry.get();
  by_round_[0].push_back(genesis_);
  entries_.emplace(genesis_->digest(), std::move(entry));
}

const PoolEntry* BlockPool::find(const crypto::Digest& digest) const {
  auto it = entries_.find(digest);
  return it == entries_.end() ? nullptr : it->second.get();
}

const PoolEntry& BlockPool::insert(BlockPtr block, std::size_t rank) {
  if (const auto* existing = find(block->digest())) return *existing;
  if (block->is_genesis()) throw std::invalid_argument("a pool holds exactly one genesis block");
  const auto* parent = find(block->prev());
  if (parent == nullptr) throw std::invalid_argument("parent not in pool");
  if (parent->round() + 1 != block->round()) throw std::invalid_argument("round does not follow parent");

  auto entry = std::make_unique<PoolEntry>();
  entry->block = std::move(block);
  entry->parent = parent;
  entry->rank = rank;
  entry->chain_weight = parent->chain_weight + block_weight(rank);
  const auto* raw = entry.get();
  by_round_[raw->round()].push_back(raw);
  entries_.emplace(raw->digest(), std::move(entry));
  return *raw;
}

bool BlockPool::mark_notarized(const crypto::Digest& digest, crypto::GroupSignature notarization) {
  auto it = entries_.find(digest);
  if (it == entries_.end()) throw std::invalid_argument("unknown block");
  auto& e = *it->second;
  if (e.notarized) return false;
  e.notarized = true;
  e.notarization = std::move(notarization);
  return true;
}

std::span<const PoolEntry* const> BlockPool::proposals(std::uint64_t round) const {
  auto it = by_round_.find(round);
  if (it == by_round_.end()) return {};
  return it->second;
}

std::vector<const PoolEntry*> BlockPool::notarized(std::uint64_t round) const {
  std::vector<const PoolEntry*> out;
  for (const auto* e : proposals(round)) {
    if (e->notarized) out.push_back(e);
  }
  return out;
}

Chain::Chain(const PoolEntry* head) : head_(head) {
  if (head == nullptr) throw std::invalid_argument("chain needs a head");
}

const PoolEntry& Chain::at(std::uint64_t height) const {
  if (height > head_->round()) throw std::out_of_range("height beyond chain head");
  const auto* e = head_;
  while (e->round() > height) e = e->parent;
  return *e;
}

std::vector<BlockPtr> Chain::blocks() const {
  std::vector<BlockPtr> out(length());
  for (const auto* e = head_; e != nullptr; e = e->parent) out[e->round()] = e->block;
  return out;
}

bool Chain::is_prefix_of(const Chain& other) const {
  if (length() > other.length()) return false;
  return &other.at(head_->round()) == head_;
}

Chain common_prefix(std::span<const PoolEntry* const> heads) {
  if (heads.empty()) throw std::invalid_argument("common prefix of an empty set");
  std::vector<const PoolEntry*> cursor(heads.begin(), heads.end());
  auto low = (*std::min_element(cursor.begin(), cursor.end(),
                                [](auto* a, auto* b) { return a->round() < b->round(); }))
                 ->round();
  for (auto& c : cursor) {
    while (c->round() > low) c = c->parent;
  }
  for (;;) {
    bool same = std::all_of(cursor.begin(), cursor.end(), [&](auto* c) { return c == cursor.front(); });
    if (same) return Chain(cursor.front());
    for (auto& c : cursor) c = c->parent;
  }
}

Chain heaviest_valid_chain(const BlockPool& pool, std::uint64_t r) {
  if (r == 0) throw std::runtime_error("no extendable chain");
  const PoolEntry* best = nullptr;
  for (const auto* e : pool.proposals(r - 1)) {
    if (!e->notarized) continue;
    if (best == nullptr) {
      best = e;
      continue;
    }
    auto c = e->chain_weight <=> best->chain_weight;
    if (c > 0 || (c == 0 && e->digest() < best->digest())) best = e;
  }
  if (best == nullptr) throw std::runtime_error("no extendable chain");
  return Chain(best);
}

ValidationResult validate_block(const Block& block, const BlockPool& pool, const ValidationContext& ctx) {
  ValidationResult out;
  if (block.is_genesis()) {
    out.validity = block.digest() == pool.genesis().digest() ? Validity::kValid : Validity::kInvalid;
    return out;
  }
  const auto* parent = pool.find(block.prev());
  if (parent == nullptr) {
    // Unknown parent: the caller queues the block until it arrives.
    out.validity = Validity::kMissingDependency;
    return out;
  }
  if (parent->round() + 1 != block.round()) return out;

  if (parent->block->is_genesis()) {
    if (block.nota()) return out;
  } else {
    if (!block.nota()) return out;
    const auto* keys = ctx.notary_keys(parent->round());
    if (keys == nullptr) {
      out.validity = Validity::kMissingDependency;
      return out;
    }
    if (!ctx.verify(*keys, notary_message(parent->digest()), *block.nota())) return out;
  }

  if (ctx.payload_ok && !ctx.payload_ok(block.payload())) return out;

  std::optional<std::size_t> rank;
  try {
    rank = ctx.rank(block.round(), block.owner());
  } catch (const std::out_of_range&) {
    return out;
  }
  if (!rank) {
    out.validity = Validity::kMissingDependency;
    return out;
  }
  out.validity = Validity::kValid;
  out.rank = *rank;
  return out;
}

}  // namespace relay::chain
