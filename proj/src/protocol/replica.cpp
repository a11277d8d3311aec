/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/protocol/replica.hpp"

#include <algorithm>
#include <stdexcept>

#include "relay/codec.hpp"

namespace relay::protocol {

Replica::Replica(ReplicaId id, const Directory& directory, const ProtocolConfig& config,
                 std::map<std::size_t, crypto::SecretKeyShare> shares, Network& network, VerifyCache& cache,
                 EventSink* sink, ReplicaOptions options)
    : id_(id),
      dir_(directory),
      config_(config),
      shares_(std::move(shares)),
      net_(network),
      cache_(cache),
      sink_(sink),
      options_(options),
      pool_(*directory.params),
      observer_(pool_.genesis(), options.observer,
                [this](SimTime delay, std::function<void()> cb) { net_.set_timer(id_, delay, std::move(cb)); }) {
  xi_.emplace(0, chain::genesis_randomness());
  observer_.set_finalize_hook([this](std::uint64_t h, const chain::Chain& before, const chain::Chain& after) {
    if (sink_) sink_->on_finalized(id_, h, before, after, net_.now());
  });

  validation_.notary_keys = [this](std::uint64_t r) -> const crypto::GroupKeys* {
    const auto* g = notary_committee(r);
    return g ? g->keys.get() : nullptr;
  };
  validation_.rank = [this](std::uint64_t r, ReplicaId owner) -> std::optional<std::size_t> {
    auto it = ranking_.find(r);
    if (it == ranking_.end()) {
      auto xi = xi_.find(r);
      if (xi == xi_.end()) return std::nullopt;
      it = ranking_.emplace(r, crypto::permutation(dir_.universe, xi->second)).first;
    }
    return it->second.rank_of(owner);
  };
  validation_.verify = [this](const crypto::GroupKeys& keys, ByteView msg, const crypto::GroupSignature& sigma) {
    return cache_.verify_group(keys, msg, sigma);
  };
  validation_.payload_ok = config_.payload_ok;
}

void Replica::start() { enter_round(1); }

std::optional<crypto::Seed> Replica::beacon(std::uint64_t round) const {
  auto it = xi_.find(round);
  if (it == xi_.end()) return std::nullopt;
  return it->second;
}

// ---- receiving ---------------------------------------------------------------

void Replica::receive(ReplicaId from, const MessagePtr& m) {
  if (!alive()) return;
  auto key = m->key();
  if (auto it = processed_.find(key.round); it != processed_.end() && it->second.count(key)) return;

  // The relay decision uses the round the artifact was processed in.
  bool relay = from != id_ && !options_.passive && should_relay(*m);
  Dependency dep;
  switch (handle(from, *m, dep)) {
    case Outcome::kAccepted:
      processed_[key.round].insert(key);
      if (relay && alive()) net_.broadcast(id_, m);
      break;
    case Outcome::kWait:
      waiting_[dep].emplace_back(from, m);
      // Waiting on an earlier round's beacon means the shares were lost.
      if (std::get<0>(dep) == 1 && std::get<2>(dep) < round_) maybe_request_beacon(std::get<2>(dep));
      break;
    case Outcome::kRejected:
      if (sink_) sink_->on_rejected(id_, *m, net_.now());
      break;
    case Outcome::kDuplicate:
    case Outcome::kStale:
      break;
  }
}

Replica::Outcome Replica::handle(ReplicaId from, const Message& m, Dependency& dep) {
  switch (m.kind()) {
    case MessageKind::kBeaconShare: return on_beacon_share(std::get<BeaconShare>(m.body), dep);
    case MessageKind::kBlockProposal: return on_proposal(from, std::get<BlockProposal>(m.body), dep);
    case MessageKind::kBlockSignature: return on_signature(std::get<BlockSignature>(m.body), dep);
    case MessageKind::kNotarization: return on_notarization(from, std::get<Notarization>(m.body), dep);
    case MessageKind::kNotarizedBlock: return on_notarized_block(from, std::get<NotarizedBlockMsg>(m.body), dep);
  }
  return Outcome::kRejected;
}

Replica::Outcome Replica::on_beacon_share(const BeaconShare& b, Dependency& dep) {
  const auto r = b.round;
  if (r == 0) return Outcome::kRejected;
  if (xi_.count(r)) return Outcome::kStale;
  auto prev = xi_.find(r - 1);
  if (prev == xi_.end()) {
    dep = on_beacon_round(r - 1);
    return Outcome::kWait;
  }
  const auto& group = dir_.committee_for(prev->second);
  if (b.share.index == 0 || b.share.index > group.members.size()) return Outcome::kRejected;
  auto& shares = beacon_shares_[r];
  if (shares.count(b.share.index)) return Outcome::kDuplicate;
  if (!cache_.verify_share(*group.keys, chain::beacon_message(r, prev->second), b.share)) return Outcome::kRejected;

  shares.emplace(b.share.index, b.share);
  if (shares.size() >= group.threshold()) {
    std::vector<crypto::SignatureShare> list;
    for (const auto& [_, s] : shares) list.push_back(s);
    auto sigma = crypto::recover(*dir_.params, group.threshold(), list);
    beacon_output(r, crypto::derive_randomness(*dir_.params, sigma));
  }
  return Outcome::kAccepted;
}

Replica::Outcome Replica::admit_block(ReplicaId from, const chain::BlockPtr& block, Dependency& dep) {
  if (pool_.contains(block->digest())) return Outcome::kAccepted;
  auto result = chain::validate_block(*block, pool_, validation_);
  if (result.validity == chain::Validity::kInvalid) return Outcome::kRejected;
  if (result.validity == chain::Validity::kMissingDependency) {
    const auto r = block->round();
    if (!pool_.contains(block->prev())) {
      dep = on_block(block->prev());
      maybe_request(from, block->prev());
    } else if (!xi_.count(r - 1)) {
      dep = on_beacon_round(r - 1);
    } else {
      dep = on_beacon_round(r);
    }
    return Outcome::kWait;
  }

  const auto* parent = pool_.find(block->prev());
  if (!parent->notarized && pool_.mark_notarized(parent->digest(), *block->nota())) newly_notarized(*parent);
  if (pool_.contains(block->digest())) return Outcome::kAccepted;  // inserted while handling the parent
  const auto& entry = pool_.insert(block, result.rank);
  requested_.erase(entry.digest());
  if (sink_) sink_->on_block_seen(id_, entry, net_.now());
  wake(on_block(entry.digest()));
  return Outcome::kAccepted;
}

Replica::Outcome Replica::on_proposal(ReplicaId from, const BlockProposal& p, Dependency& dep) {
  const auto r = p.block->round();
  if (r == 0) return Outcome::kRejected;
  if (r < round_) return Outcome::kStale;
  if (r > round_) {
    dep = on_round(r);
    return Outcome::kWait;
  }
  if (pool_.contains(p.block->digest())) return Outcome::kDuplicate;
  auto out = admit_block(from, p.block, dep);
  if (out == Outcome::kAccepted && round_ == r) notarization_step();
  return out;
}

Replica::Outcome Replica::on_signature(const BlockSignature& s, Dependency& dep) {
  const auto r = s.round;
  if (r < round_) return Outcome::kStale;
  if (r > round_) {
    dep = on_round(r);
    return Outcome::kWait;
  }
  const auto* entry = pool_.find(s.block);
  if (entry == nullptr) {
    dep = on_block(s.block);
    return Outcome::kWait;
  }
  if (entry->round() != r) return Outcome::kRejected;
  if (entry->notarized) return Outcome::kStale;
  const auto* group = notary_committee(r);
  if (group == nullptr) return Outcome::kRejected;
  if (s.share.index == 0 || s.share.index > group->members.size()) return Outcome::kRejected;
  auto& shares = block_shares_[r][s.block];
  if (shares.count(s.share.index)) return Outcome::kDuplicate;
  if (!cache_.verify_share(*group->keys, chain::notary_message(s.block), s.share)) return Outcome::kRejected;

  shares.emplace(s.share.index, s.share);
  if (shares.size() >= group->threshold()) {
    std::vector<crypto::SignatureShare> list;
    for (const auto& [_, sh] : shares) list.push_back(sh);
    auto sigma = crypto::recover(*dir_.params, group->threshold(), list);
    on_notarization_constructed(*entry, sigma);
  }
  return Outcome::kAccepted;
}

Replica::Outcome Replica::on_notarization(ReplicaId from, const Notarization& n, Dependency& dep) {
  const auto* entry = pool_.find(n.block);
  if (entry == nullptr) {
    dep = on_block(n.block);
    maybe_request(from, n.block);
    return Outcome::kWait;
  }
  if (entry->round() != n.round || n.round == 0) return Outcome::kRejected;
  if (entry->notarized) return Outcome::kDuplicate;
  const auto* group = notary_committee(n.round);
  if (group == nullptr) {
    dep = on_beacon_round(n.round);
    return Outcome::kWait;
  }
  if (!cache_.verify_group(*group->keys, chain::notary_message(n.block), n.notarization)) return Outcome::kRejected;
  if (pool_.mark_notarized(n.block, n.notarization)) newly_notarized(*entry);
  return Outcome::kAccepted;
}

Replica::Outcome Replica::on_notarized_block(ReplicaId from, const NotarizedBlockMsg& n, Dependency& dep) {
  const auto& block = n.notarized.block;
  if (block->is_genesis()) return Outcome::kDuplicate;
  if (const auto* known = pool_.find(block->digest()); known && known->notarized) return Outcome::kDuplicate;
  auto out = admit_block(from, block, dep);
  if (out != Outcome::kAccepted) return out;
  const auto* entry = pool_.find(block->digest());
  if (entry->notarized) return Outcome::kDuplicate;
  const auto* group = notary_committee(block->round());
  if (!cache_.verify_group(*group->keys, chain::notary_message(block->digest()), n.notarized.notarization)) {
    return Outcome::kRejected;
  }
  if (pool_.mark_notarized(block->digest(), n.notarized.notarization)) newly_notarized(*entry);
  return Outcome::kAccepted;
}

void Replica::wake(const Dependency& dep) {
  auto it = waiting_.find(dep);
  if (it == waiting_.end()) return;
  auto queued = std::move(it->second);
  waiting_.erase(it);
  for (const auto& [from, m] : queued) receive(from, m);
}

void Replica::maybe_request(ReplicaId peer, const crypto::Digest& digest) {
  if (peer == id_) return;
  auto now = net_.now();
  if (auto it = requested_.find(digest); it != requested_.end() && now - it->second < config_.effective_resync()) {
    return;
  }
  requested_[digest] = now;
  net_.request_block(id_, peer, digest);
}

void Replica::maybe_request_beacon(std::uint64_t r) {
  if (options_.passive || xi_.count(r)) return;
  // Ask for the lowest round whose predecessor output is known.
  while (r > 1 && !xi_.count(r - 1)) --r;
  auto now = net_.now();
  if (auto it = requested_beacon_.find(r);
      it != requested_beacon_.end() && now - it->second < config_.effective_resync()) {
    return;
  }
  requested_beacon_[r] = now;
  net_.request_beacon(id_, r);
}

void Replica::serve_beacon_request(ReplicaId requester, std::uint64_t round) {
  if (!alive() || options_.passive || round > round_) return;
  if (!should_emit_beacon_share(round)) return;
  if (auto share = beacon_share(round)) {
    net_.send(id_, requester, make_message(id_, BeaconShare{round, std::move(*share)}));
  }
}

std::optional<crypto::SignatureShare> Replica::beacon_share(std::uint64_t r) const {
  auto prev = xi_.find(r - 1);
  if (r == 0 || prev == xi_.end()) return std::nullopt;
  const auto slot = dir_.slot_for(prev->second);
  const auto& group = dir_.groups[slot];
  auto sk = shares_.find(slot);
  if (group.position_of(id_) == 0 || sk == shares_.end()) return std::nullopt;
  return crypto::sign_share(chain::beacon_message(r, prev->second), sk->second, *group.keys);
}

void Replica::serve_block_request(ReplicaId requester, const crypto::Digest& digest) {
  if (!alive()) return;
  const auto* entry = pool_.find(digest);
  if (entry == nullptr || entry->block->is_genesis()) return;
  if (entry->notarized) {
    net_.send(id_, requester, notarized_block_message(*entry));
  } else {
    net_.send(id_, requester, make_message(entry->block->owner(), BlockProposal{entry->block}));
  }
}

// ---- state transitions --------------------------------------------------------

void Replica::newly_notarized(const chain::PoolEntry& entry) {
  if (sink_) sink_->on_notarized(id_, entry, net_.now());
  observer_.ingest(entry);
  MessagePtr nb;
  if (!options_.passive) {
    nb = notarized_block_message(entry);
    publish(nb);
  }
  if (entry.round() >= round_) {
    enter_round(entry.round() + 1);
    if (round_ == entry.round() + 1) entry_notarization_ = nb;
  }
}

void Replica::beacon_output(std::uint64_t r, const crypto::Seed& xi) {
  xi_.emplace(r, xi);
  beacon_shares_.erase(r);
  if (sink_) sink_->on_beacon(id_, r, xi, net_.now());
  if (r + 1 == round_) emit_beacon_share();
  if (r == round_) propose();
  wake(on_beacon_round(r));
}

void Replica::enter_round(std::uint64_t r) {
  round_ = r;
  entered_at_ = net_.now();
  window_open_ = false;
  own_current_.clear();
  entry_notarization_.reset();
  if (sink_) sink_->on_enter_round(id_, r, entered_at_);
  prune();

  net_.set_timer(id_, config_.block_time, [this, r] {
    if (!alive() || round_ != r) return;
    window_open_ = true;
    notarization_step();
  });
  if (!options_.passive) {
    net_.set_timer(id_, config_.effective_resync(), [this, r] { resync(r); });
  }
  emit_beacon_share();
  if (round_ == r && xi_.count(r)) propose();
  if (round_ == r) wake(on_round(r));
}

void Replica::prune() {
  const auto r = round_;
  if (r > 2) processed_.erase(processed_.begin(), processed_.lower_bound(r - 2));
  beacon_shares_.erase(beacon_shares_.begin(), beacon_shares_.lower_bound(r > 0 ? r - 1 : 0));
  block_shares_.erase(block_shares_.begin(), block_shares_.lower_bound(r));
  if (r > 2) ranking_.erase(ranking_.begin(), ranking_.lower_bound(r - 2));
  // Round-bound artifacts that waited on something and went stale.
  for (auto it = waiting_.begin(); it != waiting_.end();) {
    auto& list = it->second;
    std::erase_if(list, [&](const auto& item) {
      auto kind = item.second->kind();
      bool round_bound = kind == MessageKind::kBeaconShare || kind == MessageKind::kBlockProposal ||
                         kind == MessageKind::kBlockSignature;
      return round_bound && item.second->round() + 1 < r;
    });
    it = list.empty() ? waiting_.erase(it) : std::next(it);
  }
}

void Replica::resync(std::uint64_t r) {
  if (!alive() || round_ != r) return;
  if (!xi_.count(r)) maybe_request_beacon(r);
  for (const auto& m : own_current_) publish(m);
  if (entry_notarization_) publish(entry_notarization_);
  net_.set_timer(id_, config_.effective_resync(), [this, r] { resync(r); });
}

void Replica::emit_beacon_share() {
  const auto r = round_;
  if (options_.passive || beacon_emitted_.count(r)) return;
  auto share = beacon_share(r);
  if (!share) return;
  beacon_emitted_.insert(r);
  if (!should_emit_beacon_share(r)) return;
  auto m = make_message(id_, BeaconShare{r, std::move(*share)});
  own_current_.push_back(m);
  publish(m);
  deliver_local(m);
}

void Replica::propose() {
  const auto r = round_;
  if (options_.passive || proposed_.count(r) || !xi_.count(r)) return;
  const auto* parent = choose_parent(r);
  if (parent == nullptr) return;
  proposed_.insert(r);
  for (auto& block : make_proposals(r, *parent, rank_in(r))) {
    auto m = make_message(id_, BlockProposal{std::move(block)});
    own_current_.push_back(m);
    publish(m);
    deliver_local(m);
    if (round_ != r) break;
  }
}

void Replica::notarization_step() {
  const auto r = round_;
  if (options_.passive || !window_open_) return;
  auto props = pool_.proposals(r);
  if (props.empty()) return;
  auto min_rank = (*std::min_element(props.begin(), props.end(), [](auto* a, auto* b) { return a->rank < b->rank; }))
                      ->rank;
  std::vector<const chain::PoolEntry*> minimal;
  for (const auto* e : props) {
    if (e->rank == min_rank && !signed_.count(e->digest())) minimal.push_back(e);
  }
  if (minimal.empty()) return;
  for (const auto* e : choose_to_sign(r, std::move(minimal))) {
    auto share = notary_share(*e);
    if (!share) return;
    signed_.insert(e->digest());
    if (sink_) sink_->on_sign(id_, *e, net_.now());
    auto m = make_message(id_, BlockSignature{e->digest(), r, std::move(*share)});
    own_current_.push_back(m);
    publish(m);
    deliver_local(m);
    if (round_ != r) return;
  }
}

// ---- hooks and helpers -----------------------------------------------------------

const chain::PoolEntry* Replica::choose_parent(std::uint64_t r) {
  try {
    return &chain::heaviest_valid_chain(pool_, r).head();
  } catch (const std::runtime_error&) {
    return nullptr;
  }
}

std::vector<chain::BlockPtr> Replica::make_proposals(std::uint64_t r, const chain::PoolEntry& parent,
                                                     std::size_t /*rank*/) {
  return {chain::Block::make(*dir_.params, parent.digest(), r, parent.notarization, default_payload(r), id_)};
}

std::vector<const chain::PoolEntry*> Replica::choose_to_sign(std::uint64_t /*r*/,
                                                             std::vector<const chain::PoolEntry*> minimal) {
  return minimal;
}

void Replica::publish(const MessagePtr& m) {
  if (sink_) sink_->on_publish(id_, *m, net_.now());
  net_.broadcast(id_, m);
}

bool Replica::should_relay(const Message& m) const {
  switch (m.kind()) {
    case MessageKind::kBeaconShare:
    case MessageKind::kBlockProposal:
    case MessageKind::kBlockSignature:
      return m.round() == round_;
    case MessageKind::kNotarization:
    case MessageKind::kNotarizedBlock:
      return true;
  }
  return false;
}

void Replica::on_notarization_constructed(const chain::PoolEntry& entry, const crypto::GroupSignature& sigma) {
  auto m = make_message(id_, Notarization{entry.digest(), entry.round(), sigma});
  publish(m);
  deliver_local(m);
}

std::size_t Replica::rank_in(std::uint64_t r) const { return *validation_.rank(r, id_); }

const committee::Group* Replica::notary_committee(std::uint64_t r) const {
  auto it = xi_.find(r);
  return it == xi_.end() ? nullptr : &dir_.committee_for(it->second);
}

std::optional<crypto::SignatureShare> Replica::notary_share(const chain::PoolEntry& entry) const {
  auto xi = xi_.find(entry.round());
  if (xi == xi_.end()) return std::nullopt;
  const auto slot = dir_.slot_for(xi->second);
  const auto& group = dir_.groups[slot];
  auto sk = shares_.find(slot);
  if (group.position_of(id_) == 0 || sk == shares_.end()) return std::nullopt;
  return crypto::sign_share(chain::notary_message(entry.digest()), sk->second, *group.keys);
}

Bytes Replica::default_payload(std::uint64_t r) const {
  ByteWriter w;
  w.raw(to_bytes("payload")).u64(r).u32(to_underlying(id_));
  return std::move(w).bytes();
}

MessagePtr Replica::notarized_block_message(const chain::PoolEntry& entry) const {
  return make_message(id_, NotarizedBlockMsg{chain::NotarizedBlock{entry.block, *entry.notarization}});
}

}  // namespace relay::protocol
