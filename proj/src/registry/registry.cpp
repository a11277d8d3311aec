/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/registry/registry.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "relay/codec.hpp"
#include "relay/committee/sampling.hpp"

namespace relay::registry {

namespace {

constexpr std::string_view kPayloadTag = "relay-registry/1";

crypto::SignatureShare decode_share(const crypto::GroupParams& g, ByteReader& r) {
  crypto::SignatureShare s;
  s.index = r.u32();
  s.value = g.decode_element(r.raw(g.element_bytes()));
  s.proof.challenge = g.decode_scalar(r.raw(g.scalar_bytes()));
  s.proof.response = g.decode_scalar(r.raw(g.scalar_bytes()));
  return s;
}

void check_chain(ChainView chain) {
  for (std::size_t h = 0; h < chain.size(); ++h) {
    if (!chain[h] || chain[h]->round() != h) throw std::invalid_argument("chain must hold one block per round");
  }
}

std::vector<RegistryEntry> entries_of(const crypto::GroupParams& g, const chain::BlockPtr& block) {
  try {
    return Payload::decode(g, block->payload()).entries;
  } catch (const std::exception&) {
    return {};  // malformed registry payloads carry nothing
  }
}

// Key frames 0..last computed from the chain, plus the fold over them.
class Fold {
 public:
  Fold(const RegistryContext& ctx, ChainView chain) : ctx_(ctx), chain_(chain) {
    check_chain(chain);
    if (ctx.config.epoch_length == 0) throw std::invalid_argument("epoch length must be positive");
    frames_.push_back(KeyFrame{0, {}});
  }

  const KeyFrame& frame(std::uint64_t e) {
    const auto l = ctx_.config.epoch_length;
    if (chain_.size() < first_round(e, l)) throw std::invalid_argument("chain does not cover the epoch");
    while (frames_.size() <= e) frames_.push_back(build(frames_.size()));
    return frames_[e];
  }

  ActiveSet active(std::uint64_t e) {
    // Frame k summarizes epoch k-1, whose entries activate in epoch k+1.
    std::set<ReplicaId> replicas(ctx_.genesis_replicas.begin(), ctx_.genesis_replicas.end());
    ActiveSet out;
    out.groups = ctx_.genesis_groups;
    for (std::uint64_t k = 1; k + 1 <= e; ++k) {
      for (const auto& entry : frame(k).entries) {
        switch (entry.kind) {
          case EntryKind::kReplicaJoin: replicas.insert(replica_id(entry.subject)); break;
          case EntryKind::kReplicaLeave: replicas.erase(replica_id(entry.subject)); break;
          case EntryKind::kGroupJoin: {
            const auto registered = k - 1;
            if (e >= registered + 2 + ctx_.config.group_lifetime) break;  // expired
            auto x = entry.tuple(*ctx_.params);
            out.groups.push_back(GroupRecord{registered, x.index, false, members(registered, x.index),
                                             std::move(x.verification)});
            break;
          }
        }
      }
    }
    out.replicas.assign(replicas.begin(), replicas.end());
    return out;
  }

  std::vector<ReplicaId> members(std::uint64_t e, std::uint64_t j) {
    const auto r = first_round(e, ctx_.config.epoch_length);
    if (!ctx_.beacon) throw std::runtime_error("no beacon source");
    auto xi = ctx_.beacon(r);
    if (!xi) throw std::runtime_error("beacon output unavailable for round " + std::to_string(r));
    auto universe = active(e).replicas;
    auto n = ctx_.config.group_size == 0 ? universe.size() : ctx_.config.group_size;
    return committee::group_derive(*xi, j, universe, n);
  }

  std::optional<Rejection> check_group(const RegistryEntry& entry, std::uint64_t e) {
    const auto& g = *ctx_.params;
    if (entry.subject == 0 || entry.subject > ctx_.config.m_max) {
      return Rejection{Rejection::Reason::kInvalidCandidate, "candidate index outside 1..m_max"};
    }
    GroupTuple x;
    try {
      x = entry.tuple(g);
    } catch (const std::exception&) {
      return Rejection{Rejection::Reason::kInvalidCandidate, "malformed group tuple"};
    }
    if (x.epoch != e || x.index != entry.subject) {
      return Rejection{Rejection::Reason::kInvalidCandidate, "tuple does not match the entry"};
    }
    auto group = members(e, x.index);
    if (x.verification.threshold() != group.size() / 2 + 1) {
      return Rejection{Rejection::Reason::kDkgFailed, "verification vector has the wrong threshold"};
    }
    for (const auto& v : x.verification.coefficients) {
      if (!g.is_member(v)) return Rejection{Rejection::Reason::kDkgFailed, "verification vector off the group"};
    }
    const auto message = x.message(g);
    std::set<std::uint32_t> valid;
    for (const auto& s : entry.signatures) {
      if (s.index == 0 || s.index > group.size() || valid.count(s.index)) continue;
      if (crypto::verify_share(g, message, crypto::public_key_share(g, x.verification, s.index), s)) {
        valid.insert(s.index);
      }
    }
    if (valid.size() < super_majority(group.size())) {
      return Rejection{Rejection::Reason::kQuorumMissed, std::to_string(valid.size()) + " of " +
                                                             std::to_string(super_majority(group.size())) +
                                                             " signatures"};
    }
    return std::nullopt;
  }

 private:
  KeyFrame build(std::uint64_t epoch) {
    const auto l = ctx_.config.epoch_length;
    const auto e = epoch - 1;  // the epoch being summarized
    KeyFrame out{epoch, {}};

    // Everything included before epoch e, as seen at its start.
    std::set<std::uint32_t> registered;
    for (auto id : ctx_.genesis_replicas) registered.insert(to_underlying(id));
    for (std::uint64_t k = 1; k < epoch; ++k) {
      for (const auto& entry : frames_[k].entries) {
        if (entry.kind == EntryKind::kReplicaJoin) registered.insert(entry.subject);
        if (entry.kind == EntryKind::kReplicaLeave) registered.erase(entry.subject);
      }
    }
    std::set<std::uint64_t> groups_seen;

    for (auto h = first_round(e, l); h < first_round(epoch, l); ++h) {
      for (auto& entry : entries_of(*ctx_.params, chain_[h])) {
        if (entry.epoch_submitted != e) continue;  // inclusion deadline
        switch (entry.kind) {
          case EntryKind::kReplicaJoin:
            if (entry.subject == 0 || registered.count(entry.subject) || entry.payload.empty() ||
                !ctx_.endorsement_ok(entry)) {
              continue;
            }
            registered.insert(entry.subject);
            break;
          case EntryKind::kReplicaLeave:
            if (!registered.count(entry.subject)) continue;
            registered.erase(entry.subject);
            break;
          case EntryKind::kGroupJoin:
            if (groups_seen.count(entry.subject) || check_group(entry, e)) continue;
            groups_seen.insert(entry.subject);
            break;
        }
        out.entries.push_back(std::move(entry));
      }
    }
    return out;
  }

  const RegistryContext& ctx_;
  ChainView chain_;
  std::vector<KeyFrame> frames_;
};

}  // namespace

void RegistryConfig::validate(std::uint64_t growth_k) const {
  if (epoch_length == 0 || m_max == 0 || group_lifetime == 0) {
    throw std::invalid_argument("registry parameters must be positive");
  }
  if (epoch_length < growth_k + 2) {
    throw std::invalid_argument("epoch length " + std::to_string(epoch_length) + " is below k + 2 = " +
                                std::to_string(growth_k + 2));
  }
}

std::string_view kind_name(EntryKind kind) {
  switch (kind) {
    case EntryKind::kReplicaJoin: return "replica-join";
    case EntryKind::kReplicaLeave: return "replica-leave";
    case EntryKind::kGroupJoin: return "group-join";
  }
  return "?";
}

std::string_view reason_name(Rejection::Reason reason) {
  switch (reason) {
    case Rejection::Reason::kInvalidCandidate: return "invalid candidate";
    case Rejection::Reason::kDkgFailed: return "DKG failed";
    case Rejection::Reason::kQuorumMissed: return "signature quorum missed";
    case Rejection::Reason::kDeadlinePassed: return "inclusion deadline passed";
  }
  return "?";
}

std::size_t super_majority(std::size_t n) { return (2 * n + 2) / 3; }

// ---- encodings ------------------------------------------------------------------

Bytes GroupTuple::message(const crypto::GroupParams& params) const {
  ByteWriter w;
  w.raw(to_bytes("REGISTER-GROUP")).u64(epoch).u64(index).raw(params.encode(verification.public_key()));
  return std::move(w).bytes();
}

Bytes encode_tuple(const crypto::GroupParams& params, const GroupTuple& x) {
  ByteWriter w;
  w.u64(x.epoch).u64(x.index).u32(static_cast<std::uint32_t>(x.verification.coefficients.size()));
  for (const auto& v : x.verification.coefficients) w.raw(params.encode(v));
  return std::move(w).bytes();
}

GroupTuple RegistryEntry::tuple(const crypto::GroupParams& params) const {
  if (kind != EntryKind::kGroupJoin) throw std::logic_error("not a group-join entry");
  ByteReader r(payload);
  GroupTuple x;
  x.epoch = r.u64();
  x.index = r.u64();
  auto count = r.u32();
  if (count == 0) throw std::invalid_argument("empty verification vector");
  for (std::uint32_t k = 0; k < count; ++k) {
    x.verification.coefficients.push_back(params.decode_element(r.raw(params.element_bytes())));
  }
  if (!r.empty()) throw std::invalid_argument("trailing bytes in group tuple");
  return x;
}

Bytes RegistryEntry::encode(const crypto::GroupParams& params) const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind)).u32(subject).u64(epoch_submitted).field(payload).field(endorsement);
  w.u32(static_cast<std::uint32_t>(signatures.size()));
  for (const auto& s : signatures) w.raw(crypto::encode(params, s));
  return std::move(w).bytes();
}

RegistryEntry RegistryEntry::decode(const crypto::GroupParams& params, ByteView data) {
  ByteReader r(data);
  RegistryEntry e;
  auto kind = r.u8();
  if (kind < 1 || kind > 3) throw std::invalid_argument("unknown registry entry kind");
  e.kind = static_cast<EntryKind>(kind);
  e.subject = r.u32();
  e.epoch_submitted = r.u64();
  auto payload = r.field();
  e.payload.assign(payload.begin(), payload.end());
  auto endorsement = r.field();
  e.endorsement.assign(endorsement.begin(), endorsement.end());
  auto count = r.u32();
  for (std::uint32_t k = 0; k < count; ++k) e.signatures.push_back(decode_share(params, r));
  if (!r.empty()) throw std::invalid_argument("trailing bytes in registry entry");
  return e;
}

bool RegistryEntry::operator==(const RegistryEntry& o) const {
  auto same_share = [](const crypto::SignatureShare& a, const crypto::SignatureShare& b) {
    return a.index == b.index && a.value == b.value && a.proof.challenge == b.proof.challenge &&
           a.proof.response == b.proof.response;
  };
  return kind == o.kind && subject == o.subject && epoch_submitted == o.epoch_submitted && payload == o.payload &&
         endorsement == o.endorsement &&
         std::equal(signatures.begin(), signatures.end(), o.signatures.begin(), o.signatures.end(), same_share);
}

Bytes KeyFrame::encode(const crypto::GroupParams& params) const {
  ByteWriter w;
  w.u64(epoch).u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) w.field(e.encode(params));
  return std::move(w).bytes();
}

KeyFrame KeyFrame::decode(const crypto::GroupParams& params, ByteView data) {
  ByteReader r(data);
  KeyFrame k;
  k.epoch = r.u64();
  auto count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) k.entries.push_back(RegistryEntry::decode(params, r.field()));
  if (!r.empty()) throw std::invalid_argument("trailing bytes in key frame");
  return k;
}

crypto::Digest KeyFrame::digest(const crypto::GroupParams& params) const {
  ByteWriter w;
  w.raw(to_bytes("relay/key-frame")).raw(encode(params));
  return crypto::hash(w.bytes());
}

nlohmann::json KeyFrame::to_json(const crypto::GroupParams& params) const {
  auto list = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j{{"kind", kind_name(e.kind)},
                     {"subject", e.subject},
                     {"epoch_submitted", e.epoch_submitted},
                     {"payload", to_hex(e.payload)},
                     {"endorsement", to_hex(e.endorsement)}};
    if (e.kind == EntryKind::kGroupJoin) {
      std::vector<std::uint32_t> signers;
      for (const auto& s : e.signatures) signers.push_back(s.index);
      j["signers"] = signers;
    }
    list.push_back(std::move(j));
  }
  return {{"epoch", epoch}, {"digest", digest(params).hex()}, {"entries", std::move(list)}};
}

Bytes Payload::encode(const crypto::GroupParams& params) const {
  ByteWriter w;
  w.raw(to_bytes(kPayloadTag)).u8(key_frame ? 1 : 0);
  if (key_frame) w.field(key_frame->encode(params));
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) w.field(e.encode(params));
  return std::move(w).bytes();
}

Payload Payload::decode(const crypto::GroupParams& params, ByteView data) {
  Payload p;
  if (data.size() < kPayloadTag.size() || !std::equal(kPayloadTag.begin(), kPayloadTag.end(), data.begin())) {
    return p;
  }
  ByteReader r(data.subspan(kPayloadTag.size()));
  auto has_frame = r.u8();
  if (has_frame > 1) throw std::invalid_argument("bad key frame flag");
  if (has_frame) p.key_frame = KeyFrame::decode(params, r.field());
  auto count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) p.entries.push_back(RegistryEntry::decode(params, r.field()));
  if (!r.empty()) throw std::invalid_argument("trailing bytes in registry payload");
  return p;
}

// ---- operations ---------------------------------------------------------------------

KeyFrame build_key_frame(const RegistryContext& ctx, ChainView chain, std::uint64_t epoch) {
  Fold fold(ctx, chain);
  return fold.frame(epoch);
}

bool key_frame_matches(const RegistryContext& ctx, ChainView chain, std::uint64_t epoch) {
  const auto r = first_round(epoch, ctx.config.epoch_length);
  if (chain.size() <= r) throw RegistryNotFinal();
  auto expected = build_key_frame(ctx, chain, epoch);
  KeyFrame claimed{epoch, {}};
  try {
    if (auto p = Payload::decode(*ctx.params, chain[r]->payload()); p.key_frame) claimed = *p.key_frame;
  } catch (const std::exception&) {
    return false;
  }
  return claimed.epoch == epoch && claimed.digest(*ctx.params) == expected.digest(*ctx.params);
}

ActiveSet active_set(const RegistryContext& ctx, ChainView chain, std::uint64_t r) {
  const auto e = epoch_of(r, ctx.config.epoch_length);
  if (chain.size() <= first_round(e, ctx.config.epoch_length)) throw RegistryNotFinal();
  Fold fold(ctx, chain);
  return fold.active(e);
}

std::vector<ReplicaId> candidate_group(const RegistryContext& ctx, ChainView chain, std::uint64_t epoch,
                                       std::uint64_t j) {
  if (chain.size() <= first_round(epoch, ctx.config.epoch_length)) throw RegistryNotFinal();
  if (j == 0 || j > ctx.config.m_max) throw std::invalid_argument("candidate index outside 1..m_max");
  Fold fold(ctx, chain);
  return fold.members(epoch, j);
}

std::variant<RegistryEntry, Rejection> register_group(const RegistryContext& ctx, ChainView chain,
                                                      std::uint64_t epoch, std::uint64_t j,
                                                      const std::optional<crypto::DkgResult>& dkg,
                                                      std::span<const crypto::SignatureShare> signatures,
                                                      std::uint64_t inclusion_round) {
  if (j == 0 || j > ctx.config.m_max) {
    return Rejection{Rejection::Reason::kInvalidCandidate, "candidate index outside 1..m_max"};
  }
  if (!dkg) return Rejection{Rejection::Reason::kDkgFailed, "no group key"};
  if (epoch_of(inclusion_round, ctx.config.epoch_length) != epoch) {
    return Rejection{Rejection::Reason::kDeadlinePassed,
                     "included in epoch " + std::to_string(epoch_of(inclusion_round, ctx.config.epoch_length))};
  }
  RegistryEntry entry;
  entry.kind = EntryKind::kGroupJoin;
  entry.subject = static_cast<std::uint32_t>(j);
  entry.epoch_submitted = epoch;
  entry.payload = encode_tuple(*ctx.params, GroupTuple{epoch, j, dkg->verification});
  entry.signatures.assign(signatures.begin(), signatures.end());

  if (chain.size() <= first_round(epoch, ctx.config.epoch_length)) throw RegistryNotFinal();
  Fold fold(ctx, chain);
  if (auto rejected = fold.check_group(entry, epoch)) return *rejected;
  return entry;
}

}  // namespace relay::registry
