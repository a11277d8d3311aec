/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/crypto/threshold.hpp"

#include <algorithm>
#include <stdexcept>

#include "relay/codec.hpp"

namespace relay::crypto {

SchemeParams SchemeParams::majority(const GroupParams& group, std::size_t n) {
  return SchemeParams{&group, n / 2 + 1, n};
}

void SchemeParams::validate() const {
  if (group == nullptr) throw std::invalid_argument("scheme has no group");
  if (threshold < 1 || threshold > group_size) throw std::invalid_argument("threshold must satisfy 1 <= t <= n");
}

Element public_key_share(const GroupParams& params, const VerificationVector& v, std::uint32_t index) {
  if (index == 0) throw std::invalid_argument("share index must be >= 1");
  // Horner in the exponent: ((v_{t-1})^i * v_{t-2})^i ... * v_0.
  Element acc = params.identity();
  mpz_class i;
  mpz_set_ui(i.get_mpz_t(), index);
  for (auto it = v.coefficients.rbegin(); it != v.coefficients.rend(); ++it) {
    acc = params.mul(params.pow(acc, i), *it);
  }
  return acc;
}

GroupKeys::GroupKeys(const GroupParams& params, VerificationVector v, std::size_t group_size)
    : params_(&params), v_(std::move(v)) {
  if (v_.coefficients.empty()) throw std::invalid_argument("empty verification vector");
  share_keys_.reserve(group_size);
  for (std::uint32_t i = 1; i <= group_size; ++i) share_keys_.push_back(public_key_share(params, v_, i));
}

const Element& GroupKeys::share_key(std::uint32_t index) const {
  if (index == 0 || index > share_keys_.size()) throw std::out_of_range("share index outside group");
  return share_keys_[index - 1];
}

// ---- DKG -------------------------------------------------------------------

namespace {

Scalar evaluate(const GroupParams& params, const std::vector<Scalar>& coeffs, std::uint32_t x) {
  Scalar acc = params.scalar(0);
  Scalar xs = params.scalar(x);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = params.add(params.mul(acc, xs), *it);
  return acc;
}

}  // namespace

DealerOutput deal(const SchemeParams& params, std::uint32_t dealer, const Seed& randomness) {
  params.validate();
  const auto& g = *params.group;
  DealerOutput out;
  out.dealing.dealer = dealer;
  for (std::size_t k = 0; k < params.threshold; ++k) {
    ByteWriter w;
    w.raw(randomness.view()).u64(k);
    auto a = g.hash_to_scalar("relay/dkg-coefficient", w.bytes());
    out.dealing.commitments.push_back(g.exp_g(a));
    out.polynomial.coefficients.push_back(std::move(a));
  }
  for (std::uint32_t i = 1; i <= params.group_size; ++i) {
    out.dealing.shares.push_back(evaluate(g, out.polynomial.coefficients, i));
  }
  return out;
}

bool verify_dealt_share(const GroupParams& params, std::span<const Element> commitments, std::uint32_t index,
                        const Scalar& share) {
  VerificationVector v{std::vector<Element>(commitments.begin(), commitments.end())};
  return params.exp_g(share) == public_key_share(params, v, index);
}

DkgResult complete_dkg(const SchemeParams& params, std::span<const Dealing> dealings) {
  params.validate();
  const auto& g = *params.group;
  DkgResult result;

  // Complaint round: each receiver checks the share it got from each dealer.
  std::vector<const Dealing*> qualified;
  for (const auto& d : dealings) {
    bool ok = d.commitments.size() == params.threshold && d.shares.size() == params.group_size &&
              std::all_of(d.commitments.begin(), d.commitments.end(),
                          [&](const Element& e) { return g.is_member(e); });
    for (std::uint32_t i = 1; ok && i <= params.group_size; ++i) {
      ok = verify_dealt_share(g, d.commitments, i, d.shares[i - 1]);
    }
    if (ok) {
      qualified.push_back(&d);
    } else {
      result.disqualified.insert(d.dealer);
    }
  }
  if (qualified.size() < params.threshold) throw std::runtime_error("DKG failed");

  result.verification.coefficients.assign(params.threshold, g.identity());
  for (const auto* d : qualified) {
    for (std::size_t k = 0; k < params.threshold; ++k) {
      result.verification.coefficients[k] = g.mul(result.verification.coefficients[k], d->commitments[k]);
    }
  }
  for (std::uint32_t i = 1; i <= params.group_size; ++i) {
    Scalar sum = g.scalar(0);
    for (const auto* d : qualified) sum = g.add(sum, d->shares[i - 1]);
    result.shares.push_back(SecretKeyShare{i, std::move(sum)});
  }
  return result;
}

DkgResult dkg(const SchemeParams& params, std::span<const Seed> dealer_randomness) {
  if (dealer_randomness.size() != params.group_size) {
    throw std::invalid_argument("need one randomness seed per dealer");
  }
  std::vector<Dealing> dealings;
  for (std::uint32_t d = 1; d <= params.group_size; ++d) {
    dealings.push_back(deal(params, d, dealer_randomness[d - 1]).dealing);
  }
  return complete_dkg(params, dealings);
}

// ---- signing ---------------------------------------------------------------

namespace {

Scalar challenge(const GroupParams& g, const Element& share_key, const Element& h, const Element& value,
                 const Element& a1, const Element& a2) {
  ByteWriter w;
  w.raw(g.encode(g.generator()))
      .raw(g.encode(share_key))
      .raw(g.encode(h))
      .raw(g.encode(value))
      .raw(g.encode(a1))
      .raw(g.encode(a2));
  return g.hash_to_scalar("relay/dleq", w.bytes());
}

}  // namespace

SignatureShare sign_share(const GroupParams& g, ByteView message, const SecretKeyShare& share,
                          const Element& share_key) {
  Element h = g.hash_to_group(message);
  SignatureShare out;
  out.index = share.index;
  out.value = g.pow(h, share.scalar);

  ByteWriter nonce_input;
  nonce_input.field(message).raw(g.encode(share.scalar));
  Scalar k = g.hash_to_scalar("relay/dleq-nonce", nonce_input.bytes());
  Element a1 = g.exp_g(k);
  Element a2 = g.pow(h, k);
  out.proof.challenge = challenge(g, share_key, h, out.value, a1, a2);
  out.proof.response = g.sub(k, g.mul(out.proof.challenge, share.scalar));
  return out;
}

SignatureShare sign_share(ByteView message, const SecretKeyShare& share, const GroupKeys& keys) {
  return sign_share(keys.params(), message, share, keys.share_key(share.index));
}

bool verify_share(const GroupParams& g, ByteView message, const Element& share_key, const SignatureShare& s) {
  if (!g.is_member(s.value)) return false;
  if (s.proof.challenge.value < 0 || s.proof.challenge.value >= g.q()) return false;
  if (s.proof.response.value < 0 || s.proof.response.value >= g.q()) return false;
  Element h = g.hash_to_group(message);
  Element a1 = g.mul(g.exp_g(s.proof.response), g.pow(share_key, s.proof.challenge));
  Element a2 = g.mul(g.pow(h, s.proof.response), g.pow(s.value, s.proof.challenge));
  return challenge(g, share_key, h, s.value, a1, a2) == s.proof.challenge;
}

bool verify_share(ByteView message, const GroupKeys& keys, std::uint32_t index, const SignatureShare& s) {
  if (index == 0 || index > keys.group_size() || s.index != index) return false;
  return verify_share(keys.params(), message, keys.share_key(index), s);
}

std::vector<Scalar> lagrange_at_zero(const GroupParams& g, std::span<const std::uint32_t> indices) {
  std::vector<Scalar> out;
  out.reserve(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    Scalar num = g.scalar(1);
    Scalar den = g.scalar(1);
    for (std::size_t m = 0; m < indices.size(); ++m) {
      if (m == j) continue;
      num = g.mul(num, g.scalar(indices[m]));
      den = g.mul(den, g.sub(g.scalar(indices[m]), g.scalar(indices[j])));
    }
    out.push_back(g.mul(num, g.inverse(den)));
  }
  return out;
}

GroupSignature recover(const GroupParams& g, std::size_t threshold, std::span<const SignatureShare> shares) {
  if (threshold == 0) throw std::invalid_argument("threshold must be positive");
  if (shares.size() < threshold) throw std::invalid_argument("insufficient shares");
  std::vector<const SignatureShare*> sorted;
  for (const auto& s : shares) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->index < b->index; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->index == sorted[i - 1]->index) {
      throw std::invalid_argument("indices must be pairwise different");
    }
  }
  if (sorted.front()->index == 0) throw std::invalid_argument("share index must be >= 1");

  std::vector<std::uint32_t> indices;
  for (std::size_t i = 0; i < threshold; ++i) indices.push_back(sorted[i]->index);
  auto lambda = lagrange_at_zero(g, indices);

  GroupSignature sigma;
  sigma.value = g.identity();
  for (std::size_t i = 0; i < threshold; ++i) sigma.value = g.mul(sigma.value, g.pow(sorted[i]->value, lambda[i]));
  for (const auto* s : sorted) sigma.contributors.push_back(*s);
  return sigma;
}

bool verify_group(ByteView message, const GroupKeys& keys, const GroupSignature& sigma) {
  const auto& g = keys.params();
  if (sigma.contributors.size() < keys.threshold()) return false;
  std::set<std::uint32_t> seen;
  for (const auto& s : sigma.contributors) {
    if (!seen.insert(s.index).second) return false;
    if (!verify_share(message, keys, s.index, s)) return false;
  }
  try {
    return recover(g, keys.threshold(), sigma.contributors).value == sigma.value;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

Seed derive_randomness(const GroupParams& g, const GroupSignature& sigma) {
  return Seed::from_digest(hash(g.encode(sigma.value)));
}

// ---- encodings -------------------------------------------------------------

Bytes encode(const GroupParams& g, const SignatureShare& s) {
  ByteWriter w;
  w.u32(s.index).raw(g.encode(s.value)).raw(g.encode(s.proof.challenge)).raw(g.encode(s.proof.response));
  return std::move(w).bytes();
}

Bytes encode(const GroupParams& g, const GroupSignature& sigma) {
  ByteWriter w;
  w.raw(g.encode(sigma.value)).u32(static_cast<std::uint32_t>(sigma.contributors.size()));
  for (const auto& s : sigma.contributors) w.raw(encode(g, s));
  return std::move(w).bytes();
}

GroupSignature decode_group_signature(const GroupParams& g, ByteView data) {
  ByteReader r(data);
  GroupSignature sigma;
  sigma.value = g.decode_element(r.raw(g.element_bytes()));
  auto count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    SignatureShare s;
    s.index = r.u32();
    s.value = g.decode_element(r.raw(g.element_bytes()));
    s.proof.challenge = g.decode_scalar(r.raw(g.scalar_bytes()));
    s.proof.response = g.decode_scalar(r.raw(g.scalar_bytes()));
    sigma.contributors.push_back(std::move(s));
  }
  if (!r.empty()) throw std::invalid_argument("trailing bytes after group signature");
  return sigma;
}

// ---- batch kernels -----------------------------------------------------------

std::vector<std::uint8_t> verify_shares_serial(const GroupKeys& keys, std::span<const ShareCheck> checks) {
  std::vector<std::uint8_t> out(checks.size(), 0);
  for (std::size_t i = 0; i < checks.size(); ++i) {
    out[i] = verify_share(checks[i].message, keys, checks[i].index, checks[i].share) ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> verify_shares_parallel(const GroupKeys& keys, std::span<const ShareCheck> checks) {
  std::vector<std::uint8_t> out(checks.size(), 0);
  const auto count = static_cast<std::int64_t>(checks.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& c = checks[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = verify_share(c.message, keys, c.index, c.share) ? 1 : 0;
  }
  return out;
}

}  // namespace relay::crypto
