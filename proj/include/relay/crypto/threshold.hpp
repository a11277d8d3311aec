/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "relay/crypto/group.hpp"
#include "relay/crypto/primitives.hpp"

// Unique, non-interactive (t, n)-threshold signatures over a Schnorr group.
//
// A signature share is H1(m)^{sk_i} together with a Chaum-Pedersen proof that
// log_{H1(m)}(share) = log_g(pk_i). Shares recover to H1(m)^{sk} by Lagrange
// interpolation in the exponent, so the group signature does not depend on
// which t shares were used. A GroupSignature carries its contributing shares so
// that third parties can verify it without a pairing.

namespace relay::crypto {

struct SchemeParams {
  const GroupParams* group = &GroupParams::toy();
  std::size_t threshold = 1;   // t
  std::size_t group_size = 1;  // n

  /// t = floor(n / 2) + 1.
  static SchemeParams majority(const GroupParams& group, std::size_t n);
  void validate() const;
};

/// Feldman commitments to the group polynomial: v_k = g^{a_k}, k < t.
struct VerificationVector {
  std::vector<Element> coefficients;

  std::size_t threshold() const { return coefficients.size(); }
  const Element& public_key() const { return coefficients.at(0); }
};

struct GroupPublicKey {
  Element element;
};

struct SecretKeyShare {
  std::uint32_t index = 0;  // 1-based position in the group
  Scalar scalar;
};

struct DleqProof {
  Scalar challenge;
  Scalar response;
};

struct SignatureShare {
  std::uint32_t index = 0;
  Element value;
  DleqProof proof;
};

struct GroupSignature {
  Element value;
  std::vector<SignatureShare> contributors;
};

/// pk_i = prod_k v_k^{i^k}.
Element public_key_share(const GroupParams& params, const VerificationVector& v, std::uint32_t index);

/// Verification vector plus every member's public key share, precomputed.
class GroupKeys {
 public:
  GroupKeys(const GroupParams& params, VerificationVector v, std::size_t group_size);

  const GroupParams& params() const { return *params_; }
  const VerificationVector& verification() const { return v_; }
  GroupPublicKey public_key() const { return GroupPublicKey{v_.public_key()}; }
  std::size_t threshold() const { return v_.threshold(); }
  std::size_t group_size() const { return share_keys_.size(); }
  /// Public key share of 1-based index; throws std::out_of_range.
  const Element& share_key(std::uint32_t index) const;

 private:
  const GroupParams* params_;
  VerificationVector v_;
  std::vector<Element> share_keys_;
};

// ---- Joint-Feldman DKG ----------------------------------------------------

struct DealerPolynomial {
  std::vector<Scalar> coefficients;  // a_0 .. a_{t-1}
};

/// What a dealer publishes (commitments) and sends privately (shares).
struct Dealing {
  std::uint32_t dealer = 0;          // 1-based
  std::vector<Element> commitments;  // g^{a_k}
  std::vector<Scalar> shares;        // shares[i - 1] = f(i) for receiver i
};

struct DealerOutput {
  Dealing dealing;
  DealerPolynomial polynomial;
};

struct DkgResult {
  VerificationVector verification;
  std::vector<SecretKeyShare> shares;  // one per group position 1..n
  std::set<std::uint32_t> disqualified;
};

/// Dealer `dealer` samples a degree t-1 polynomial from `randomness`.
DealerOutput deal(const SchemeParams& params, std::uint32_t dealer, const Seed& randomness);

/// Checks every share against its dealer's commitments. A dealer with any
/// failed check draws a complaint and is disqualified; the rest are summed.
/// Throws std::runtime_error("DKG failed") with fewer than t qualified dealers.
DkgResult complete_dkg(const SchemeParams& params, std::span<const Dealing> dealings);

/// deal() for every dealer followed by complete_dkg().
DkgResult dkg(const SchemeParams& params, std::span<const Seed> dealer_randomness);

/// g^{share} == prod_k commitments[k]^{index^k}.
bool verify_dealt_share(const GroupParams& params, std::span<const Element> commitments,
                        std::uint32_t index, const Scalar& share);

// ---- signing ---------------------------------------------------------------

/// Deterministic: the proof nonce is derived from (m || scalar).
SignatureShare sign_share(const GroupParams& params, ByteView message, const SecretKeyShare& share,
                          const Element& share_key);
SignatureShare sign_share(ByteView message, const SecretKeyShare& share, const GroupKeys& keys);

bool verify_share(const GroupParams& params, ByteView message, const Element& share_key,
                  const SignatureShare& s);
bool verify_share(ByteView message, const GroupKeys& keys, std::uint32_t index, const SignatureShare& s);

/// Lagrange recovery at 0 from the t lowest-indexed shares. Every passed share
/// is kept as a contributor. Throws std::invalid_argument on fewer than t
/// shares or repeated indices.
GroupSignature recover(const GroupParams& params, std::size_t threshold, std::span<const SignatureShare> shares);

/// True iff >= t distinct-index contributors each verify and their recovery
/// equals the carried value.
bool verify_group(ByteView message, const GroupKeys& keys, const GroupSignature& sigma);

/// hash(encode(sigma.value)).
Seed derive_randomness(const GroupParams& params, const GroupSignature& sigma);

/// Lagrange coefficients at 0 for the given distinct indices, over Z_q.
std::vector<Scalar> lagrange_at_zero(const GroupParams& params, std::span<const std::uint32_t> indices);

Bytes encode(const GroupParams& params, const SignatureShare& s);
Bytes encode(const GroupParams& params, const GroupSignature& sigma);
GroupSignature decode_group_signature(const GroupParams& params, ByteView data);

// ---- batch verification kernels --------------------------------------------

struct ShareCheck {
  Bytes message;
  std::uint32_t index = 0;
  SignatureShare share;
};

/// Reference implementation, one share after another.
std::vector<std::uint8_t> verify_shares_serial(const GroupKeys& keys, std::span<const ShareCheck> checks);
/// OpenMP data-parallel version; identical output to the serial one.
std::vector<std::uint8_t> verify_shares_parallel(const GroupKeys& keys, std::span<const ShareCheck> checks);

}  // namespace relay::crypto
