/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/crypto/group.hpp"

#include <stdexcept>
#include <string>

#include "relay/codec.hpp"

namespace relay::crypto {

namespace {

constexpr const char* kToyP = "1ffffffffffff6bb";
constexpr const char* kToyQ = "ffffffffffffb5d";
constexpr const char* kToyG = "4";

// q = next_prime(SHA-256("...standard group q") | 2^255); p = k*q + 1 with k
// taken from a counter-mode hash of "...standard group p" (counter 798 is the
// first yielding a 2048-bit prime); g = 2^((p-1)/q).
constexpr const char* kStdP =
    "d299e8bd733217180dcbfb71bc7e726f2fe09a20f7ae865fc299d8cc806e2b807d406225550e73d3369d381b7acb089f"
    "b5ae036dba9d9d9ee69dd73a3a7b94fdcc0501c91be4a80fda1f65a6182c377e0e14cc7e7a9b110db9e8e2ec8f9c559c"
    "8d5e3f4e99b80327e8d3bf4625b98dbc2d99a9b417fd25401a920774b4aa7034cab2b61cf3533043a82ec0e629c13743"
    "d8b530e38864f16e25eb02b0fa7b55204f68b53669598366f218fc98534bd9872075928c8f41d7fc2068450810bd8adf"
    "c9f3ff902d678d52131b6c66d98a74d3b0ffa06979349647e56223bf8099ffed2f53e620a74167defc66103b49e18309"
    "94e3e4b2f4f37921c73d3fdb7efea083";
constexpr const char* kStdQ = "f5c103ce9959eb1e37709be298993e36c57931881e2c49328b7d371ba139127f";
constexpr const char* kStdG =
    "49b5a663c147147c8d3190e7deaf381d511aab88d0045c6b5b4f1d0f46a0f0236d7c4c1c6d4fdf6c6ebbdc273c24943f"
    "922ea82437da35cec11892ecda72c7353bbed1d2a4545ab4a52e0703f5bcc6335702dc78bb8cc270d136b1bcc0c3cc00"
    "6da40a901248a65dbd095ecb04efda90460574892c767e446f3b38b755e53c87d6b96ede980e91dbfec64f3ea1a8de93"
    "0f8ef8a5a858a0cc76d4dc910a69b503f0faec2d4ce604900d9e925126184b927afc19b41de2b62fc8ac6aaa721433ef"
    "92b76f08441bdc4d8c89f7fbcd5618a9dcbc07a2e49651e9af7091897191eeb6d6457591b5d2a9cf2ab816210e6a63ae"
    "702042bbf7fb4ee6d7ff772f05a26352";

std::size_t byte_length(const mpz_class& v) { return (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8; }

mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

Bytes export_fixed(const mpz_class& v, std::size_t width) {
  if (v < 0) throw std::invalid_argument("cannot encode negative integer");
  std::size_t len = byte_length(v);
  if (len > width) throw std::invalid_argument("integer exceeds encoding width");
  Bytes out(width, 0);
  if (v != 0) {
    std::size_t count = 0;
    mpz_export(out.data() + (width - len), &count, 1, 1, 1, 0, v.get_mpz_t());
  }
  return out;
}

mpz_class import_bytes(ByteView data) {
  mpz_class v;
  if (!data.empty()) mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  return v;
}

Bytes expand(std::string_view domain, ByteView data, std::size_t length) {
  Bytes out;
  out.reserve(length + kDigestSize);
  for (std::uint32_t counter = 0; out.size() < length; ++counter) {
    ByteWriter w;
    w.field(to_bytes(domain)).u32(counter).raw(data);
    auto d = hash(w.bytes());
    out.insert(out.end(), d.bytes.begin(), d.bytes.end());
  }
  out.resize(length);
  return out;
}

GroupParams::GroupParams(mpz_class p, mpz_class q, mpz_class g)
    : p_(std::move(p)), q_(std::move(q)), g_(std::move(g)) {
  if (q_ <= 1 || p_ <= q_) throw std::invalid_argument("invalid group parameters");
  cofactor_ = (p_ - 1) / q_;
  element_bytes_ = byte_length(p_);
  scalar_bytes_ = byte_length(q_);
}

const GroupParams& GroupParams::toy() {
  static const GroupParams params(mpz_class(kToyP, 16), mpz_class(kToyQ, 16), mpz_class(kToyG, 16));
  return params;
}

const GroupParams& GroupParams::standard() {
  static const GroupParams params(mpz_class(kStdP, 16), mpz_class(kStdQ, 16), mpz_class(kStdG, 16));
  return params;
}

const GroupParams& GroupParams::preset(std::string_view name) {
  if (name == "toy") return toy();
  if (name == "standard") return standard();
  throw std::invalid_argument("unknown parameter preset: " + std::string(name));
}

bool GroupParams::validate() const {
  if (mpz_probab_prime_p(p_.get_mpz_t(), 40) == 0) return false;
  if (mpz_probab_prime_p(q_.get_mpz_t(), 40) == 0) return false;
  if (mod(p_ - 1, q_) != 0) return false;
  if (g_ <= 1 || g_ >= p_) return false;
  return pow(generator(), q_).value == 1;
}

bool GroupParams::is_member(const Element& e) const {
  if (e.value < 1 || e.value >= p_) return false;
  mpz_class r;
  mpz_powm(r.get_mpz_t(), e.value.get_mpz_t(), q_.get_mpz_t(), p_.get_mpz_t());
  return r == 1;
}

Element GroupParams::mul(const Element& a, const Element& b) const {
  mpz_class r = a.value * b.value;
  return Element{mod(r, p_)};
}

Element GroupParams::pow(const Element& base, const mpz_class& exponent) const {
  mpz_class e = mod(exponent, q_);
  Element r;
  mpz_powm(r.value.get_mpz_t(), base.value.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
  return r;
}

Element GroupParams::pow(const Element& base, const Scalar& exponent) const {
  return pow(base, exponent.value);
}

Element GroupParams::exp_g(const Scalar& exponent) const { return pow(generator(), exponent); }

Scalar GroupParams::add(const Scalar& a, const Scalar& b) const { return Scalar{mod(a.value + b.value, q_)}; }
Scalar GroupParams::sub(const Scalar& a, const Scalar& b) const { return Scalar{mod(a.value - b.value, q_)}; }
Scalar GroupParams::mul(const Scalar& a, const Scalar& b) const { return Scalar{mod(a.value * b.value, q_)}; }

Scalar GroupParams::inverse(const Scalar& a) const {
  Scalar r;
  if (mpz_invert(r.value.get_mpz_t(), a.value.get_mpz_t(), q_.get_mpz_t()) == 0) {
    throw std::domain_error("scalar not invertible");
  }
  return r;
}

Scalar GroupParams::scalar(std::uint64_t v) const {
  mpz_class m;
  mpz_set_ui(m.get_mpz_t(), v);
  return Scalar{mod(m, q_)};
}

Scalar GroupParams::hash_to_scalar(std::string_view domain, ByteView data) const {
  auto wide = expand(domain, data, scalar_bytes_ + 16);
  return Scalar{mod(import_bytes(wide), q_)};
}

Element GroupParams::hash_to_group(ByteView message) const {
  for (std::uint32_t attempt = 0;; ++attempt) {
    ByteWriter w;
    w.u32(attempt).raw(message);
    auto wide = expand("relay/h1", w.bytes(), element_bytes_ + 16);
    mpz_class x = mod(import_bytes(wide), p_);
    if (x == 0) continue;
    Element e;
    mpz_powm(e.value.get_mpz_t(), x.get_mpz_t(), cofactor_.get_mpz_t(), p_.get_mpz_t());
    if (e.value != 1) return e;
  }
}

Bytes GroupParams::encode(const Element& e) const { return export_fixed(e.value, element_bytes_); }
Bytes GroupParams::encode(const Scalar& s) const { return export_fixed(s.value, scalar_bytes_); }

Element GroupParams::decode_element(ByteView data) const {
  if (data.size() != element_bytes_) throw std::invalid_argument("element encoding has wrong width");
  return Element{import_bytes(data)};
}

Scalar GroupParams::decode_scalar(ByteView data) const {
  if (data.size() != scalar_bytes_) throw std::invalid_argument("scalar encoding has wrong width");
  return Scalar{import_bytes(data)};
}

}  // namespace relay::crypto
