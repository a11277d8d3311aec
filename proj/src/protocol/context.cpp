/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/protocol/context.hpp"

#include <cstdint>
#include <stdexcept>

#include "relay/codec.hpp"

namespace relay::protocol {

std::size_t Directory::slot_for(const crypto::Seed& xi) const { return committee::committee_select(xi, groups.size()); }

const committee::Group& Directory::committee_for(const crypto::Seed& xi) const { return groups.at(slot_for(xi)); }

namespace {

// Identity of the key material plus the exact bytes checked.
crypto::Digest cache_key(char tag, const crypto::GroupKeys& keys, ByteView message, const Bytes& signature) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(tag))
      .u64(reinterpret_cast<std::uintptr_t>(&keys))
      .field(message)
      .field(signature);
  return crypto::hash(w.bytes());
}

}  // namespace

bool VerifyCache::verify_share(const crypto::GroupKeys& keys, ByteView message, const crypto::SignatureShare& s) {
  auto key = cache_key('S', keys, message, crypto::encode(keys.params(), s));
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  bool ok = crypto::verify_share(message, keys, s.index, s);
  memo_.emplace(key, ok);
  return ok;
}

bool VerifyCache::verify_group(const crypto::GroupKeys& keys, ByteView message, const crypto::GroupSignature& sigma) {
  auto key = cache_key('G', keys, message, crypto::encode(keys.params(), sigma));
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  bool ok = crypto::verify_group(message, keys, sigma);
  memo_.emplace(key, ok);
  return ok;
}

}  // namespace relay::protocol
