/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <stdexcept>

#include "relay/types.hpp"

namespace relay {

/// Canonical big-endian encoder. All hashed structures go through this.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  ByteWriter& u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
  }
  ByteWriter& u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
  }
  ByteWriter& raw(ByteView data) {
    out_.insert(out_.end(), data.begin(), data.end());
    return *this;
  }
  /// u64 length prefix followed by the bytes.
  ByteWriter& field(ByteView data) {
    u64(data.size());
    return raw(data);
  }

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (auto b : s) v = (v << 8) | b;
    return v;
  }
  std::uint64_t u64() {
    auto s = take(8);
    std::uint64_t v = 0;
    for (auto b : s) v = (v << 8) | b;
    return v;
  }
  ByteView raw(std::size_t n) { return take(n); }
  ByteView field() { return take(u64()); }
  bool empty() const { return pos_ == data_.size(); }

 private:
  ByteView take(std::size_t n) {
    if (n > data_.size() - pos_) throw std::out_of_range("truncated encoding");
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace relay
