/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relay {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Registered replica label. Strongly typed so it cannot be mixed up with
/// group positions (which are 1-based indices inside a committee).
enum class ReplicaId : std::uint32_t {};

constexpr ReplicaId replica_id(std::uint32_t value) { return ReplicaId{value}; }
constexpr std::uint32_t to_underlying(ReplicaId id) { return static_cast<std::uint32_t>(id); }

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

}  // namespace relay
