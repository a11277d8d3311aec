/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace relay {

/// Simulated time. Values are exact rationals with the fixed denominator
/// kTicksPerUnit, so every bound comparison is exact. 720720 = lcm(1..16),
/// which makes all common fractions of a time unit representable.
class SimTime {
 public:
  static constexpr std::int64_t kTicksPerUnit = 720720;

  constexpr SimTime() = default;
  static constexpr SimTime from_ticks(std::int64_t ticks) { return SimTime(ticks); }
  static constexpr SimTime units(std::int64_t whole) { return SimTime(whole * kTicksPerUnit); }
  /// Exact num/den of a time unit; throws if not representable.
  static SimTime ratio(std::int64_t num, std::int64_t den);
  /// Parses "3", "-1/2", "0.25" or "1.5". Throws std::invalid_argument when
  /// the value is not an exact multiple of one tick.
  static SimTime parse(std::string_view text);
  static constexpr SimTime infinity() { return SimTime(INT64_MAX / 4); }

  constexpr std::int64_t ticks() const { return ticks_; }
  constexpr bool is_infinite() const { return ticks_ >= INT64_MAX / 4; }
  double to_double() const { return static_cast<double>(ticks_) / kTicksPerUnit; }
  /// Reduced fraction, e.g. "7", "5/2".
  std::string to_string() const;

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(SimTime o) const { return SimTime(ticks_ + o.ticks_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(ticks_ - o.ticks_); }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime(ticks_ * k); }
  constexpr SimTime& operator+=(SimTime o) {
    ticks_ += o.ticks_;
    return *this;
  }

 private:
  constexpr explicit SimTime(std::int64_t ticks) : ticks_(ticks) {}
  std::int64_t ticks_ = 0;
};

}  // namespace relay
