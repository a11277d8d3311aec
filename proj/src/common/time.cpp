/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/time.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace relay {

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("invalid time value: " + std::string(s));
  }
  return v;
}

}  // namespace

SimTime SimTime::ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("time denominator must be positive");
  __int128 scaled = static_cast<__int128>(num) * kTicksPerUnit;
  if (scaled % den != 0) {
    throw std::invalid_argument("time " + std::to_string(num) + "/" + std::to_string(den) +
                                " is not representable on the simulation clock");
  }
  return SimTime(static_cast<std::int64_t>(scaled / den));
}

SimTime SimTime::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
    std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    std::int64_t num = (negative ? -1 : 1) * ((negative ? -w : w) * den + f);
    return ratio(num, den);
  }
  return units(parse_int(text));
}

std::string SimTime::to_string() const {
  std::int64_t g = std::gcd(ticks_ < 0 ? -ticks_ : ticks_, kTicksPerUnit);
  if (g == 0) return "0";
  std::int64_t num = ticks_ / g;
  std::int64_t den = kTicksPerUnit / g;
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace relay
