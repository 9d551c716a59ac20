#include "prcg/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "prcg/error.hpp"

namespace prcg::units {

namespace {

struct Unit {
  std::string_view suffix;
  int exponent;  // value = number * 10^exponent
};

// Suffixes are case-sensitive: "ms" and "Ms" would otherwise collide.
constexpr std::array kFrequency{Unit{"Hz", 0}, Unit{"kHz", 3},
                                Unit{"MHz", 6}, Unit{"GHz", 9}};
constexpr std::array kBitRate{Unit{"bps", 0}, Unit{"kbps", 3},
                              Unit{"Mbps", 6}, Unit{"Gbps", 9}};
constexpr std::array kDuration{Unit{"s", 0}, Unit{"ms", -3},
                               Unit{"us", -6}, Unit{"ns", -9}};
constexpr std::array kPower{Unit{"W", 0}, Unit{"mW", -3},
                            Unit{"uW", -6}, Unit{"nW", -9},
                            Unit{"pW", -12}};
constexpr std::array kBits{Unit{"bits", 0}, Unit{"bit", 0},
                           Unit{"kbits", 3}};

std::pair<const Unit*, const Unit*> table(Quantity q) {
  switch (q) {
    case Quantity::frequency:
      return {kFrequency.data(), kFrequency.data() + kFrequency.size()};
    case Quantity::bit_rate:
      return {kBitRate.data(), kBitRate.data() + kBitRate.size()};
    case Quantity::duration:
      return {kDuration.data(), kDuration.data() + kDuration.size()};
    case Quantity::power:
      return {kPower.data(), kPower.data() + kPower.size()};
    case Quantity::bits:
      return {kBits.data(), kBits.data() + kBits.size()};
  }
  return {nullptr, nullptr};
}

std::string_view base_suffix(Quantity q) { return table(q).first->suffix; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse(std::string_view text, Quantity q, const std::string& field) {
  const std::string_view s = trim(text);
  double number = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), number);
  if (ec != std::errc{} || ptr == s.data()) {
    throw ConfigError(field, "expected a number with a unit, got '" +
                                 std::string(text) + "'");
  }
  const std::string_view suffix = trim(s.substr(ptr - s.data()));

  // Power may also be given in dBW / dBm.
  if (q == Quantity::power && (suffix == "dBW" || suffix == "dBm")) {
    const double watts = std::pow(10.0, number / 10.0) * (suffix == "dBm" ? 1e-3 : 1.0);
    if (!std::isfinite(watts)) throw ConfigError(field, "value out of range");
    return watts;
  }

  const auto [first, last] = table(q);
  for (const Unit* u = first; u != last; ++u) {
    if (u->suffix == suffix) {
      // Divide for sub-units so that e.g. "10 ms" is exactly 0.01.
      const double p = std::pow(10.0, std::abs(u->exponent));
      const double v = u->exponent >= 0 ? number * p : number / p;
      if (!std::isfinite(v)) throw ConfigError(field, "value out of range");
      return v;
    }
  }
  std::string allowed;
  for (const Unit* u = first; u != last; ++u) {
    if (!allowed.empty()) allowed += ", ";
    allowed += u->suffix;
  }
  throw ConfigError(field, suffix.empty()
                               ? "missing unit (one of " + allowed + ")"
                               : "unknown unit '" + std::string(suffix) +
                                     "' (expected one of " + allowed + ")");
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format(double value, Quantity q) {
  return shortest(value) + " " + std::string(base_suffix(q));
}

}  // namespace prcg::units
