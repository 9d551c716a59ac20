#pragma once

// Unit-suffixed quantities in scenario files ("5 MHz", "10 ms", "5 kbps").
// Values are converted to SI on parse and written back in the SI base unit.

#include <string>
#include <string_view>

namespace prcg::units {

enum class Quantity { frequency, bit_rate, duration, power, bits };

/// Throws ConfigError naming `field` on a malformed number, a missing or
/// wrong unit, or a non-finite value.
double parse(std::string_view text, Quantity q, const std::string& field);

/// Shortest text that parses back to exactly `value`.
std::string format(double value, Quantity q);

/// Shortest round-trip decimal form of a double.
std::string shortest(double v);

}  // namespace prcg::units
