#include "prcg/scenario.hpp"

#include <gtest/gtest.h>

#include <string>

#include "prcg/error.hpp"
#include "prcg/units.hpp"

namespace prcg {
namespace {

std::string field_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

constexpr const char* kMinimal = R"({
  "system": { "bandwidth": "5 MHz", "noise_power": "1e-13 W", "packet_size": "100 bits" },
  "users": [ { "label": "A", "source_rate": "5 kbps", "delay": "10 ms" } ]
})";

TEST(Units, ParsesCommonSuffixes) {
  using units::Quantity;
  EXPECT_EQ(units::parse("5 MHz", Quantity::frequency, "x"), 5e6);
  EXPECT_EQ(units::parse("10 ms", Quantity::duration, "x"), 0.01);
  EXPECT_EQ(units::parse("5 kbps", Quantity::bit_rate, "x"), 5e3);
  EXPECT_EQ(units::parse("100 bits", Quantity::bits, "x"), 100.0);
  EXPECT_EQ(units::parse("1e-13 W", Quantity::power, "x"), 1e-13);
  EXPECT_NEAR(units::parse("30 dBm", Quantity::power, "x"), 1.0, 1e-15);
  EXPECT_NEAR(units::parse("-10 dBW", Quantity::power, "x"), 0.1, 1e-16);
}

TEST(Units, MissingOrWrongUnitNamesTheField) {
  using units::Quantity;
  try {
    units::parse("10", Quantity::duration, "users[0].delay");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "users[0].delay");
  }
  EXPECT_THROW(units::parse("10 MHz", Quantity::duration, "d"), ConfigError);
  EXPECT_THROW(units::parse("fast kbps", Quantity::bit_rate, "r"), ConfigError);
}

TEST(Units, FormatRoundTrips) {
  using units::Quantity;
  for (double v : {0.01, 5e6, 1e-13, 15637.656400913668, 0.1 + 0.2}) {
    for (auto q : {Quantity::frequency, Quantity::duration, Quantity::power,
                   Quantity::bit_rate}) {
      EXPECT_EQ(units::parse(units::format(v, q), q, "x"), v);
    }
  }
}

TEST(Scenario, MinimalDocumentUsesDefaults) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.system.bandwidth, 5e6);
  EXPECT_EQ(s.efficiency.family, "exponential");
  EXPECT_EQ(s.efficiency.packet_size_bits, 100);
  ASSERT_EQ(s.users.size(), 1u);
  EXPECT_EQ(s.users[0].qos.max_delay, 0.01);
  EXPECT_EQ(s.users[0].gain, 1.0);
  EXPECT_FALSE(s.sweep.has_value());
}

TEST(Scenario, BundledFileLoadsAndRoundTrips) {
  const Scenario s = load_scenario(PRCG_SCENARIO_FILE);
  EXPECT_EQ(s.classes.size(), 3u);
  EXPECT_EQ(s.candidates.size(), 5u);
  EXPECT_EQ(s.seed, 2006u);
  ASSERT_TRUE(s.sweep.has_value());
  EXPECT_EQ(s.sweep->samples, 41u);
  EXPECT_FALSE(s.classes[0].population.has_value());
  const Scenario again = parse_scenario(serialize_scenario(s));
  EXPECT_EQ(s, again);
  EXPECT_EQ(serialize_scenario(s), serialize_scenario(again));
}

TEST(Scenario, ExpandsCountedUsers) {
  const Scenario s = parse_scenario(R"({
    "system": { "bandwidth": "5 MHz", "noise_power": "1e-13 W", "packet_size": "100 bits" },
    "users": [ { "label": "A", "source_rate": "5 kbps", "delay": "10 ms", "count": 3 },
               { "label": "B", "source_rate": "50 kbps", "delay": "50 ms", "gain": 0.5 } ]
  })");
  EXPECT_EQ(s.expanded_users().size(), 4u);
  EXPECT_EQ(s.expanded_labels(),
            (std::vector<std::string>{"A#1", "A#2", "A#3", "B"}));
  EXPECT_EQ(s.expanded_users()[3].gain, 0.5);
}

TEST(Scenario, ErrorsNameTheOffendingField) {
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "5 MHz", "noise_power": "1 W",
      "packet_size": "100 bits" },
      "users": [ { "label": "A", "source_rate": "5 kbps", "delay": "10" } ] })"),
            "users[0].delay");
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "5 MHz", "noise_power": "1 W",
      "packet_size": "100 bits" }, "efficiency": { "family": "sigmoid" } })"),
            "efficiency.family");
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "-5 MHz", "noise_power": "1 W",
      "packet_size": "100 bits" } })"),
            "system.bandwidth");
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "5 MHz", "noise_power": "1 W",
      "packet_size": "100 bits", "colour": "red" } })"),
            "system.colour");
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "5 MHz", "noise_power": "1 W" } })"),
            "system.packet_size");
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "5 MHz", "noise_power": "1 W",
      "packet_size": "100 bits" },
      "users": [ { "label": "A", "source_rate": "5 kbps", "delay": "10 ms", "gain": 0 } ] })"),
            "users[0].gain");
}

TEST(Scenario, DuplicateLabelsAreRejected) {
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "5 MHz", "noise_power": "1 W",
      "packet_size": "100 bits" },
      "users": [ { "label": "A", "source_rate": "5 kbps", "delay": "10 ms" },
                 { "label": "A", "source_rate": "5 kbps", "delay": "20 ms" } ] })"),
            "users[1].label");
}

TEST(Scenario, CandidateRowsMatchClassCount) {
  EXPECT_EQ(field_of(R"({ "system": { "bandwidth": "5 MHz", "noise_power": "1 W",
      "packet_size": "100 bits" },
      "classes": [ { "label": "A", "source_rate": "5 kbps", "delay": "10 ms" } ],
      "candidates": [ [1, 2] ] })"),
            "candidates[0]");
}

TEST(Scenario, MalformedJsonIsAConfigError) {
  EXPECT_THROW(parse_scenario("{ not json"), ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

}  // namespace
}  // namespace prcg
