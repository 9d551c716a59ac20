#pragma once

// Scenario files: JSON documents whose dimensional fields carry explicit
// unit suffixes. See scenarios/three_class_uplink.json for a full example.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prcg/efficiency.hpp"
#include "prcg/game.hpp"

namespace prcg {

struct EfficiencySpec {
  std::string family = "exponential";
  int packet_size_bits = 100;

  bool operator==(const EfficiencySpec&) const = default;
};

struct UserEntry {
  std::string label;
  QosSpec qos;
  double gain = 1.0;
  std::size_t count = 1;  // identical copies

  bool operator==(const UserEntry& o) const {
    return label == o.label && qos.source_rate == o.qos.source_rate &&
           qos.max_delay == o.qos.max_delay && gain == o.gain &&
           count == o.count;
  }
};

struct ClassEntry {
  std::string label;
  QosSpec qos;
  std::optional<std::size_t> population;  // nullopt: "large"

  bool operator==(const ClassEntry& o) const {
    return label == o.label && qos.source_rate == o.qos.source_rate &&
           qos.max_delay == o.qos.max_delay && population == o.population;
  }
};

struct SweepSpec {
  std::string variable = "delay";
  double from = 0.0;  // s
  double to = 0.0;    // s
  std::size_t samples = 0;
  bool log_scale = true;
  std::vector<double> source_rates;  // bits/s, one curve each
  double other_size = 0.2;           // total size of the other users

  bool operator==(const SweepSpec&) const = default;
};

struct ValidationSpec {
  std::uint64_t packets = 1'000'000;
  /// Replaces f* as the per-attempt success probability when set.
  std::optional<double> success_prob;

  bool operator==(const ValidationSpec&) const = default;
};

struct Scenario {
  SystemParams system;
  EfficiencySpec efficiency;
  std::vector<UserEntry> users;
  std::vector<ClassEntry> classes;
  std::vector<std::vector<std::size_t>> candidates;
  std::optional<SweepSpec> sweep;
  ValidationSpec validation;
  std::uint64_t seed = 1;

  /// Users with `count` copies expanded; labels get a "#i" suffix.
  std::vector<UserProfile> expanded_users() const;
  std::vector<std::string> expanded_labels() const;

  EfficiencyFunction efficiency_function() const;
};

bool operator==(const Scenario& a, const Scenario& b);

/// Throws ConfigError with the offending field path on invalid input.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& s);

}  // namespace prcg
