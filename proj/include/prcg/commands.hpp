#pragma once

// Command-line front end. Each command reads a parsed Scenario and writes a
// report; run_cli() wires them to the argument parser.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prcg/scenario.hpp"

namespace prcg::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kInfeasible = 3,
  kValidationFailed = 4,
  kInternalError = 5,
};

enum class OutputFormat { human, csv, machine };

/// Environment variable naming the directory searched for relative
/// --scenario paths (and for scenario.json when --scenario is omitted).
inline constexpr const char* kScenarioDirEnv = "PRCG_SCENARIO_DIR";

struct Context {
  const Scenario& scenario;
  OutputFormat format;
  std::ostream& out;
  std::ostream& err;
};

int cmd_gamma_star(const Context& ctx);
int cmd_size(const Context& ctx);
int cmd_equilibrium(const Context& ctx, bool verify_brd);
int cmd_sweep(const Context& ctx, int figure);
int cmd_admit(const Context& ctx,
              const std::vector<std::vector<std::size_t>>& extra_candidates);
int cmd_validate(const Context& ctx, std::uint64_t packets, std::uint64_t seed);

/// Reads allocation rows ("23,1,0" or "23 1 0", '#' comments) from a file.
std::vector<std::vector<std::size_t>> load_candidates(const std::string& path,
                                                      std::size_t num_classes);

/// Full CLI; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace prcg::cli
