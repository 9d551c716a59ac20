#include "prcg/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prcg/admission.hpp"
#include "prcg/error.hpp"
#include "prcg/game.hpp"
#include "prcg/queueing.hpp"

namespace prcg::cli {

using nlohmann::json;

namespace {

// CSV numbers: six significant digits, scientific where %g chooses it.
std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  return fmt::format("{:.6g}", v);
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit_machine(const Context& ctx, const json& doc) {
  ctx.out << doc.dump(2) << "\n";
}

std::vector<double> delay_grid(const SweepSpec& s) {
  std::vector<double> grid;
  for (std::size_t i = 0; i < s.samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(s.samples - 1);
    grid.push_back(s.log_scale ? s.from * std::pow(s.to / s.from, t)
                               : s.from + (s.to - s.from) * t);
  }
  grid.back() = s.to;
  return grid;
}

std::string counts_text(const std::vector<std::size_t>& counts) {
  return fmt::format("({})", fmt::join(counts, ", "));
}

}  // namespace

int cmd_gamma_star(const Context& ctx) {
  const EfficiencyFunction f = ctx.scenario.efficiency_function();
  const OptimalSir opt = optimal_sir(f);
  switch (ctx.format) {
    case OutputFormat::human:
      fmt::print(ctx.out, "efficiency  {} (M = {} bits)\n", f.family(),
                 f.packet_size_bits());
      fmt::print(ctx.out, "gamma*      {:.6g} ({:.4f} dB)\n", opt.gamma_star,
                 to_db(opt.gamma_star));
      fmt::print(ctx.out, "f*          {:.6g}\n", opt.f_star);
      break;
    case OutputFormat::csv:
      ctx.out << "family,packet_size[bits],gamma_star[linear],f_star\n";
      fmt::print(ctx.out, "{},{},{},{}\n", f.family(), f.packet_size_bits(),
                 csv_num(opt.gamma_star), csv_num(opt.f_star));
      break;
    case OutputFormat::machine:
      emit_machine(ctx, {{"family", f.family()},
                         {"packet_size_bits", f.packet_size_bits()},
                         {"gamma_star", opt.gamma_star},
                         {"f_star", opt.f_star}});
      break;
  }
  return kOk;
}

int cmd_size(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  if (s.users.empty() && s.classes.empty()) {
    throw ConfigError("users", "scenario lists no users or classes");
  }
  const OptimalSir opt = optimal_sir(s.efficiency_function());

  struct Row {
    std::string kind, label;
    QosSpec qos;
    UserSize size;
  };
  std::vector<Row> rows;
  for (const auto& u : s.users) {
    rows.push_back({"user", u.label, u.qos, size_of(u.qos, s.system, opt)});
  }
  for (const auto& c : s.classes) {
    rows.push_back({"class", c.label, c.qos, size_of(c.qos, s.system, opt)});
  }

  switch (ctx.format) {
    case OutputFormat::human:
      fmt::print(ctx.out, "{:<6} {:<12} {:>12} {:>10} {:>12} {:>12} {:>8}\n",
                 "kind", "label", "r [bps]", "D [s]", "Omega_inf", "Omega*",
                 "Phi*");
      for (const auto& r : rows) {
        fmt::print(ctx.out,
                   "{:<6} {:<12} {:>12.6g} {:>10.4g} {:>12.6g} {:>12.6g} {:>8.4g}\n",
                   r.kind, r.label, r.qos.source_rate, r.qos.max_delay,
                   r.size.omega_inf, r.size.omega_star, r.size.phi_star);
      }
      break;
    case OutputFormat::csv:
      ctx.out << "kind,label,source_rate[bps],delay[s],omega_inf[bps],"
                 "omega_star[bps],phi_star\n";
      for (const auto& r : rows) {
        fmt::print(ctx.out, "{},{},{},{},{},{},{}\n", r.kind, r.label,
                   csv_num(r.qos.source_rate), csv_num(r.qos.max_delay),
                   csv_num(r.size.omega_inf), csv_num(r.size.omega_star),
                   csv_num(r.size.phi_star));
      }
      break;
    case OutputFormat::machine: {
      json arr = json::array();
      for (const auto& r : rows) {
        arr.push_back({{"kind", r.kind},
                       {"label", r.label},
                       {"source_rate", r.qos.source_rate},
                       {"delay", r.qos.max_delay},
                       {"omega_inf", r.size.omega_inf},
                       {"omega_star", r.size.omega_star},
                       {"phi_star", r.size.phi_star}});
      }
      emit_machine(ctx, {{"gamma_star", opt.gamma_star},
                         {"f_star", opt.f_star},
                         {"sizes", arr}});
      break;
    }
  }
  return kOk;
}

int cmd_equilibrium(const Context& ctx, bool verify_brd) {
  const Scenario& s = ctx.scenario;
  const auto users = s.expanded_users();
  if (users.empty()) throw ConfigError("users", "equilibrium needs at least one user");
  const auto labels = s.expanded_labels();
  const EfficiencyFunction f = s.efficiency_function();
  const OptimalSir opt = optimal_sir(f);
  const EquilibriumSolution sol = equilibrium(users, s.system, f, opt);

  if (!sol.feasible) {
    if (ctx.format == OutputFormat::machine) {
      emit_machine(ctx, {{"feasible", false},
                         {"total_size", sol.total_size},
                         {"users", users.size()}});
    } else {
      fmt::print(ctx.out, "infeasible: total size {:.5g} >= 1 ({} users)\n",
                 sol.total_size, users.size());
    }
    return kInfeasible;
  }

  std::optional<BrdResult> brd;
  double brd_deviation = std::numeric_limits<double>::quiet_NaN();
  if (verify_brd) {
    const std::vector<double> init(users.size(), 1e-6);
    brd = best_response_dynamics(users, s.system, f, init);
    if (brd->status == BrdStatus::converged) {
      brd_deviation = 0.0;
      for (std::size_t k = 0; k < users.size(); ++k) {
        brd_deviation = std::max(
            brd_deviation,
            std::abs(brd->powers[k] - sol.users[k].power) / sol.users[k].power);
      }
    }
  }

  bool capped = false;
  for (const auto& u : sol.users) capped = capped || u.power_cap_exceeded;

  switch (ctx.format) {
    case OutputFormat::human:
      fmt::print(ctx.out, "gamma* = {:.6g} ({:.4f} dB), f* = {:.6g}\n",
                 opt.gamma_star, to_db(opt.gamma_star), opt.f_star);
      fmt::print(ctx.out, "{:<12} {:>12} {:>12} {:>10} {:>14} {:>8}\n", "user",
                 "power [W]", "rate [bps]", "SIR [dB]", "utility [b/J]",
                 "Phi*");
      for (std::size_t k = 0; k < users.size(); ++k) {
        const auto& u = sol.users[k];
        fmt::print(ctx.out, "{:<12} {:>12.6g} {:>12.6g} {:>10.4f} {:>14.6g} {:>8.4g}{}\n",
                   labels[k], u.power, u.rate, to_db(u.sir), u.utility, u.size,
                   u.power_cap_exceeded ? "  (exceeds max power)" : "");
      }
      fmt::print(ctx.out, "total size {:.5g} < 1: feasible\n", sol.total_size);
      if (brd) {
        fmt::print(ctx.out, "best-response dynamics: {} after {} sweeps", to_string(brd->status),
                   brd->sweeps);
        if (brd->status == BrdStatus::converged) {
          fmt::print(ctx.out, ", max relative power deviation {:.3g}", brd_deviation);
        }
        ctx.out << "\n";
      }
      break;
    case OutputFormat::csv:
      ctx.out << "user,power[W],rate[bps],sir[linear],utility[bits/J],phi_star,"
                 "power_cap_exceeded\n";
      for (std::size_t k = 0; k < users.size(); ++k) {
        const auto& u = sol.users[k];
        fmt::print(ctx.out, "{},{},{},{},{},{},{}\n", labels[k], csv_num(u.power),
                   csv_num(u.rate), csv_num(u.sir), csv_num(u.utility),
                   csv_num(u.size), u.power_cap_exceeded ? "true" : "false");
      }
      break;
    case OutputFormat::machine: {
      json arr = json::array();
      for (std::size_t k = 0; k < users.size(); ++k) {
        const auto& u = sol.users[k];
        arr.push_back({{"label", labels[k]},
                       {"power", u.power},
                       {"rate", u.rate},
                       {"sir", u.sir},
                       {"utility", u.utility},
                       {"size", u.size},
                       {"power_cap_exceeded", u.power_cap_exceeded}});
      }
      json doc = {{"feasible", true},
                  {"gamma_star", opt.gamma_star},
                  {"f_star", opt.f_star},
                  {"total_size", sol.total_size},
                  {"users", arr}};
      if (brd) {
        doc["brd"] = {{"status", to_string(brd->status)},
                      {"sweeps", brd->sweeps},
                      {"max_relative_deviation", num_or_null(brd_deviation)}};
      }
      emit_machine(ctx, doc);
      break;
    }
  }
  if (capped && ctx.format == OutputFormat::human) {
    ctx.err << "warning: some equilibrium powers exceed max_power\n";
  }
  if (brd && !(brd->status == BrdStatus::converged && brd_deviation <= 1e-8)) {
    ctx.err << "best-response dynamics did not reproduce the closed form\n";
    return kValidationFailed;
  }
  return kOk;
}

int cmd_sweep(const Context& ctx, int figure) {
  const Scenario& s = ctx.scenario;
  if (!s.sweep) throw ConfigError("sweep", "scenario has no sweep section");
  if (figure != 2 && figure != 3) {
    throw ConfigError("--figure", "expected 2 or 3");
  }
  const SweepSpec& sw = *s.sweep;
  const OptimalSir opt = optimal_sir(s.efficiency_function());
  const double bw = s.system.bandwidth;
  const auto grid = delay_grid(sw);

  json rows = json::array();
  if (ctx.format != OutputFormat::machine) {
    if (figure == 2) {
      ctx.out << "source_rate[bps],normalized_delay[D*B],delay[s],phi_star,"
                 "normalized_utility[u*sigma2/(B*h)],feasible\n";
    } else {
      ctx.out << "source_rate[bps],normalized_delay[D*B],delay[s],phi_star,"
                 "capacity[users],normalized_rate[Omega*/B],"
                 "normalized_total_goodput[r*capacity/B],feasible\n";
    }
  }

  for (double rate : sw.source_rates) {
    for (double d : grid) {
      const UserSize size = size_of({rate, d}, s.system, opt);
      const double phi = size.phi_star;
      if (figure == 2) {
        // Equilibrium utility next to other users of total size other_size,
        // normalized by B h/σ².
        const bool ok = phi + sw.other_size < 1.0;
        const double u = ok ? (opt.f_star / opt.gamma_star) *
                                  (1.0 - sw.other_size / (1.0 - phi))
                            : std::numeric_limits<double>::quiet_NaN();
        if (ctx.format == OutputFormat::machine) {
          rows.push_back({{"source_rate", rate},
                          {"normalized_delay", d * bw},
                          {"delay", d},
                          {"phi_star", phi},
                          {"normalized_utility", num_or_null(u)},
                          {"feasible", ok}});
        } else {
          fmt::print(ctx.out, "{},{},{},{},{},{}\n", csv_num(rate),
                     csv_num(d * bw), csv_num(d), csv_num(phi), csv_num(u),
                     ok ? "true" : "false");
        }
      } else {
        const std::size_t cap = network_capacity(phi);
        const double goodput = rate * static_cast<double>(cap) / bw;
        const bool ok = cap >= 1;
        if (ctx.format == OutputFormat::machine) {
          rows.push_back({{"source_rate", rate},
                          {"normalized_delay", d * bw},
                          {"delay", d},
                          {"phi_star", phi},
                          {"capacity", cap},
                          {"normalized_rate", size.omega_star / bw},
                          {"normalized_total_goodput", goodput},
                          {"feasible", ok}});
        } else {
          fmt::print(ctx.out, "{},{},{},{},{},{},{},{}\n", csv_num(rate),
                     csv_num(d * bw), csv_num(d), csv_num(phi), cap,
                     csv_num(size.omega_star / bw), csv_num(goodput),
                     ok ? "true" : "false");
        }
      }
    }
  }
  if (ctx.format == OutputFormat::machine) {
    emit_machine(ctx, {{"figure", figure}, {"rows", rows}});
  }
  return kOk;
}

int cmd_admit(const Context& ctx,
              const std::vector<std::vector<std::size_t>>& extra_candidates) {
  const Scenario& s = ctx.scenario;
  if (s.classes.empty() && s.users.empty()) {
    throw ConfigError("classes", "admission needs classes or users");
  }
  const OptimalSir opt = optimal_sir(s.efficiency_function());
  json doc;

  if (!s.classes.empty()) {
    std::vector<ClassSpec> classes;
    for (const auto& c : s.classes) {
      classes.push_back(make_class(c.label, c.qos, s.system, opt, c.population));
    }
    const ClassAllocation best = multiclass_optimal(classes);

    auto candidates = s.candidates;
    for (const auto& row : extra_candidates) {
      if (row.size() != classes.size()) {
        throw ConfigError("--candidates", "expected one count per class");
      }
      candidates.push_back(row);
    }

    struct CandidateRow {
      std::vector<std::size_t> counts;
      double total_size;
      bool feasible;
      double objective;
      double loss;
    };
    std::vector<CandidateRow> evaluated;
    for (const auto& counts : candidates) {
      CandidateRow r{counts, 0.0, allocation_feasible(counts, classes), 0.0, 0.0};
      for (std::size_t c = 0; c < counts.size(); ++c) {
        r.total_size += static_cast<double>(counts[c]) * classes[c].size;
      }
      if (r.feasible) {
        r.objective = class_objective(counts, classes);
        r.loss = utility_loss(counts, classes, best.counts);
      }
      evaluated.push_back(std::move(r));
    }

    switch (ctx.format) {
      case OutputFormat::human: {
        fmt::print(ctx.out, "{:<10} {:>8} {:>10}\n", "class", "Phi*", "capacity");
        for (const auto& c : classes) {
          fmt::print(ctx.out, "{:<10} {:>8.4g} {:>10}\n", c.label, c.size,
                     network_capacity(c.size));
        }
        fmt::print(ctx.out,
                   "optimal allocation {}: total size {:.4g}, normalized "
                   "utility {:.6g}\n",
                   counts_text(best.counts), best.total_size, best.objective);
        if (!evaluated.empty()) {
          fmt::print(ctx.out, "{:<20} {:>10} {:>12} {:>8}\n", "allocation",
                     "size", "utility", "loss");
          for (const auto& r : evaluated) {
            if (r.feasible) {
              fmt::print(ctx.out, "{:<20} {:>10.4g} {:>12.6g} {:>7.1f}%\n",
                         counts_text(r.counts), r.total_size, r.objective,
                         100.0 * r.loss);
            } else {
              fmt::print(ctx.out, "{:<20} {:>10.4g} {:>12} {:>8}\n",
                         counts_text(r.counts), r.total_size, "infeasible", "-");
            }
          }
        }
        break;
      }
      case OutputFormat::csv: {
        std::vector<std::string> header;
        for (const auto& c : classes) header.push_back("L_" + c.label);
        fmt::print(ctx.out, "{},total_size,normalized_utility,loss_percent,optimal,feasible\n",
                   fmt::join(header, ","));
        fmt::print(ctx.out, "{},{},{},0,true,true\n", fmt::join(best.counts, ","),
                   csv_num(best.total_size), csv_num(best.objective));
        for (const auto& r : evaluated) {
          fmt::print(ctx.out, "{},{},{},{},false,{}\n", fmt::join(r.counts, ","),
                     csv_num(r.total_size), r.feasible ? csv_num(r.objective) : "",
                     r.feasible ? csv_num(100.0 * r.loss) : "",
                     r.feasible ? "true" : "false");
        }
        break;
      }
      case OutputFormat::machine: {
        json cls = json::array();
        for (const auto& c : classes) {
          cls.push_back({{"label", c.label},
                         {"size", c.size},
                         {"capacity", network_capacity(c.size)}});
        }
        json rows = json::array();
        for (const auto& r : evaluated) {
          rows.push_back({{"counts", r.counts},
                          {"total_size", r.total_size},
                          {"feasible", r.feasible},
                          {"normalized_utility", r.feasible ? json(r.objective) : json(nullptr)},
                          {"loss", r.feasible ? json(r.loss) : json(nullptr)}});
        }
        doc["classes"] = cls;
        doc["optimal"] = {{"counts", best.counts},
                          {"total_size", best.total_size},
                          {"normalized_utility", best.objective}};
        doc["candidates"] = rows;
        break;
      }
    }
  }

  if (!s.users.empty()) {
    const auto users = s.expanded_users();
    const auto labels = s.expanded_labels();
    std::vector<Candidate> pool;
    for (const auto& u : users) {
      pool.push_back({size_of(u.qos, s.system, opt).phi_star, u.gain});
    }
    const AdmissionDecision d = optimal_subset_exhaustive(pool, s.system, opt);
    std::vector<std::string> admitted;
    for (auto i : d.admitted) admitted.push_back(labels[i]);
    switch (ctx.format) {
      case OutputFormat::human:
        fmt::print(ctx.out,
                   "admitted users [{}]: total size {:.4g}, objective {:.6g}, "
                   "total utility {:.6g} bits/J\n",
                   fmt::join(admitted, ", "), d.total_size, d.objective,
                   d.total_utility);
        break;
      case OutputFormat::csv:
        ctx.out << "user,admitted\n";
        for (std::size_t i = 0; i < labels.size(); ++i) {
          const bool in = std::find(d.admitted.begin(), d.admitted.end(), i) !=
                          d.admitted.end();
          fmt::print(ctx.out, "{},{}\n", labels[i], in ? "true" : "false");
        }
        break;
      case OutputFormat::machine:
        doc["users"] = {{"admitted", admitted},
                        {"total_size", d.total_size},
                        {"objective", d.objective},
                        {"total_utility", d.total_utility}};
        break;
    }
  }
  if (ctx.format == OutputFormat::machine) emit_machine(ctx, doc);
  return kOk;
}

int cmd_validate(const Context& ctx, std::uint64_t packets, std::uint64_t seed) {
  const Scenario& s = ctx.scenario;
  if (packets == 0) throw ConfigError("--packets", "must be at least 1");
  const OptimalSir opt = optimal_sir(s.efficiency_function());
  const int bits = s.system.packet_size_bits;

  struct Target {
    std::string label;
    QosSpec qos;
  };
  std::vector<Target> targets;
  for (const auto& u : s.users) targets.push_back({u.label, u.qos});
  for (const auto& c : s.classes) targets.push_back({c.label, c.qos});
  if (targets.empty()) throw ConfigError("users", "nothing to validate");

  struct Row {
    std::string label;
    double analytic = 0.0;
    DelayStatistics stats;
    int attempts = 0;
    std::string status;
    std::uint64_t needed = 0;  // packets required when inconclusive
  };
  std::vector<Row> rows;
  bool any_failed = false;
  const CounterRng root(seed);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& t = targets[i];
    Row row;
    row.label = t.label;
    const TrafficSpec traffic = TrafficSpec::from_source_rate(t.qos.source_rate, bits);
    const double rate = size_of(t.qos, s.system, opt).omega_star;
    const double tau = transmission_time(bits, rate);
    const double f = s.validation.success_prob.value_or(opt.f_star);
    if (!(f > traffic.packet_rate() * tau + kStabilityMargin)) {
      row.status = "unstable";
      row.analytic = std::numeric_limits<double>::infinity();
      rows.push_back(std::move(row));
      continue;
    }
    row.analytic = mean_delay(traffic, tau, f);
    Mg1ArqSimulator sim(root.split(i));
    const double relax = relaxation_packets(traffic, tau, f);
    if (static_cast<double>(packets) < kMinRelaxations * relax) {
      // Too short to leave the empty-start transient: report, don't judge.
      row.stats = sim.run(traffic, tau, f, packets);
      row.attempts = 1;
      row.status = "inconclusive";
      row.needed = static_cast<std::uint64_t>(std::ceil(kMinRelaxations * relax));
      rows.push_back(std::move(row));
      continue;
    }
    // One retry: a 3-sigma band misses about 0.3% of the time.
    for (row.attempts = 1; row.attempts <= 2; ++row.attempts) {
      row.stats = sim.run(traffic, tau, f, packets);
      if (std::abs(row.stats.mean - row.analytic) <= 3.0 * row.stats.standard_error) {
        row.status = "pass";
        break;
      }
    }
    if (row.status.empty()) {
      row.status = "fail";
      row.attempts = 2;
      any_failed = true;
    }
    rows.push_back(std::move(row));
  }

  for (const auto& r : rows) {
    if (r.status == "inconclusive") {
      fmt::print(ctx.err,
                 "warning: {} is too close to saturation for {} packets; "
                 "about {} are needed for a verdict\n",
                 r.label, packets, r.needed);
    }
  }

  switch (ctx.format) {
    case OutputFormat::human:
      fmt::print(ctx.out, "{} packets per user, seed {}\n", packets, seed);
      fmt::print(ctx.out, "{:<12} {:>14} {:>14} {:>12} {:>8} {:>8}\n", "user",
                 "analytic [s]", "empirical [s]", "std err", "z", "status");
      for (const auto& r : rows) {
        if (r.status == "unstable") {
          fmt::print(ctx.out, "{:<12} {:>14} {:>14} {:>12} {:>8} {:>8}\n",
                     r.label, "inf", "-", "-", "-", "unstable");
          continue;
        }
        const double z = (r.stats.mean - r.analytic) / r.stats.standard_error;
        fmt::print(ctx.out, "{:<12} {:>14.6g} {:>14.6g} {:>12.3g} {:>8.2f} {:>8}\n",
                   r.label, r.analytic, r.stats.mean, r.stats.standard_error, z,
                   r.status);
      }
      break;
    case OutputFormat::csv:
      ctx.out << "user,analytic_delay[s],empirical_delay[s],standard_error[s],"
                 "packets,attempts,status\n";
      for (const auto& r : rows) {
        fmt::print(ctx.out, "{},{},{},{},{},{},{}\n", r.label,
                   csv_num(r.analytic), r.attempts ? csv_num(r.stats.mean) : "",
                   r.attempts ? csv_num(r.stats.standard_error) : "", r.stats.count,
                   r.attempts, r.status);
      }
      break;
    case OutputFormat::machine: {
      json arr = json::array();
      for (const auto& r : rows) {
        arr.push_back({{"label", r.label},
                       {"analytic_delay", num_or_null(r.analytic)},
                       {"empirical_delay", r.attempts ? json(r.stats.mean) : json(nullptr)},
                       {"standard_error", r.attempts ? json(r.stats.standard_error) : json(nullptr)},
                       {"packets", r.stats.count},
                       {"packets_needed", r.needed ? json(r.needed) : json(nullptr)},
                       {"attempts", r.attempts},
                       {"status", r.status}});
      }
      emit_machine(ctx, {{"seed", seed}, {"packets", packets}, {"users", arr}});
      break;
    }
  }
  return any_failed ? kValidationFailed : kOk;
}

std::vector<std::vector<std::size_t>> load_candidates(const std::string& path,
                                                      std::size_t num_classes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--candidates", "cannot open '" + path + "'");
  std::vector<std::vector<std::size_t>> rows;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<std::size_t> row;
    std::string tok;
    while (fields >> tok) {
      const auto field = "--candidates line " + std::to_string(lineno);
      if (tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(field, "expected nonnegative integer counts");
      }
      row.push_back(std::stoull(tok));
    }
    if (row.empty()) continue;
    if (row.size() != num_classes) {
      throw ConfigError("--candidates line " + std::to_string(lineno),
                        "expected " + std::to_string(num_classes) + " counts");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::filesystem::path resolve_scenario(const std::string& given) {
  namespace fs = std::filesystem;
  const char* dir = std::getenv(kScenarioDirEnv);
  if (given.empty()) {
    if (!dir) {
      throw ConfigError("--scenario", std::string("no scenario given and ") +
                                          kScenarioDirEnv + " is not set");
    }
    return fs::path(dir) / "scenario.json";
  }
  fs::path p(given);
  if (p.is_relative() && !fs::exists(p) && dir) {
    const fs::path alt = fs::path(dir) / p;
    if (fs::exists(alt)) return alt;
  }
  return p;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Energy-efficient joint power and rate control with QoS constraints"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string output = "human";
  app.add_option("--scenario", scenario_path, "Scenario file (JSON with unit suffixes)");
  app.add_option("--output", output, "Output format")
      ->check(CLI::IsMember({"human", "csv", "machine", "json"}));

  auto* gamma = app.add_subcommand("gamma-star", "Utility-maximizing SIR and f*");
  auto* size = app.add_subcommand("size", "Rates Omega_inf, Omega* and sizes Phi*");
  auto* eq = app.add_subcommand("equilibrium", "Pareto-dominant Nash equilibrium");
  bool verify_brd = false;
  eq->add_flag("--verify-brd", verify_brd,
               "Also run best-response dynamics and compare");
  auto* sweep = app.add_subcommand("sweep", "CSV sweep over the delay bound");
  int figure = 2;
  sweep->add_option("--figure", figure, "2: utility vs delay, 3: size/capacity/rate/goodput")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  auto* admit = app.add_subcommand("admit", "Admission control and loss table");
  std::string candidates_path;
  admit->add_option("--candidates", candidates_path,
                    "File of candidate allocations, one per line");
  auto* validate = app.add_subcommand("validate", "Monte-Carlo check of the mean delay");
  std::optional<std::uint64_t> packets;
  std::optional<std::uint64_t> seed;
  validate->add_option("--packets", packets, "Packets per user");
  validate->add_option("--seed", seed, "Random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  OutputFormat format = OutputFormat::human;
  if (output == "csv") format = OutputFormat::csv;
  if (output == "machine" || output == "json") format = OutputFormat::machine;

  try {
    const Scenario scenario = load_scenario(resolve_scenario(scenario_path));
    const Context ctx{scenario, format, out, err};
    if (*gamma) return cmd_gamma_star(ctx);
    if (*size) return cmd_size(ctx);
    if (*eq) return cmd_equilibrium(ctx, verify_brd);
    if (*sweep) return cmd_sweep(ctx, figure);
    if (*admit) {
      std::vector<std::vector<std::size_t>> extra;
      if (!candidates_path.empty()) {
        extra = load_candidates(candidates_path, scenario.classes.size());
      }
      return cmd_admit(ctx, extra);
    }
    if (*validate) {
      return cmd_validate(ctx, packets.value_or(scenario.validation.packets),
                          seed.value_or(scenario.seed));
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidEfficiencyError& e) {
    err << "config error: efficiency: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace prcg::cli
