#include "prcg/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prcg/error.hpp"

namespace prcg {

void SystemParams::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw DomainError("bandwidth must be positive");
  }
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw DomainError("noise power must be positive");
  }
  if (packet_size_bits < 1) throw DomainError("packet size must be positive");
  if (!(max_power > 0.0)) throw DomainError("max power must be positive");
}

std::vector<double> EquilibriumSolution::powers() const {
  std::vector<double> out;
  out.reserve(users.size());
  for (const auto& u : users) out.push_back(u.power);
  return out;
}

std::vector<double> EquilibriumSolution::rates() const {
  std::vector<double> out;
  out.reserve(users.size());
  for (const auto& u : users) out.push_back(u.rate);
  return out;
}

double sir(std::size_t k, std::span<const double> powers,
           std::span<const double> rates, std::span<const double> gains,
           const SystemParams& params) {
  const std::size_t n = powers.size();
  if (rates.size() != n || gains.size() != n) {
    throw DomainError("powers, rates and gains must have equal length");
  }
  if (k >= n) throw DomainError("user index out of range");
  if (!(rates[k] > 0.0)) throw DomainError("rate must be positive");
  double interference = params.noise_power;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != k) interference += powers[j] * gains[j];
  }
  return (params.bandwidth / rates[k]) * powers[k] * gains[k] / interference;
}

double utility(double rate, double gamma, double power,
               const EfficiencyFunction& f) {
  if (!(power > 0.0)) throw DomainError("utility undefined at zero power");
  if (!(rate > 0.0)) throw DomainError("rate must be positive");
  return rate * f.eval(gamma) / power;
}

double min_rate_omega_inf(double packet_size_bits, double max_delay,
                          double packet_rate) {
  if (!(max_delay > 0.0)) throw DomainError("delay bound must be positive");
  const double dl = max_delay * packet_rate;
  return (packet_size_bits / max_delay) *
         (1.0 + dl + std::sqrt(1.0 + dl * dl)) / 2.0;
}

double target_rate_omega_star(double packet_size_bits, double max_delay,
                              double packet_rate, double f_star) {
  if (!(f_star > 0.0 && f_star < 1.0)) {
    throw DomainError("f* must lie in (0, 1)");
  }
  if (!(max_delay > 0.0)) throw DomainError("delay bound must be positive");
  const double dl = max_delay * packet_rate;
  return (packet_size_bits / max_delay) *
         (1.0 + dl + std::sqrt(1.0 + dl * dl + 2.0 * (1.0 - f_star) * dl)) /
         (2.0 * f_star);
}

double user_size(double omega_star, double gamma_star, double bandwidth) {
  if (!(omega_star > 0.0 && gamma_star > 0.0 && bandwidth > 0.0)) {
    throw DomainError("size needs positive rate, SIR and bandwidth");
  }
  return 1.0 / (1.0 + bandwidth / (omega_star * gamma_star));
}

UserSize size_of(const QosSpec& qos, const SystemParams& params,
                 const OptimalSir& opt) {
  if (!(qos.source_rate >= 0.0)) {
    throw DomainError("source rate must be nonnegative");
  }
  if (!(qos.max_delay > 0.0)) throw DomainError("delay bound must be positive");
  const double m = params.packet_size_bits;
  const double lambda = qos.source_rate / m;
  UserSize s;
  s.omega_inf = min_rate_omega_inf(m, qos.max_delay, lambda);
  s.omega_star = target_rate_omega_star(m, qos.max_delay, lambda, opt.f_star);
  s.phi_star = user_size(s.omega_star, opt.gamma_star, params.bandwidth);
  return s;
}

namespace {

void check_users(std::span<const UserProfile> users) {
  if (users.empty()) throw DomainError("user set is empty");
  for (std::size_t k = 0; k < users.size(); ++k) {
    const auto& u = users[k];
    const std::string who = "user " + std::to_string(k) + ": ";
    if (!(u.gain > 0.0)) throw DomainError(who + "channel gain must be positive");
    if (!(u.qos.max_delay > 0.0)) {
      throw DomainError(who + "delay bound must be positive");
    }
    if (!(u.qos.source_rate >= 0.0)) {
      throw DomainError(who + "source rate must be nonnegative");
    }
  }
}

}  // namespace

EquilibriumSolution equilibrium(std::span<const UserProfile> users,
                                const SystemParams& params,
                                const EfficiencyFunction& f) {
  return equilibrium(users, params, f, optimal_sir(f));
}

EquilibriumSolution equilibrium(std::span<const UserProfile> users,
                                const SystemParams& params,
                                const EfficiencyFunction& f,
                                const OptimalSir& opt) {
  check_users(users);
  std::vector<double> rates;
  rates.reserve(users.size());
  for (const auto& u : users) rates.push_back(size_of(u.qos, params, opt).omega_star);
  return equilibrium_at_rates(users, rates, params, f, opt);
}

EquilibriumSolution equilibrium_at_rates(std::span<const UserProfile> users,
                                         std::span<const double> rates,
                                         const SystemParams& params,
                                         const EfficiencyFunction& f,
                                         const OptimalSir& opt) {
  params.validate();
  check_users(users);
  if (rates.size() != users.size()) {
    throw DomainError("one rate per user required");
  }

  EquilibriumSolution sol;
  sol.gamma_star = opt.gamma_star;
  sol.f_star = opt.f_star;
  sol.users.resize(users.size());
  for (std::size_t k = 0; k < users.size(); ++k) {
    auto& u = sol.users[k];
    u.rate = rates[k];
    u.size = user_size(rates[k], opt.gamma_star, params.bandwidth);
    sol.total_size += u.size;
  }
  sol.feasible = sol.total_size < 1.0 - kSizeGuard;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!sol.feasible) {
    for (auto& u : sol.users) u.power = u.sir = u.utility = nan;
    return sol;
  }

  const double slack = 1.0 - sol.total_size;
  for (std::size_t k = 0; k < users.size(); ++k) {
    auto& u = sol.users[k];
    u.power = (params.noise_power / users[k].gain) * (u.size / slack);
    u.power_cap_exceeded = u.power > params.max_power;
  }
  const auto powers = sol.powers();
  std::vector<double> gains;
  for (const auto& u : users) gains.push_back(u.gain);
  for (std::size_t k = 0; k < users.size(); ++k) {
    auto& u = sol.users[k];
    u.sir = sir(k, powers, rates, gains, params);
    u.utility = utility(u.rate, opt.gamma_star, u.power, f);
  }
  return sol;
}

double equilibrium_utility(std::size_t k, std::span<const double> sizes,
                           std::span<const double> gains,
                           const SystemParams& params, double f_star,
                           double gamma_star) {
  if (sizes.size() != gains.size()) {
    throw DomainError("sizes and gains must have equal length");
  }
  if (k >= sizes.size()) throw DomainError("user index out of range");
  double total = 0.0;
  for (double s : sizes) total += s;
  if (!(total < 1.0 - kSizeGuard)) {
    throw InfeasibleSetError("total size " + std::to_string(total) +
                             " is not below 1");
  }
  const double ceiling =
      params.bandwidth * gains[k] * f_star / (params.noise_power * gamma_star);
  return ceiling * (1.0 - total) / (1.0 - sizes[k]);
}

BestResponse best_response(std::size_t k, std::span<const double> powers,
                           std::span<const double> gains,
                           const UserProfile& profile,
                           const SystemParams& params, const OptimalSir& opt) {
  if (powers.size() != gains.size()) {
    throw DomainError("powers and gains must have equal length");
  }
  if (k >= powers.size()) throw DomainError("user index out of range");
  double interference = params.noise_power;
  for (std::size_t j = 0; j < powers.size(); ++j) {
    if (j != k) interference += powers[j] * gains[j];
  }
  BestResponse br;
  br.rate = size_of(profile.qos, params, opt).omega_star;
  br.power = opt.gamma_star * br.rate * interference /
             (params.bandwidth * profile.gain);
  if (br.power > params.max_power) {
    br.power = params.max_power;
    br.capped = true;
  }
  return br;
}

const char* to_string(BrdStatus s) {
  switch (s) {
    case BrdStatus::converged:
      return "converged";
    case BrdStatus::diverged:
      return "diverged";
    case BrdStatus::max_iters_exceeded:
      return "max iterations exceeded";
  }
  return "unknown";
}

BrdResult best_response_dynamics(std::span<const UserProfile> users,
                                 const SystemParams& params,
                                 const EfficiencyFunction& f,
                                 std::span<const double> init_powers,
                                 const BrdOptions& options) {
  params.validate();
  check_users(users);
  if (init_powers.size() != users.size()) {
    throw DomainError("one initial power per user required");
  }
  const OptimalSir opt = optimal_sir(f);
  SystemParams uncapped = params;
  uncapped.max_power = std::numeric_limits<double>::infinity();

  BrdResult res;
  res.powers.assign(init_powers.begin(), init_powers.end());
  std::vector<double> gains;
  for (const auto& u : users) {
    gains.push_back(u.gain);
    res.rates.push_back(size_of(u.qos, params, opt).omega_star);
  }

  const auto total = [&] {
    double t = 0.0;
    for (double p : res.powers) t += p;
    return t;
  };
  res.total_power.push_back(total());

  // Current run of rising total power with non-shrinking increments.
  std::size_t run_length = 0;
  double run_start_total = res.total_power.back();
  double last_increment = 0.0;

  for (std::size_t sweep = 1; sweep <= options.max_iters; ++sweep) {
    double max_change = 0.0;
    for (std::size_t k = 0; k < users.size(); ++k) {
      const double before = res.powers[k];
      res.powers[k] =
          best_response(k, res.powers, gains, users[k], uncapped, opt).power;
      const double scale = std::max(std::abs(before), std::abs(res.powers[k]));
      if (scale > 0.0) {
        max_change =
            std::max(max_change, std::abs(res.powers[k] - before) / scale);
      }
    }
    res.sweeps = sweep;
    const double prev_total = res.total_power.back();
    res.total_power.push_back(total());
    res.max_relative_change.push_back(max_change);

    if (max_change <= options.tol) {
      res.status = BrdStatus::converged;
      res.solution =
          equilibrium_at_rates(users, res.rates, params, f, opt);
      // Report the iterate, not the closed form.
      for (std::size_t k = 0; k < users.size(); ++k) {
        auto& u = res.solution.users[k];
        u.power = res.powers[k];
        u.power_cap_exceeded = u.power > params.max_power;
        u.sir = sir(k, res.powers, res.rates, gains, params);
        u.utility = utility(u.rate, u.sir, u.power, f);
      }
      return res;
    }
    if (!std::isfinite(res.total_power.back())) {
      res.status = BrdStatus::diverged;
      return res;
    }

    const double increment = res.total_power.back() - prev_total;
    if (increment > 0.0 && increment >= last_increment * (1.0 - 1e-12)) {
      if (run_length == 0) run_start_total = prev_total;
      ++run_length;
    } else {
      run_length = 0;
    }
    last_increment = increment;
    if (run_length >= options.divergence_window &&
        res.total_power.back() > options.divergence_growth * run_start_total) {
      res.status = BrdStatus::diverged;
      return res;
    }
  }
  res.status = BrdStatus::max_iters_exceeded;
  return res;
}

}  // namespace prcg
