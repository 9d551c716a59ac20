#pragma once

// Joint power and rate control game on a matched-filter uplink: SIR model,
// energy-efficiency utility, the delay-driven rate bounds, user sizes and
// the closed-form Pareto-dominant Nash equilibrium, plus a best-response
// iteration that reaches the same fixed point numerically.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "prcg/efficiency.hpp"
#include "prcg/queueing.hpp"

namespace prcg {

/// Total sizes at or above 1 − kSizeGuard count as infeasible.
inline constexpr double kSizeGuard = 1e-12;

struct SystemParams {
  double bandwidth = 5e6;    // Hz
  double noise_power = 1.0;  // W, in the full bandwidth
  int packet_size_bits = 100;
  double max_power = std::numeric_limits<double>::infinity();  // W

  void validate() const;
};

struct QosSpec {
  double source_rate = 0.0;  // bits/s
  double max_delay = 0.0;    // s, bound on mean total delay
};

struct UserProfile {
  QosSpec qos;
  double gain = 1.0;

  TrafficSpec traffic(int packet_size_bits) const {
    return TrafficSpec::from_source_rate(qos.source_rate, packet_size_bits);
  }
};

struct UserSize {
  double omega_inf = 0.0;   // bits/s, rates at or below miss the delay bound
  double omega_star = 0.0;  // bits/s
  double phi_star = 0.0;
};

/// (B/R_k) p_k h_k / (σ² + Σ_{j≠k} p_j h_j).
double sir(std::size_t k, std::span<const double> powers,
           std::span<const double> rates, std::span<const double> gains,
           const SystemParams& params);

/// R f(γ)/p in bits per joule.
double utility(double rate, double gamma, double power,
               const EfficiencyFunction& f);

/// Ω∞ = (M/D)(1 + Dλ + √(1 + D²λ²))/2.
double min_rate_omega_inf(double packet_size_bits, double max_delay,
                          double packet_rate);

/// Ω* = (M/D)(1 + Dλ + √(1 + D²λ² + 2(1 − f*)Dλ))/(2f*), the rate at which
/// the delay bound is met with equality at SIR γ*.
double target_rate_omega_star(double packet_size_bits, double max_delay,
                              double packet_rate, double f_star);

/// Φ* = 1/(1 + B/(Ω*γ*)).
double user_size(double omega_star, double gamma_star, double bandwidth);

UserSize size_of(const QosSpec& qos, const SystemParams& params,
                 const OptimalSir& opt);

struct UserOperatingPoint {
  double power = 0.0;    // W
  double rate = 0.0;     // bits/s
  double sir = 0.0;
  double utility = 0.0;  // bits/J
  double size = 0.0;
  bool power_cap_exceeded = false;
};

struct EquilibriumSolution {
  std::vector<UserOperatingPoint> users;
  bool feasible = false;
  double total_size = 0.0;
  double gamma_star = 0.0;
  double f_star = 0.0;

  std::vector<double> powers() const;
  std::vector<double> rates() const;
};

/// Pareto-dominant equilibrium: every user at R = Ω*, SIR γ*, power
/// p_k = (σ²/h_k) Φ_k/(1 − ΣΦ). An infeasible set (ΣΦ ≥ 1) is returned with
/// feasible = false and NaN powers; it is not an error.
EquilibriumSolution equilibrium(std::span<const UserProfile> users,
                                const SystemParams& params,
                                const EfficiencyFunction& f);
EquilibriumSolution equilibrium(std::span<const UserProfile> users,
                                const SystemParams& params,
                                const EfficiencyFunction& f,
                                const OptimalSir& opt);

/// The equilibrium family with every user at SIR γ* and rates R̃_k ≥ Ω_k*.
/// Sizes are evaluated at R̃.
EquilibriumSolution equilibrium_at_rates(std::span<const UserProfile> users,
                                         std::span<const double> rates,
                                         const SystemParams& params,
                                         const EfficiencyFunction& f,
                                         const OptimalSir& opt);

/// (B h_k f*/(σ²γ*)) (1 − ΣΦ)/(1 − Φ_k). Throws InfeasibleSetError when
/// ΣΦ ≥ 1.
double equilibrium_utility(std::size_t k, std::span<const double> sizes,
                           std::span<const double> gains,
                           const SystemParams& params, double f_star,
                           double gamma_star);

struct BestResponse {
  double power = 0.0;
  double rate = 0.0;
  bool capped = false;  // the uncapped power exceeded max_power
};

/// Rate Ω_k* and the power that gives SIR γ* against the other users'
/// current powers.
BestResponse best_response(std::size_t k, std::span<const double> powers,
                           std::span<const double> gains,
                           const UserProfile& profile,
                           const SystemParams& params, const OptimalSir& opt);

struct BrdOptions {
  double tol = 1e-10;  // max relative power change per sweep
  std::size_t max_iters = 100000;
  std::size_t divergence_window = 100;
  double divergence_growth = 10.0;
};

enum class BrdStatus { converged, diverged, max_iters_exceeded };

const char* to_string(BrdStatus s);

struct BrdResult {
  BrdStatus status = BrdStatus::max_iters_exceeded;
  std::size_t sweeps = 0;
  /// Total transmit power after each sweep; entry 0 is the initial state.
  std::vector<double> total_power;
  /// Largest per-user relative power change in each sweep.
  std::vector<double> max_relative_change;
  std::vector<double> powers;
  std::vector<double> rates;
  /// Filled from the final powers when status == converged.
  EquilibriumSolution solution;
};

/// Round-robin best responses in user-index order (Gauss–Seidel). Stops on
/// convergence, on divergence (total power rising with non-shrinking
/// increments for at least divergence_window sweeps and by more than
/// divergence_growth over that run), or after max_iters sweeps. Power caps
/// are ignored here.
BrdResult best_response_dynamics(std::span<const UserProfile> users,
                                 const SystemParams& params,
                                 const EfficiencyFunction& f,
                                 std::span<const double> init_powers,
                                 const BrdOptions& options = {});

}  // namespace prcg
