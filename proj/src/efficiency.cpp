#include "prcg/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "prcg/error.hpp"
#include "prcg/roots.hpp"

namespace prcg {

double SuccessCurve::second_derivative(double gamma) const {
  const double h = 1e-5 * std::max(1.0, gamma);
  const double lo = std::max(0.0, gamma - h);
  return (derivative(gamma + h) - derivative(lo)) / (gamma + h - lo);
}

double SuccessCurve::log_derivative(double gamma) const {
  return derivative(gamma) / value(gamma);
}

ExponentialCurve::ExponentialCurve(int packet_size_bits)
    : bits_(static_cast<double>(packet_size_bits)) {
  if (packet_size_bits < 1) {
    throw DomainError("packet size must be at least one bit");
  }
}

// u = 1 − e^{−γ} is computed as −expm1(−γ) throughout.

double ExponentialCurve::value(double gamma) const {
  if (gamma == 0.0) return 0.0;
  return std::exp(bits_ * std::log(-std::expm1(-gamma)));
}

double ExponentialCurve::derivative(double gamma) const {
  if (gamma == 0.0) return bits_ == 1.0 ? 1.0 : 0.0;
  const double u = -std::expm1(-gamma);
  return bits_ * std::exp(-gamma + (bits_ - 1.0) * std::log(u));
}

double ExponentialCurve::second_derivative(double gamma) const {
  // f″ = M e^{−γ} u^{M−2} (M e^{−γ} − 1)
  const double e = std::exp(-gamma);
  if (gamma == 0.0) {
    if (bits_ == 1.0) return -1.0;
    if (bits_ == 2.0) return 2.0;
    return 0.0;
  }
  const double u = -std::expm1(-gamma);
  return bits_ * std::exp(-gamma + (bits_ - 2.0) * std::log(u)) *
         (bits_ * e - 1.0);
}

double ExponentialCurve::log_derivative(double gamma) const {
  return bits_ / std::expm1(gamma);
}

EfficiencyFunction::EfficiencyFunction(std::shared_ptr<const SuccessCurve> curve,
                                       int packet_size_bits)
    : curve_(std::move(curve)), packet_size_bits_(packet_size_bits) {
  if (!curve_) throw DomainError("efficiency function needs a curve");
  if (packet_size_bits_ < 1) {
    throw DomainError("packet size must be at least one bit");
  }
}

EfficiencyFunction EfficiencyFunction::exponential(int packet_size_bits) {
  return {std::make_shared<ExponentialCurve>(packet_size_bits),
          packet_size_bits};
}

double EfficiencyFunction::eval(double gamma) const {
  if (!(gamma >= 0.0)) throw DomainError("SIR must be nonnegative");
  return curve_->value(gamma);
}

double EfficiencyFunction::derivative(double gamma) const {
  if (!(gamma >= 0.0)) throw DomainError("SIR must be nonnegative");
  return curve_->derivative(gamma);
}

double EfficiencyFunction::inverse(double eta) const {
  if (!(eta >= 0.0)) {
    throw DomainError("target success probability must be nonnegative");
  }
  if (eta >= 1.0) {
    throw InfeasibleTargetError(
        "success probability of 1 requires an infinite SIR");
  }
  if (eta == 0.0) return 0.0;

  double hi = 1.0;
  for (int i = 0; curve_->value(hi) <= eta; ++i) {
    if (i > 1100) throw InfeasibleTargetError("no finite SIR reaches target");
    hi *= 2.0;
  }
  const auto residual = [&](double g) { return curve_->value(g) - eta; };
  const auto root = roots::bisect(residual, 0.0, hi,
                                  {.x_rel = 1e-15, .residual = 1e-13});
  return root.x;
}

OptimalSir optimal_sir(const EfficiencyFunction& f) {
  const SuccessCurve& c = f.curve();
  // 1 − γ f′/f changes sign exactly once, at γ*. Written this way the
  // residual stays O(1) where f itself underflows.
  const auto elasticity_gap = [&](double g) {
    return 1.0 - g * c.log_derivative(g);
  };
  const auto gap_and_slope = [&](double g) {
    const double ld = c.log_derivative(g);
    const double curvature = c.second_derivative(g) / c.value(g) - ld * ld;
    return std::pair{1.0 - g * ld, -ld - g * curvature};
  };

  double lo = 1e-6;
  double hi = 10.0 * f.packet_size_bits();
  for (int i = 0; !(elasticity_gap(lo) < 0.0); ++i) {
    if (i > 60) {
      throw InvalidEfficiencyError(
          "f(γ)/γ has no interior maximum: no sign change near zero");
    }
    lo *= 0.5;
  }
  for (int i = 0; !(elasticity_gap(hi) > 0.0); ++i) {
    if (i > 60) {
      throw InvalidEfficiencyError(
          "f(γ)/γ has no interior maximum: no sign change at large SIR");
    }
    hi *= 2.0;
  }

  const auto root = roots::bisect_newton(gap_and_slope, lo, hi,
                                         {.x_rel = 1e-15, .residual = 1e-15});
  const double gamma = root.x;
  const double f_star = c.value(gamma);
  if (!root.converged ||
      std::abs(f_star - gamma * c.derivative(gamma)) > kRootTolerance) {
    throw InvalidEfficiencyError("root of f(γ) = γ f′(γ) did not converge");
  }
  return {gamma, f_star};
}

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, CurveFactory> factories{
      {"exponential", [](int m) {
         return std::make_shared<const ExponentialCurve>(m);
       }}};
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_curve_family(const std::string& name, CurveFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

bool has_curve_family(const std::string& name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  return r.factories.count(name) != 0;
}

std::vector<std::string> curve_families() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : r.factories) names.push_back(name);
  return names;
}

EfficiencyFunction make_efficiency(const std::string& family,
                                   int packet_size_bits) {
  CurveFactory factory;
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.factories.find(family);
    if (it == r.factories.end()) {
      throw ConfigError("efficiency.family",
                        "unknown efficiency family '" + family + "'");
    }
    factory = it->second;
  }
  return {factory(packet_size_bits), packet_size_bits};
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace prcg
