#pragma once

// Packet success rate f(γ) as a function of the received SIR, and the SIR
// that maximizes f(γ)/γ.

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace prcg {

/// Absolute tolerance on root residuals: |f(γ*) − γ*f′(γ*)| and
/// |f(inverse(η)) − η|.
inline constexpr double kRootTolerance = 1e-10;

/// A sigmoidal success curve. Implementations must satisfy f(0) = 0,
/// f strictly increasing, f(γ) < 1 for finite γ, and a single inflection
/// point.
class SuccessCurve {
 public:
  virtual ~SuccessCurve() = default;

  virtual std::string family() const = 0;
  virtual double value(double gamma) const = 0;
  virtual double derivative(double gamma) const = 0;

  /// Defaults to a central difference of derivative().
  virtual double second_derivative(double gamma) const;

  /// f′(γ)/f(γ). Override when the ratio can be evaluated without
  /// underflow at small γ.
  virtual double log_derivative(double gamma) const;
};

/// The default family f(γ) = (1 − e^{−γ})^M.
class ExponentialCurve final : public SuccessCurve {
 public:
  explicit ExponentialCurve(int packet_size_bits);

  std::string family() const override { return "exponential"; }
  double value(double gamma) const override;
  double derivative(double gamma) const override;
  double second_derivative(double gamma) const override;
  double log_derivative(double gamma) const override;

 private:
  double bits_;
};

/// Immutable handle on a success curve for packets of M bits. Copies share
/// the underlying curve.
class EfficiencyFunction {
 public:
  EfficiencyFunction(std::shared_ptr<const SuccessCurve> curve,
                     int packet_size_bits);

  /// (1 − e^{−γ})^M.
  static EfficiencyFunction exponential(int packet_size_bits = 100);

  int packet_size_bits() const noexcept { return packet_size_bits_; }
  std::string family() const { return curve_->family(); }
  const SuccessCurve& curve() const noexcept { return *curve_; }

  /// f(γ); throws DomainError for γ < 0.
  double eval(double gamma) const;
  /// f′(γ); throws DomainError for γ < 0.
  double derivative(double gamma) const;
  /// The γ̂ with f(γ̂) = η. Throws InfeasibleTargetError for η ≥ 1 and
  /// DomainError for η < 0.
  double inverse(double eta) const;

 private:
  std::shared_ptr<const SuccessCurve> curve_;
  int packet_size_bits_;
};

struct OptimalSir {
  double gamma_star = 0.0;  // linear, not dB
  double f_star = 0.0;
};

/// Solves f(γ) = γ f′(γ), the maximizer of f(γ)/γ.
OptimalSir optimal_sir(const EfficiencyFunction& f);

// Family registry. "exponential" is always present.
using CurveFactory =
    std::function<std::shared_ptr<const SuccessCurve>(int packet_size_bits)>;

void register_curve_family(const std::string& name, CurveFactory factory);
bool has_curve_family(const std::string& name);
std::vector<std::string> curve_families();

/// Throws ConfigError naming "efficiency.family" for unknown names.
EfficiencyFunction make_efficiency(const std::string& family,
                                   int packet_size_bits);

double to_db(double linear);

}  // namespace prcg
