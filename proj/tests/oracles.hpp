#pragma once

// Brute-force reference computations for the tests. None of these call the
// library code they are used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace prcg::oracle {

/// (1 − e^{−γ})^M evaluated with plain pow/exp.
inline double exponential_curve(double gamma, int bits) {
  return std::pow(1.0 - std::exp(-gamma), bits);
}

/// Binomial expansion Σ_k C(M,k) (−e^{−γ})^k of (1 − e^{−γ})^M.
inline double exponential_curve_binomial(double gamma, int bits) {
  const double x = -std::exp(-gamma);
  double term = 1.0;  // C(M,0) x^0
  double sum = 1.0;
  for (int k = 1; k <= bits; ++k) {
    term *= x * static_cast<double>(bits - k + 1) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

/// Maximizer of f(γ)/γ on the uniform grid {hi·i/n : i = 1..n}.
inline double grid_argmax_ratio(const std::function<double(double)>& f,
                                double hi, std::size_t n) {
  double best_x = 0.0;
  double best = -1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = hi * static_cast<double>(i) / static_cast<double>(n);
    const double r = f(x) / x;
    if (r > best) {
      best = r;
      best_x = x;
    }
  }
  return best_x;
}

/// Bisection for an increasing function: smallest x in [lo, hi] with
/// g(x) >= target, to 200 halvings.
inline double bisect_increasing(const std::function<double(double)>& g,
                                double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double central_difference(const std::function<double(double)>& g,
                                 double x, double h) {
  return (g(x + h) - g(x - h)) / (2.0 * h);
}

/// Plain enumeration of every subset; returns the best objective value of
/// (1 − ΣΦ) Σ h/(1 − Φ) over feasible subsets (0 for the empty set).
inline double best_subset_objective(const std::vector<double>& sizes,
                                    const std::vector<double>& gains) {
  const std::size_t n = sizes.size();
  double best = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        total += sizes[i];
        weighted += gains[i] / (1.0 - sizes[i]);
      }
    }
    if (total < 1.0) best = std::max(best, (1.0 - total) * weighted);
  }
  return best;
}

/// Best equal-gain class objective over all count vectors with
/// L_c ≤ limits[c], by recursion.
inline double best_allocation_objective(const std::vector<double>& sizes,
                                        const std::vector<std::size_t>& limits) {
  double best = 0.0;
  std::vector<std::size_t> counts(sizes.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t c) {
    if (c == sizes.size()) {
      double total = 0.0;
      double weighted = 0.0;
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        total += static_cast<double>(counts[i]) * sizes[i];
        weighted += static_cast<double>(counts[i]) / (1.0 - sizes[i]);
      }
      if (total < 1.0) best = std::max(best, (1.0 - total) * weighted);
      return;
    }
    for (std::size_t l = 0; l <= limits[c]; ++l) {
      counts[c] = l;
      rec(c + 1);
    }
  };
  rec(0);
  return best;
}

/// Largest K with K·Φ < 1 by counting up.
inline std::size_t capacity_by_counting(double phi) {
  std::size_t k = 0;
  while (static_cast<double>(k + 1) * phi < 1.0) ++k;
  return k;
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace prcg::oracle
