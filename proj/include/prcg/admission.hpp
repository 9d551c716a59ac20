#pragma once

// Admission control at the access point. A set of users is admissible iff
// its total size is below 1; among admissible sets the access point picks
// the one maximizing total utility at the Pareto-dominant equilibrium,
//   Σ_ℓ u_ℓ = (B f*/(σ²γ*)) (1 − Σ Φ_i) Σ_ℓ h_ℓ/(1 − Φ_ℓ).
// The "normalized objective" below drops the constant prefactor.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prcg/efficiency.hpp"
#include "prcg/game.hpp"

namespace prcg {

/// Largest candidate count accepted by optimal_subset_exhaustive.
inline constexpr std::size_t kMaxExhaustiveCandidates = 25;

struct Candidate {
  double size = 0.0;  // Φ*
  double gain = 1.0;  // h
};

struct AdmissionDecision {
  std::vector<std::size_t> admitted;  // ascending candidate indices
  double total_size = 0.0;
  double objective = 0.0;      // normalized
  double total_utility = 0.0;  // bits/J
};

/// Σ Φ < 1 (strict).
bool budget_feasible(std::span<const double> sizes);

/// Largest K with K·Φ < 1.
std::size_t network_capacity(double phi);

/// (1 − ΣΦ) Σ h/(1 − Φ). Throws InfeasibleSetError if ΣΦ ≥ 1.
double normalized_objective(std::span<const Candidate> selection);

/// Σ u_ℓ in bits/J.
double total_utility_objective(std::span<const Candidate> selection,
                               const SystemParams& params,
                               const OptimalSir& opt);

/// Exact maximizer over all 2^K subsets. Ties (within 1e-12 relative) go to
/// the lexicographically smallest index set. Throws SizeLimitError above
/// kMaxExhaustiveCandidates.
AdmissionDecision optimal_subset_exhaustive(std::span<const Candidate> candidates,
                                            const SystemParams& params,
                                            const OptimalSir& opt);

/// Best L for L identical users, from the objective L − L²Φ evaluated at the
/// integers around 1/(2Φ), limited to network_capacity(Φ).
std::size_t symmetric_optimal_count(double phi);

struct ClassSpec {
  std::string label;
  double source_rate = 0.0;  // bits/s
  double max_delay = 0.0;    // s
  double size = 0.0;         // Φ*
  std::optional<std::size_t> population;  // nullopt: unlimited

  std::size_t limit() const;  // min(population, network_capacity(size))
};

ClassSpec make_class(std::string label, const QosSpec& qos,
                     const SystemParams& params, const OptimalSir& opt,
                     std::optional<std::size_t> population = std::nullopt);

struct ClassAllocation {
  std::vector<std::size_t> counts;  // one per class, in input order
  double total_size = 0.0;
  double objective = 0.0;  // normalized, equal-gain
};

bool allocation_feasible(std::span<const std::size_t> counts,
                         std::span<const ClassSpec> classes);

/// Equal-gain objective (1 − Σ L_c Φ_c) Σ L_c/(1 − Φ_c). Throws
/// InfeasibleSetError for infeasible allocations.
double class_objective(std::span<const std::size_t> counts,
                       std::span<const ClassSpec> classes);

/// Admits only the smallest-size class (ties by label), with
/// symmetric_optimal_count users. When that class's population is smaller
/// than the count the closed form no longer applies and the exhaustive
/// allocation search is used instead.
ClassAllocation multiclass_optimal(std::span<const ClassSpec> classes);

/// Enumerates all count vectors with L_c ≤ classes[c].limit(). Throws
/// SizeLimitError if that grid exceeds max_vectors.
ClassAllocation optimal_allocation_exhaustive(std::span<const ClassSpec> classes,
                                              std::size_t max_vectors = 50'000'000);

/// 1 − u_T(allocation)/u_T(baseline) with the equal-gain objective.
double utility_loss(std::span<const std::size_t> allocation,
                    std::span<const ClassSpec> classes,
                    std::span<const std::size_t> baseline);

}  // namespace prcg
