#include "prcg/admission.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "prcg/error.hpp"

namespace prcg {

namespace {

void check_size(double phi) {
  if (!(phi > 0.0 && phi < 1.0)) throw DomainError("size must lie in (0, 1)");
}

bool ties(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

// Lexicographic order of the ascending index lists encoded by two masks.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const int d = std::countr_zero(a ^ b);
  const std::uint32_t above = ~((std::uint32_t{2} << d) - 1);
  if (a & (std::uint32_t{1} << d)) return (b & above) != 0;
  return (a & above) == 0;
}

}  // namespace

bool budget_feasible(std::span<const double> sizes) {
  double total = 0.0;
  for (double s : sizes) total += s;
  return total < 1.0;
}

std::size_t network_capacity(double phi) {
  check_size(phi);
  auto k = static_cast<std::size_t>(std::ceil(1.0 / phi)) - 1;
  while (static_cast<double>(k + 1) * phi < 1.0) ++k;
  while (k > 0 && static_cast<double>(k) * phi >= 1.0) --k;
  return k;
}

double normalized_objective(std::span<const Candidate> selection) {
  double total = 0.0;
  double weighted = 0.0;
  for (const auto& c : selection) {
    check_size(c.size);
    total += c.size;
    weighted += c.gain / (1.0 - c.size);
  }
  if (!(total < 1.0)) {
    throw InfeasibleSetError("selection total size " + std::to_string(total) +
                             " is not below 1");
  }
  return (1.0 - total) * weighted;
}

double total_utility_objective(std::span<const Candidate> selection,
                               const SystemParams& params,
                               const OptimalSir& opt) {
  return params.bandwidth * opt.f_star /
         (params.noise_power * opt.gamma_star) *
         normalized_objective(selection);
}

AdmissionDecision optimal_subset_exhaustive(std::span<const Candidate> candidates,
                                            const SystemParams& params,
                                            const OptimalSir& opt) {
  const std::size_t n = candidates.size();
  if (n > kMaxExhaustiveCandidates) {
    throw SizeLimitError("exhaustive admission limited to " +
                         std::to_string(kMaxExhaustiveCandidates) +
                         " candidates; use the class-based solver");
  }
  for (const auto& c : candidates) check_size(c.size);

  const auto exact = [&](std::uint32_t mask, double& total) {
    total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        total += candidates[i].size;
        weighted += candidates[i].gain / (1.0 - candidates[i].size);
      }
    }
    return total < 1.0 ? (1.0 - total) * weighted : -1.0;
  };

  std::uint32_t best_mask = 0;
  double best = 0.0;  // empty set
  double best_total = 0.0;

  // Gray-code walk: each step toggles one candidate, so the running sums
  // update in O(1). Near-best subsets are re-evaluated from scratch before
  // comparison so that drift cannot decide a tie.
  double total = 0.0;
  double weighted = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint32_t mask = 0;
  for (std::uint64_t step = 1; step < subsets; ++step) {
    const int bit = std::countr_zero(step);
    const std::uint32_t flag = std::uint32_t{1} << bit;
    const auto& c = candidates[static_cast<std::size_t>(bit)];
    const double sign = (mask & flag) ? -1.0 : 1.0;
    mask ^= flag;
    total += sign * c.size;
    weighted += sign * c.gain / (1.0 - c.size);
    if (total >= 1.0 + 1e-9) continue;
    const double approx = (1.0 - total) * weighted;
    if (approx < best - 1e-9 * std::max(1.0, std::abs(best))) continue;

    double t = 0.0;
    const double value = exact(mask, t);
    if (value < 0.0) continue;
    if ((value > best && !ties(value, best)) ||
        (ties(value, best) && lex_less(mask, best_mask))) {
      best = value;
      best_mask = mask;
      best_total = t;
    }
  }

  AdmissionDecision d;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask & (std::uint32_t{1} << i)) d.admitted.push_back(i);
  }
  d.total_size = best_total;
  d.objective = best;
  d.total_utility = params.bandwidth * opt.f_star /
                    (params.noise_power * opt.gamma_star) * best;
  return d;
}

std::size_t symmetric_optimal_count(double phi) {
  check_size(phi);
  const std::size_t cap = network_capacity(phi);
  const double target = 1.0 / (2.0 * phi);
  const auto clamp = [&](double x) {
    return std::min(cap, static_cast<std::size_t>(std::max(0.0, x)));
  };
  const auto quadratic = [&](std::size_t l) {
    const double x = static_cast<double>(l);
    return x - x * x * phi;
  };
  std::size_t best = clamp(std::floor(target + 0.5));
  for (double x : {std::floor(target), std::ceil(target)}) {
    const std::size_t l = clamp(x);
    if (quadratic(l) > quadratic(best)) best = l;
  }
  return best;
}

std::size_t ClassSpec::limit() const {
  const std::size_t cap = network_capacity(size);
  return population ? std::min(*population, cap) : cap;
}

ClassSpec make_class(std::string label, const QosSpec& qos,
                     const SystemParams& params, const OptimalSir& opt,
                     std::optional<std::size_t> population) {
  ClassSpec c;
  c.label = std::move(label);
  c.source_rate = qos.source_rate;
  c.max_delay = qos.max_delay;
  c.size = size_of(qos, params, opt).phi_star;
  c.population = population;
  return c;
}

bool allocation_feasible(std::span<const std::size_t> counts,
                         std::span<const ClassSpec> classes) {
  if (counts.size() != classes.size()) {
    throw DomainError("one count per class required");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    total += static_cast<double>(counts[c]) * classes[c].size;
  }
  return total < 1.0;
}

double class_objective(std::span<const std::size_t> counts,
                       std::span<const ClassSpec> classes) {
  if (counts.size() != classes.size()) {
    throw DomainError("one count per class required");
  }
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    check_size(classes[c].size);
    const auto l = static_cast<double>(counts[c]);
    total += l * classes[c].size;
    weighted += l / (1.0 - classes[c].size);
  }
  if (!(total < 1.0)) {
    throw InfeasibleSetError("allocation total size " + std::to_string(total) +
                             " is not below 1");
  }
  return (1.0 - total) * weighted;
}

namespace {

ClassAllocation make_allocation(std::vector<std::size_t> counts,
                                std::span<const ClassSpec> classes) {
  ClassAllocation a;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    a.total_size += static_cast<double>(counts[c]) * classes[c].size;
  }
  a.objective = class_objective(counts, classes);
  a.counts = std::move(counts);
  return a;
}

}  // namespace

ClassAllocation multiclass_optimal(std::span<const ClassSpec> classes) {
  if (classes.empty()) throw DomainError("no classes given");
  std::size_t smallest = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    check_size(classes[c].size);
    const auto& s = classes[smallest];
    if (classes[c].size < s.size ||
        (classes[c].size == s.size && classes[c].label < s.label)) {
      smallest = c;
    }
  }
  const std::size_t count = symmetric_optimal_count(classes[smallest].size);
  if (classes[smallest].population && *classes[smallest].population < count) {
    return optimal_allocation_exhaustive(classes);
  }
  std::vector<std::size_t> counts(classes.size(), 0);
  counts[smallest] = count;
  return make_allocation(std::move(counts), classes);
}

ClassAllocation optimal_allocation_exhaustive(std::span<const ClassSpec> classes,
                                              std::size_t max_vectors) {
  if (classes.empty()) throw DomainError("no classes given");
  std::vector<std::size_t> limits;
  double grid = 1.0;
  for (const auto& c : classes) {
    check_size(c.size);
    limits.push_back(c.limit());
    grid *= static_cast<double>(c.limit() + 1);
  }
  if (grid > static_cast<double>(max_vectors)) {
    throw SizeLimitError("allocation grid too large for exhaustive search");
  }

  std::vector<std::size_t> counts(classes.size(), 0);
  std::vector<std::size_t> best_counts = counts;
  double best = 0.0;
  // Odometer over the grid, last class fastest. Ties keep the first vector
  // found, which favours counts in earlier classes being smaller.
  while (true) {
    if (allocation_feasible(counts, classes)) {
      const double v = class_objective(counts, classes);
      if (v > best && !ties(v, best)) {
        best = v;
        best_counts = counts;
      }
    }
    std::size_t c = classes.size();
    while (c > 0) {
      --c;
      if (counts[c] < limits[c]) {
        ++counts[c];
        break;
      }
      counts[c] = 0;
      if (c == 0) return make_allocation(best_counts, classes);
    }
  }
}

double utility_loss(std::span<const std::size_t> allocation,
                    std::span<const ClassSpec> classes,
                    std::span<const std::size_t> baseline) {
  const double base = class_objective(baseline, classes);
  if (!(base > 0.0)) throw DomainError("baseline allocation has zero utility");
  return 1.0 - class_objective(allocation, classes) / base;
}

}  // namespace prcg
