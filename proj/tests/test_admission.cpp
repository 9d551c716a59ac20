#include "prcg/admission.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "prcg/error.hpp"

namespace prcg {
namespace {

constexpr double kPhiA = 0.01984761071864301;
constexpr double kPhiB = 0.071759590336781563;
constexpr double kPhiC = 0.18483011503223314;

class AdmissionTest : public ::testing::Test {
 protected:
  SystemParams params{.bandwidth = 5e6, .noise_power = 1e-13, .packet_size_bits = 100};
  OptimalSir opt = optimal_sir(EfficiencyFunction::exponential(100));

  std::vector<ClassSpec> three_classes() const {
    return {make_class("A", {5e3, 0.010}, params, opt),
            make_class("B", {50e3, 0.050}, params, opt),
            make_class("C", {150e3, 1.0}, params, opt)};
  }
};

TEST(BudgetFeasible, StrictInequality) {
  const std::vector<double> under{0.3, 0.3, 0.3};
  const std::vector<double> exact{0.5, 0.5};
  const std::vector<double> none;
  EXPECT_TRUE(budget_feasible(under));
  EXPECT_FALSE(budget_feasible(exact));
  EXPECT_TRUE(budget_feasible(none));
}

TEST(NetworkCapacity, Examples) {
  EXPECT_EQ(network_capacity(0.0198), 50u);
  EXPECT_EQ(network_capacity(0.5), 1u);
  EXPECT_EQ(network_capacity(0.1848), 5u);
  EXPECT_EQ(network_capacity(kPhiA), 50u);
  EXPECT_EQ(network_capacity(0.25), 3u);
  EXPECT_THROW(network_capacity(1.0), DomainError);
  EXPECT_THROW(network_capacity(0.0), DomainError);
}

TEST(NetworkCapacity, AgreesWithCounting) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double phi = u(rng);
    EXPECT_EQ(network_capacity(phi), oracle::capacity_by_counting(phi)) << phi;
  }
  for (int k = 2; k <= 200; ++k) {
    const double phi = 1.0 / k;
    EXPECT_EQ(network_capacity(phi), oracle::capacity_by_counting(phi)) << k;
  }
}

TEST(NormalizedObjective, TwentyFiveClassAUsers) {
  // With the size rounded to 0.0198: 0.505·25/0.9802.
  const std::vector<Candidate> rounded(25, Candidate{0.0198, 1.0});
  EXPECT_NEAR(normalized_objective(rounded), 12.88, 0.005);
  const std::vector<Candidate> users(25, Candidate{kPhiA, 1.0});
  EXPECT_NEAR(normalized_objective(users),
              (1 - 25 * kPhiA) * 25 / (1 - kPhiA), 1e-12);
  const std::vector<Candidate> full(51, Candidate{kPhiA, 1.0});
  EXPECT_THROW(normalized_objective(full), InfeasibleSetError);
}

TEST_F(AdmissionTest, TotalUtilityScalesNormalizedObjective) {
  const std::vector<Candidate> sel{{0.1, 0.5}, {0.2, 1.0}};
  const double expected = params.bandwidth * opt.f_star /
                          (params.noise_power * opt.gamma_star) *
                          normalized_objective(sel);
  EXPECT_LT(oracle::relative_error(total_utility_objective(sel, params, opt), expected),
            1e-14);
}

TEST_F(AdmissionTest, ThreeEqualUsersOfSizePointThree) {
  // 1 user: 0.7/0.7 = 1; 2 users: 0.4·2/0.7 ≈ 1.143; 3 users: 0.1·3/0.7 ≈ 0.43.
  const std::vector<Candidate> pool(3, Candidate{0.3, 1.0});
  const auto d = optimal_subset_exhaustive(pool, params, opt);
  EXPECT_EQ(d.admitted, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(d.objective, 0.8 / 0.7, 1e-14);
}

TEST_F(AdmissionTest, EmptyPoolAdmitsNobody) {
  const std::vector<Candidate> pool;
  const auto d = optimal_subset_exhaustive(pool, params, opt);
  EXPECT_TRUE(d.admitted.empty());
  EXPECT_EQ(d.objective, 0.0);
}

TEST_F(AdmissionTest, RejectsPoolsBeyondTheSizeLimit) {
  const std::vector<Candidate> pool(kMaxExhaustiveCandidates + 1, Candidate{0.01, 1.0});
  EXPECT_THROW(optimal_subset_exhaustive(pool, params, opt), SizeLimitError);
}

TEST_F(AdmissionTest, ExhaustiveSubsetMatchesPlainEnumeration) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> size(0.01, 0.6), gain(0.05, 1.0);
  std::uniform_int_distribution<int> count(1, 14);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = count(rng);
    std::vector<Candidate> pool;
    std::vector<double> sizes, gains;
    for (int i = 0; i < n; ++i) {
      pool.push_back({size(rng), gain(rng)});
      sizes.push_back(pool.back().size);
      gains.push_back(pool.back().gain);
    }
    const auto d = optimal_subset_exhaustive(pool, params, opt);
    EXPECT_LT(std::abs(d.objective - oracle::best_subset_objective(sizes, gains)),
              1e-12 * std::max(1.0, d.objective));
    std::vector<Candidate> chosen;
    for (std::size_t i : d.admitted) chosen.push_back(pool[i]);
    if (!chosen.empty()) EXPECT_DOUBLE_EQ(normalized_objective(chosen), d.objective);
    EXPECT_TRUE(std::is_sorted(d.admitted.begin(), d.admitted.end()));
  }
}

TEST_F(AdmissionTest, TiesGoToLexicographicallySmallestSet) {
  const std::vector<Candidate> pool(4, Candidate{0.3, 1.0});
  const auto d = optimal_subset_exhaustive(pool, params, opt);
  EXPECT_EQ(d.admitted, (std::vector<std::size_t>{0, 1}));
}

TEST(SymmetricOptimalCount, ClassValues) {
  EXPECT_EQ(symmetric_optimal_count(0.0198), 25u);
  EXPECT_EQ(symmetric_optimal_count(kPhiA), 25u);
  EXPECT_EQ(symmetric_optimal_count(kPhiB), 7u);
  EXPECT_EQ(symmetric_optimal_count(kPhiC), 3u);
  EXPECT_EQ(symmetric_optimal_count(0.9), 1u);
  EXPECT_THROW(symmetric_optimal_count(1.0), DomainError);
}

TEST(SymmetricOptimalCount, MatchesIntegerScan) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(2e-3, 0.99);
  for (int i = 0; i < 2000; ++i) {
    const double phi = u(rng);
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t l = 1; static_cast<double>(l) * phi < 1.0; ++l) {
      const double v = static_cast<double>(l) * (1.0 - static_cast<double>(l) * phi);
      if (v > best_value * (1 + 1e-12)) {
        best_value = v;
        best = l;
      }
    }
    EXPECT_EQ(symmetric_optimal_count(phi), best) << phi;
  }
}

TEST_F(AdmissionTest, MulticlassAdmitsOnlyTheSmallestClass) {
  const auto classes = three_classes();
  const auto alloc = multiclass_optimal(classes);
  EXPECT_EQ(alloc.counts, (std::vector<std::size_t>{25, 0, 0}));
  EXPECT_NEAR(alloc.objective, (1 - 25 * kPhiA) * 25 / (1 - kPhiA), 1e-12);
}

TEST_F(AdmissionTest, MulticlassTieBetweenEqualClasses) {
  std::vector<ClassSpec> classes{{"Y", 1.0, 1.0, 0.1, std::nullopt},
                                 {"X", 1.0, 1.0, 0.1, std::nullopt}};
  const auto alloc = multiclass_optimal(classes);
  // Optimum at L = 5 in total; the lower label takes them.
  EXPECT_EQ(alloc.counts, (std::vector<std::size_t>{0, 5}));
  EXPECT_NEAR(alloc.objective, 0.5 * 5 / 0.9, 1e-14);
}

TEST_F(AdmissionTest, LimitedPopulationFallsBackToSearch) {
  auto classes = three_classes();
  classes[0].population = 10;
  const auto alloc = multiclass_optimal(classes);
  const auto exhaustive = optimal_allocation_exhaustive(classes);
  EXPECT_EQ(alloc.counts, exhaustive.counts);
  EXPECT_EQ(alloc.counts[0], 10u);
}

TEST_F(AdmissionTest, MulticlassMatchesExhaustiveOnRandomSystems) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> size(1.0 / 13, 0.99);
  std::uniform_int_distribution<int> nclasses(1, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ClassSpec> classes;
    std::vector<double> sizes;
    std::vector<std::size_t> limits;
    const int n = nclasses(rng);
    for (int c = 0; c < n; ++c) {
      classes.push_back({std::string(1, static_cast<char>('A' + c)), 1.0, 1.0,
                         size(rng), std::nullopt});
      sizes.push_back(classes.back().size);
      limits.push_back(classes.back().limit());
    }
    const auto alloc = multiclass_optimal(classes);
    EXPECT_NEAR(alloc.objective, oracle::best_allocation_objective(sizes, limits),
                1e-12);
    EXPECT_NEAR(alloc.objective, optimal_allocation_exhaustive(classes).objective,
                1e-12);
  }
}

TEST_F(AdmissionTest, AddingAUserHarmsEveryoneAlreadyAdmitted) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> size(0.01, 0.2), gain(0.1, 1.0);
  const double scale = params.bandwidth * opt.f_star / (params.noise_power * opt.gamma_star);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> sizes, gains;
    for (int i = 0; i < 4; ++i) {
      sizes.push_back(size(rng));
      gains.push_back(gain(rng));
    }
    std::vector<double> more = sizes, more_gains = gains;
    more.push_back(size(rng));
    more_gains.push_back(gain(rng));
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const double before = equilibrium_utility(k, sizes, gains, params, opt.f_star,
                                                opt.gamma_star);
      const double after = equilibrium_utility(k, more, more_gains, params, opt.f_star,
                                               opt.gamma_star);
      EXPECT_LT(after, before);
      EXPECT_LT(before, scale * gains[k]);
    }
  }
}

TEST_F(AdmissionTest, TableOneLosses) {
  const auto classes = three_classes();
  const std::vector<std::size_t> baseline{25, 0, 0};
  struct Row {
    std::vector<std::size_t> counts;
    double loss;
  };
  const Row rows[] = {{{23, 1, 0}, 0.10}, {{20, 0, 1}, 0.30}, {{18, 1, 1}, 0.38},
                      {{0, 7, 0}, 0.71},  {{0, 0, 3}, 0.87}};
  for (const auto& row : rows) {
    EXPECT_NEAR(utility_loss(row.counts, classes, baseline), row.loss, 0.01);
  }
  EXPECT_NEAR(utility_loss(rows[0].counts, classes, baseline), 0.0990, 1e-3);
}

TEST_F(AdmissionTest, AllocationFeasibility) {
  const auto classes = three_classes();
  const std::vector<std::size_t> ok{25, 0, 0}, full{51, 0, 0}, mixed{0, 14, 0};
  EXPECT_TRUE(allocation_feasible(ok, classes));
  EXPECT_FALSE(allocation_feasible(full, classes));
  EXPECT_FALSE(allocation_feasible(mixed, classes));
  EXPECT_THROW(class_objective(full, classes), InfeasibleSetError);
  const std::vector<std::size_t> wrong_length{1, 2};
  EXPECT_THROW(class_objective(wrong_length, classes), DomainError);
}

TEST_F(AdmissionTest, ExhaustiveAllocationRefusesHugeGrids) {
  const std::vector<ClassSpec> classes(6, ClassSpec{"x", 1.0, 1.0, 0.01, std::nullopt});
  EXPECT_THROW(optimal_allocation_exhaustive(classes, 1000), SizeLimitError);
}

}  // namespace
}  // namespace prcg
