#pragma once

// Per-user M/G/1 queue with ARQ: a packet of M bits takes τ = M/R seconds
// per attempt and is retransmitted until it succeeds, each attempt
// succeeding independently with probability f(γ). All quantities are SI.

#include <cstdint>

#include "prcg/random.hpp"

namespace prcg {

/// Margin in the stability test f > λτ + margin.
inline constexpr double kStabilityMargin = 1e-12;

/// Poisson packet arrivals. source_rate() = M·λ.
class TrafficSpec {
 public:
  TrafficSpec(double packet_rate, int packet_size_bits);
  static TrafficSpec from_source_rate(double source_rate_bps,
                                      int packet_size_bits);

  double packet_rate() const noexcept { return lambda_; }
  int packet_size_bits() const noexcept { return bits_; }
  double source_rate() const noexcept { return lambda_ * bits_; }

 private:
  double lambda_;
  int bits_;
};

struct QueueOperatingPoint {
  double tau = 0.0;
  double success_prob = 0.0;
  double rho = 0.0;
  double mean_delay = 0.0;
};

/// τ = M/R.
double transmission_time(double packet_size_bits, double rate_bps);

/// Mean sojourn time τ(1 − λτ/2)/(f − λτ). Throws UnstableQueueError
/// unless f > λτ + kStabilityMargin.
double mean_delay(const TrafficSpec& traffic, double tau, double success_prob);

/// Mean sojourn time from the Pollaczek–Khinchine mean queue length with
/// the geometric service law: E{S} = τ/f, Var{S} = τ²(1 − f)/f².
double pk_mean_delay(const TrafficSpec& traffic, double tau,
                     double success_prob);

QueueOperatingPoint operating_point(const TrafficSpec& traffic, double tau,
                                    double success_prob);

/// η = λτ + τ/D − λτ²/(2D): the success probability needed to meet a mean
/// delay bound D. η ≥ 1 means the bound cannot be met at this rate.
double required_success_prob(const TrafficSpec& traffic, double tau,
                             double max_delay);

enum class DelayFeasibility {
  feasible,
  delay_below_transmission_time,  // D < τ
  demand_not_below_one,           // η ≥ 1
  negative_demand,                // η < 0
};

DelayFeasibility classify_feasibility(const TrafficSpec& traffic, double tau,
                                      double max_delay);

/// True iff 0 ≤ η < 1 and D ≥ τ.
bool feasible(const TrafficSpec& traffic, double tau, double max_delay);

const char* to_string(DelayFeasibility v);

struct DelayStatistics {
  double mean = 0.0;
  double variance = 0.0;  // of individual sojourn times
  std::uint64_t count = 0;
  /// Standard error of the mean from non-overlapping batch means;
  /// consecutive sojourn times are correlated, so the naive
  /// sqrt(variance/count) understates it.
  double standard_error = 0.0;
};

/// Event-driven FIFO queue simulation. One instance per thread; the
/// generator state advances across run() calls, so a retry on the same
/// instance draws fresh samples deterministically.
class Mg1ArqSimulator {
 public:
  explicit Mg1ArqSimulator(std::uint64_t seed) : rng_(seed) {}
  explicit Mg1ArqSimulator(CounterRng rng) : rng_(rng) {}

  /// Throws UnstableQueueError for unstable parameters and DomainError for
  /// num_packets == 0 or f outside (0, 1].
  DelayStatistics run(const TrafficSpec& traffic, double tau,
                      double success_prob, std::uint64_t num_packets);

  static constexpr std::uint64_t kBatches = 50;

 private:
  CounterRng rng_;
};

DelayStatistics simulate_mg1_arq(const TrafficSpec& traffic, double tau,
                                 double success_prob,
                                 std::uint64_t num_packets, std::uint64_t seed);

/// Rough relaxation time of the queue in packets, (c_a² + c_s²)/(1 − ρ)²
/// with Poisson arrivals (c_a² = 1) and geometric service (c_s² = 1 − f).
/// A run much shorter than this never leaves the empty-start transient and
/// its batch-means error bar is meaningless. 1 without traffic.
double relaxation_packets(const TrafficSpec& traffic, double tau,
                          double success_prob);

/// Packets per relaxation time required before a simulation is trusted.
inline constexpr double kMinRelaxations = 100.0;

}  // namespace prcg
