#include "prcg/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "prcg/error.hpp"

namespace prcg {

TrafficSpec::TrafficSpec(double packet_rate, int packet_size_bits)
    : lambda_(packet_rate), bits_(packet_size_bits) {
  if (!(packet_rate >= 0.0) || !std::isfinite(packet_rate)) {
    throw DomainError("packet arrival rate must be finite and nonnegative");
  }
  if (packet_size_bits < 1) {
    throw DomainError("packet size must be at least one bit");
  }
}

TrafficSpec TrafficSpec::from_source_rate(double source_rate_bps,
                                          int packet_size_bits) {
  if (packet_size_bits < 1) {
    throw DomainError("packet size must be at least one bit");
  }
  return {source_rate_bps / packet_size_bits, packet_size_bits};
}

double transmission_time(double packet_size_bits, double rate_bps) {
  if (!(packet_size_bits > 0.0)) {
    throw DomainError("packet size must be positive");
  }
  if (!(rate_bps > 0.0)) throw DomainError("transmission rate must be positive");
  return packet_size_bits / rate_bps;
}

namespace {

void check_service(const TrafficSpec& traffic, double tau, double f) {
  if (!(tau > 0.0)) throw DomainError("transmission time must be positive");
  if (!(f > 0.0 && f <= 1.0)) {
    throw DomainError("success probability must lie in (0, 1]");
  }
  if (!(f > traffic.packet_rate() * tau + kStabilityMargin)) {
    throw UnstableQueueError("queue unstable: success probability " +
                             std::to_string(f) + " does not exceed load " +
                             std::to_string(traffic.packet_rate() * tau));
  }
}

}  // namespace

double mean_delay(const TrafficSpec& traffic, double tau, double success_prob) {
  check_service(traffic, tau, success_prob);
  const double load = traffic.packet_rate() * tau;
  return tau * (1.0 - 0.5 * load) / (success_prob - load);
}

double pk_mean_delay(const TrafficSpec& traffic, double tau,
                     double success_prob) {
  check_service(traffic, tau, success_prob);
  const double lambda = traffic.packet_rate();
  const double f = success_prob;
  if (lambda == 0.0) return tau / f;

  const double rho = lambda * tau / f;
  const double service_var = tau * tau * (1.0 - f) / (f * f);
  const double mean_in_system =
      rho + (rho * rho + lambda * lambda * service_var) / (2.0 * (1.0 - rho));
  return mean_in_system / lambda;
}

double relaxation_packets(const TrafficSpec& traffic, double tau,
                          double success_prob) {
  check_service(traffic, tau, success_prob);
  if (traffic.packet_rate() == 0.0) return 1.0;
  const double rho = traffic.packet_rate() * tau / success_prob;
  return (2.0 - success_prob) / ((1.0 - rho) * (1.0 - rho));
}

QueueOperatingPoint operating_point(const TrafficSpec& traffic, double tau,
                                    double success_prob) {
  return {tau, success_prob, traffic.packet_rate() * tau / success_prob,
          mean_delay(traffic, tau, success_prob)};
}

double required_success_prob(const TrafficSpec& traffic, double tau,
                             double max_delay) {
  if (!(tau > 0.0)) throw DomainError("transmission time must be positive");
  if (!(max_delay > 0.0)) throw DomainError("delay bound must be positive");
  const double load = traffic.packet_rate() * tau;
  return load + tau / max_delay - load * tau / (2.0 * max_delay);
}

DelayFeasibility classify_feasibility(const TrafficSpec& traffic, double tau,
                                      double max_delay) {
  if (max_delay < tau) return DelayFeasibility::delay_below_transmission_time;
  const double eta = required_success_prob(traffic, tau, max_delay);
  if (eta < 0.0) return DelayFeasibility::negative_demand;
  if (eta >= 1.0) return DelayFeasibility::demand_not_below_one;
  return DelayFeasibility::feasible;
}

bool feasible(const TrafficSpec& traffic, double tau, double max_delay) {
  return classify_feasibility(traffic, tau, max_delay) ==
         DelayFeasibility::feasible;
}

const char* to_string(DelayFeasibility v) {
  switch (v) {
    case DelayFeasibility::feasible:
      return "feasible";
    case DelayFeasibility::delay_below_transmission_time:
      return "delay bound below transmission time";
    case DelayFeasibility::demand_not_below_one:
      return "required success probability not below 1";
    case DelayFeasibility::negative_demand:
      return "negative required success probability";
  }
  return "unknown";
}

DelayStatistics Mg1ArqSimulator::run(const TrafficSpec& traffic, double tau,
                                     double success_prob,
                                     std::uint64_t num_packets) {
  if (num_packets == 0) throw DomainError("need at least one packet");
  check_service(traffic, tau, success_prob);

  const double lambda = traffic.packet_rate();
  // ln(1 − f); −∞ at f = 1, where every packet takes exactly one attempt.
  const double log_fail = std::log1p(-success_prob);

  const std::uint64_t batches =
      num_packets >= 2 * kBatches ? kBatches : std::uint64_t{1};
  const std::uint64_t batch_len = num_packets / batches;
  std::vector<double> batch_sums(batches, 0.0);

  double arrival = 0.0;
  double departure = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < num_packets; ++i) {
    if (lambda > 0.0) {
      arrival += -std::log(rng_.uniform_open_low()) / lambda;
    } else {
      arrival = departure;  // no queueing without arrivals
    }
    const double u = rng_.uniform_open_low();
    const double attempts =
        std::max(1.0, std::ceil(std::log(u) / log_fail));
    const double start = std::max(arrival, departure);
    departure = start + attempts * tau;
    const double sojourn = departure - arrival;

    // Welford
    const double delta = sojourn - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (sojourn - mean);

    const std::uint64_t b = std::min(i / batch_len, batches - 1);
    batch_sums[b] += sojourn;
  }

  DelayStatistics out;
  out.count = num_packets;
  out.mean = mean;
  out.variance = num_packets > 1 ? m2 / static_cast<double>(num_packets - 1)
                                 : 0.0;
  if (batches > 1) {
    double bm_mean = 0.0;
    std::vector<double> means(batches);
    for (std::uint64_t b = 0; b < batches; ++b) {
      const std::uint64_t len =
          b + 1 == batches ? num_packets - b * batch_len : batch_len;
      means[b] = batch_sums[b] / static_cast<double>(len);
      bm_mean += means[b];
    }
    bm_mean /= static_cast<double>(batches);
    double ss = 0.0;
    for (double m : means) ss += (m - bm_mean) * (m - bm_mean);
    out.standard_error =
        std::sqrt(ss / static_cast<double>(batches - 1) /
                  static_cast<double>(batches));
  } else {
    out.standard_error =
        std::sqrt(out.variance / static_cast<double>(num_packets));
  }
  return out;
}

DelayStatistics simulate_mg1_arq(const TrafficSpec& traffic, double tau,
                                 double success_prob,
                                 std::uint64_t num_packets,
                                 std::uint64_t seed) {
  return Mg1ArqSimulator(seed).run(traffic, tau, success_prob, num_packets);
}

}  // namespace prcg
