#include "bellbench/optimizer.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "bellbench/correlation.hpp"
#include "bellbench/rng.hpp"

namespace bellbench {

namespace {

/// Circular distance between two polarizer orientations (period 180).
double angle_distance(double x, double y) {
  double d = std::fabs(normalize_deg(x) - normalize_deg(y));
  return std::min(d, 180.0 - d);
}

struct Scan {
  const ExperimentOracle& oracle;
  const OptimizerOptions& options;
  bool scan_alice;  // which party's angle is swept
  double fixed_deg; // the other party's angle

  double probe(double deg) const {
    const double q = quantize_deg(deg, options.resolution_deg);
    return scan_alice ? oracle(q, fixed_deg, options.dwell_s)
                      : oracle(fixed_deg, q, options.dwell_s);
  }

  /// Locates the coincidence-fringe maximum: coarse sweep, fine sweep at
  /// actuator resolution, then a three-point quadratic fit whose vertex is
  /// snapped back to the actuator grid.
  double find_maximum() const {
    const double res = options.resolution_deg;

    double best_deg = 0.0, best_count = -1.0;
    for (double deg = 0.0; deg < 180.0; deg += options.coarse_step_deg) {
      const double c = probe(deg);
      if (c > best_count) { best_count = c; best_deg = deg; }
    }

    double fine_best = best_deg;
    for (double deg = best_deg - options.coarse_step_deg;
         deg <= best_deg + options.coarse_step_deg + 1e-9; deg += res) {
      const double c = probe(deg);
      if (c > best_count) { best_count = c; fine_best = deg; }
    }

    const double left = probe(fine_best - res);
    const double right = probe(fine_best + res);
    const double denom = left - 2.0 * best_count + right;
    double offset = 0.0;
    if (denom < 0.0) offset = 0.5 * res * (left - right) / denom;
    if (!(std::fabs(offset) <= res)) offset = 0.0;
    return quantize_deg(fine_best + offset, res);
  }
};

}  // namespace

OptimizedAngles optimize(const ExperimentOracle& oracle,
                         const OptimizerOptions& options) {
  const double res = options.resolution_deg;

  OptimizedAngles best;
  best.a0_deg = quantize_deg(0.0, res);  // reference axis

  for (int round = 1; round <= options.max_rounds; ++round) {
    const OptimizedAngles previous = best;

    // Sweep b at fixed a0: the fringe maximum sits 90 degrees from the
    // fringe minimum, and the correlation targets are +22.5 and +67.5
    // degrees from the minimum.
    Scan scan_b{oracle, options, false, best.a0_deg};
    const double b_minimum = scan_b.find_maximum() - 90.0;
    best.b0_deg = quantize_deg(b_minimum + 22.5, res);
    best.b1_deg = quantize_deg(b_minimum + 67.5, res);

    // Sweep a at fixed b0: a0 and a1 sit -22.5 and +22.5 degrees from the
    // fringe minimum in a.
    Scan scan_a{oracle, options, true, best.b0_deg};
    const double a_minimum = scan_a.find_maximum() - 90.0;
    best.a0_deg = quantize_deg(a_minimum - 22.5, res);
    best.a1_deg = quantize_deg(a_minimum + 22.5, res);

    best.iterations = round;
    if (round >= 2) {
      const double moved = std::max(
          std::max(angle_distance(best.a0_deg, previous.a0_deg),
                   angle_distance(best.a1_deg, previous.a1_deg)),
          std::max(angle_distance(best.b0_deg, previous.b0_deg),
                   angle_distance(best.b1_deg, previous.b1_deg)));
      if (moved <= res * (1.0 + 1e-9)) {
        best.converged = true;
        return best;
      }
    }
  }
  best.converged = false;
  return best;
}

std::vector<FringePoint> scan_fringe(const ExperimentOracle& oracle,
                                     double fixed_a_deg,
                                     const std::vector<double>& sweep_deg,
                                     double dwell_s) {
  if (sweep_deg.empty())
    throw std::invalid_argument("scan_fringe: empty sweep");
  std::vector<FringePoint> trace;
  trace.reserve(sweep_deg.size());
  for (double b : sweep_deg)
    trace.push_back({b, oracle(fixed_a_deg, b, dwell_s)});
  return trace;
}

ExperimentOracle model_oracle(const CorrelationModel& model, double pair_rate) {
  return [model, pair_rate](double a_deg, double b_deg, double dwell_s) {
    const double e = model_correlation(model, {a_deg, b_deg});
    return pair_rate * 0.25 * (1.0 + e) * dwell_s;
  };
}

ExperimentOracle noisy_oracle(const ApparatusParams& params,
                              std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(make_engine(seed));
  return [params, rng](double a_deg, double b_deg, double dwell_s) {
    const SettingRates rates =
        expected_setting_rates(params, {a_deg, b_deg});
    const double mean =
        (rates.true_coinc + rates.accidental_coinc) * dwell_s;
    if (mean <= 0.0) return 0.0;
    return static_cast<double>(
        std::poisson_distribution<std::int64_t>(mean)(*rng));
  };
}

}  // namespace bellbench
