#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bellbench/apparatus.hpp"
#include "bellbench/types.hpp"

namespace bellbench {

/// @brief Measurement callback: coincidence count for a dwell at (a, b).
using ExperimentOracle =
    std::function<double(double a_deg, double b_deg, double dwell_s)>;

/// @brief Options of the alternating coordinate-scan optimizer.
struct OptimizerOptions {
  double resolution_deg = 0.1;  // actuator step; probed angles are multiples
  double dwell_s = 1.0;
  double coarse_step_deg = 5.0;
  int max_rounds = 8;
};

/// @brief Operating angles found by the optimizer.
struct OptimizedAngles {
  double a0_deg = 0.0;
  double b0_deg = 0.0;
  double a1_deg = 0.0;
  double b1_deg = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// @brief Locates CHSH operating angles by alternating fringe scans.
///
/// Starts from the reference a = 0. A scan of b at fixed a locates the
/// coincidence-fringe maximum (coarse steps, then fine steps at the
/// actuator resolution; the extremum is refined by a quadratic fit around
/// the best point and then quantized, ties toward the smaller angle).
/// The fringe phase fixes b0 and b1 at the correlation-target offsets
/// +22.5 and +67.5 degrees from the fringe minimum; a is then rescanned
/// at fixed b0 to place a0 and a1 at -22.5 and +22.5 degrees from its
/// fringe minimum. Rounds alternate until no angle moves by more than the
/// resolution; if max_rounds is exceeded the best angles so far are
/// returned with converged = false.
OptimizedAngles optimize(const ExperimentOracle& oracle,
                         const OptimizerOptions& options);

/// @brief One point of a fringe scan.
struct FringePoint {
  double angle_deg = 0.0;
  double count = 0.0;
};

/// @brief Sweeps b at fixed a and records one count per angle.
///
/// The trace feeds estimate_visibility and the plot-data export.
std::vector<FringePoint> scan_fringe(const ExperimentOracle& oracle,
                                     double fixed_a_deg,
                                     const std::vector<double>& sweep_deg,
                                     double dwell_s);

/// @brief Noiseless oracle: expected coincidence counts under the model.
ExperimentOracle model_oracle(const CorrelationModel& model,
                              double pair_rate = 1e4);

/// @brief Poisson-noisy oracle drawing counts at the apparatus's rates.
ExperimentOracle noisy_oracle(const ApparatusParams& params,
                              std::uint64_t seed);

}  // namespace bellbench
