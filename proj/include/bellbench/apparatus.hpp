#pragma once

#include "bellbench/types.hpp"

namespace bellbench {

/// @brief How a time window of +-half_width is converted into the effective
/// coincidence width used for accidental rates and timestamp matching.
///
/// Under `full` the effective width is the whole window, 2*half_width,
/// which is the textbook choice for a +-half_width acceptance. Under
/// `half` the effective width is half_width itself; some published numbers
/// follow this convention, so both are supported and the default is `half`.
/// The same effective width drives the timestamp matcher, which keeps
/// closed-form accidental rates and event-level simulation consistent
/// under either convention.
enum class WindowConvention { half, full };

/// @brief Coincidence acceptance window of a correlator.
struct CoincidenceWindow {
  double half_width_s = 1.2e-9;
  WindowConvention convention = WindowConvention::half;

  /// @brief Effective width used in accidental-rate formulas.
  double effective_width_s() const {
    return convention == WindowConvention::full ? 2.0 * half_width_s
                                                : half_width_s;
  }

  /// @brief Half-width handed to the timestamp matcher (effective/2).
  double match_half_width_s() const { return effective_width_s() / 2.0; }
};

/// @brief One detector channel: quantum efficiency, dark rate, dead time.
struct DetectorParams {
  double efficiency = 1.0;
  double dark_rate = 0.0;
  double dead_time_s = 0.0;
};

/// @brief Pair source and per-arm photon rates.
///
/// pair_rate is the rate of photon pairs arriving jointly at the two
/// analyzers, already folded with collection and detection efficiency at
/// the calibration reference (so detector efficiencies default to 1).
/// singles_rate_a/b are the total photon rates entering each analyzer;
/// an analyzer transmits exactly half of an unpolarized arm.
struct SourceParams {
  double pair_rate = 0.0;
  double singles_rate_a = 0.0;
  double singles_rate_b = 0.0;
};

/// @brief Acquisition timing: interval length and its imperfections.
struct TimingParams {
  double interval_s = 60.0;  // nominal acquisition time per setting
  double jitter_s = 0.0;     // absolute boundary uncertainty per interval
  double clock_drift = 0.0;  // fractional frequency error (dimensionless)
};

/// @brief Rotation-stage quantization; 0 disables quantization.
struct ActuatorParams {
  double resolution_deg = 0.1;
};

/// @brief Full apparatus description used by rate models and simulation.
struct ApparatusParams {
  SourceParams source;
  DetectorParams detector_a;
  DetectorParams detector_b;
  CoincidenceWindow window;
  TimingParams timing;
  ActuatorParams actuator;
  CorrelationModel model;

  /// @brief Throws config_error on out-of-range or inconsistent values.
  void validate() const;
};

/// @brief Accidental coincidence rate of two uncorrelated event streams.
///
/// rate = singles_a * singles_b * effective_width.
double accidental_rate(double singles_a, double singles_b,
                       const CoincidenceWindow& window);

/// @brief Detected rate of a non-paralyzable detector: r / (1 + r * tau).
double dead_time_throughput(double rate, double dead_time_s);

/// @brief Expected detected rates at one analyzer setting.
struct SettingRates {
  double singles_a = 0.0;
  double singles_b = 0.0;
  double true_coinc = 0.0;
  double accidental_coinc = 0.0;
};

/// @brief Closed-form detected rates for the apparatus at a setting pair.
///
/// Singles per arm: half the arm rate passes the analyzer, the detector
/// dark rate adds on top, and the non-paralyzable dead time thins the sum.
/// True coincidences: pair_rate times the joint transmission probability
/// (1 + E)/4 from the correlation model, times both detector efficiencies
/// and both live-time fractions. Accidentals follow accidental_rate() on
/// the detected singles.
SettingRates expected_setting_rates(const ApparatusParams& params,
                                    SettingPair setting);

}  // namespace bellbench
