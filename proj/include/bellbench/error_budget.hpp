#pragma once

#include <cstdint>

#include "bellbench/apparatus.hpp"
#include "bellbench/records.hpp"
#include "bellbench/types.hpp"

namespace bellbench {

/// @brief Statistical and systematic contributions to the uncertainty of S.
///
/// total combines counting, dead_time, timing_jitter and angle in
/// quadrature. clock_drift is reported for comparison but excluded from
/// the total: a slow common drift of the interval clock rescales all
/// counts of a set together and cancels in the count ratios to the level
/// where it is indistinguishable from the timing term it already shadows.
struct ErrorBudget {
  double counting = 0.0;
  double dead_time = 0.0;
  double timing_jitter = 0.0;
  double clock_drift = 0.0;
  double angle = 0.0;
  double total = 0.0;
  std::string dominant;  // name of the largest included term
};

/// @brief Counting-statistics term: the Poisson sigma of the S estimate.
double counting_term(const MeasurementRecordSet& records);

/// @brief Propagates an independent per-interval relative count error f
/// through the S estimate.
///
/// Every (set, setting) interval is counted by its own clock, so its total
/// is perturbed by an independent relative error f. The perturbation
/// enters S through dE/dN of each pooled count: for a correlation with
/// pooled transmitted-agree count P and disagree count M (N = P + M),
/// dE/dN_agree = 2M/N^2 and dE/dN_disagree = -2P/N^2. Summing the squared
/// per-interval contributions gives, for counts spread evenly over n sets,
/// sigma_E = (f / sqrt(n)) * (1 - E^2)/2, and the four correlation
/// variances add. The result is exactly linear in f.
double exposure_term(const MeasurementRecordSet& records, double f);

/// @brief Dead-time term via the exposure engine.
///
/// The live-time lost in an interval fluctuates with the number of
/// detected singles: f_per_detector = sqrt(N_singles) * dead_time /
/// interval, and the two detectors combine in quadrature. Mean per-interval
/// singles are taken from the records.
double dead_time_term(const MeasurementRecordSet& records,
                      const ApparatusParams& params);

/// @brief Interval-clock jitter term: exposure_term with f = jitter/interval.
double timing_term(const MeasurementRecordSet& records, double jitter_s);

/// @brief Clock-drift term: exposure_term with f equal to the fractional
/// drift rate (a drift of d accumulates d * interval over each interval).
double clock_term(const MeasurementRecordSet& records, double drift_fraction);

/// @brief Monte Carlo sigma of the model-predicted S under independent
/// uniform angle errors of +-resolution on all four operating angles.
///
/// At an exact optimum S is stationary and the term is quadratically small;
/// away from it the local gradient dominates. The motors return to the
/// same quantized dial positions every set, so this error is systematic
/// across sets and is not averaged down by repetition.
double angle_term(const CorrelationModel& model, PolarizerAngle a0,
                  PolarizerAngle a1, PolarizerAngle b0, PolarizerAngle b1,
                  double resolution_deg, int n_samples, std::uint64_t seed);

/// @brief Monte Carlo knobs of the angle term inside full_budget.
struct BudgetParams {
  int angle_mc_samples = 20000;
  std::uint64_t angle_mc_seed = 1;
};

/// @brief Assembles the full budget for a record set.
///
/// The hardware inputs (dead times, jitter, drift, actuator resolution)
/// come from the apparatus parameters; the model and the four operating
/// angles parameterize the angle term. Intervals are taken from the
/// records' durations, not from the nominal timing interval.
ErrorBudget full_budget(const MeasurementRecordSet& records,
                        const ApparatusParams& params,
                        const CorrelationModel& model,
                        const OperatingAngles& angles,
                        const BudgetParams& budget = {});

}  // namespace bellbench
