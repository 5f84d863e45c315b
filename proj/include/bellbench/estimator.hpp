#pragma once

#include <array>
#include <cstdint>

#include "bellbench/records.hpp"
#include "bellbench/types.hpp"

namespace bellbench {

/// @brief Pooled outcome counts for one correlation E(a_i, b_j).
struct CoincidenceCounts {
  std::int64_t n_pp = 0;
  std::int64_t n_pm = 0;
  std::int64_t n_mp = 0;
  std::int64_t n_mm = 0;
  double duration_s = 0.0;
  SettingPair setting;

  std::int64_t total() const { return n_pp + n_pm + n_mp + n_mm; }
};

/// @brief Correlation estimate with its counting-statistics uncertainty.
struct CorrelationEstimate {
  double e = 0.0;
  double sigma = 0.0;
  std::int64_t n_total = 0;
};

/// @brief Count estimator E = (Npp - Npm - Nmp + Nmm) / Ntotal.
///
/// sigma is the Poisson propagation sqrt(4*P*M/N^3), with P = Npp + Nmm
/// and M = Npm + Nmp, which equals sqrt((1 - e^2)/N). Throws data_error
/// when the total count is zero.
CorrelationEstimate estimate_correlation(const CoincidenceCounts& counts);

/// @brief CHSH estimate with per-correlation breakdown.
///
/// s keeps its sign; downstream bound comparisons use |s| and reports
/// carry both. sigma covers counting statistics only; systematic terms
/// are composed separately in the error budget.
struct SResult {
  double s = 0.0;
  double sigma = 0.0;
  std::array<CorrelationEstimate, 4> correlations{};
  double tsirelson_gap = 0.0;
  double grinbaum_z = 0.0;
};

/// @brief Pools records across sets and forms S = E00 - E01 + E10 + E11.
///
/// sigma = sqrt(sum of the four correlation sigmas squared);
/// tsirelson_gap = 2*sqrt(2) - |s|; grinbaum_z = (|s| - grinbaum_bound)/sigma.
/// Throws data_error (naming the setting) if any correlation has zero total.
SResult estimate_s(const MeasurementRecordSet& records);

/// @brief SResult from an externally given value and uncertainty.
SResult s_result_from_value(double s, double sigma);

/// @brief Fringe visibility estimate from a polarizer scan.
struct VisibilityEstimate {
  double v = 0.0;
  double sigma = 0.0;
};

/// @brief Fits counts(theta) = B + p*cos(2 theta) + q*sin(2 theta) and
/// returns v = sqrt(p^2 + q^2)/B = (max - min)/(max + min).
///
/// The fit is weighted least squares with Poisson count variances; sigma
/// comes from the fitted parameter covariance. Throws data_error on
/// degenerate scans (fewer than four points, all counts equal, or a
/// singular design).
VisibilityEstimate estimate_visibility(const std::vector<double>& angles_deg,
                                       const std::vector<std::int64_t>& counts);

}  // namespace bellbench
