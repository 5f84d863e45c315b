#pragma once

#include <cstdint>
#include <vector>

#include "bellbench/types.hpp"

namespace bellbench {

/// @brief Counts accumulated during one (set, setting) measurement interval.
///
/// Setting indices run 0..15, ordered analyzer-pair-major and
/// outcome-sign-minor: index = 4 * pair + outcome, where pair enumerates
/// (a0,b0), (a0,b1), (a1,b0), (a1,b1) and outcome enumerates the (+,+),
/// (+,-), (-,+), (-,-) analyzer orientations. A "-" orientation is the
/// base angle rotated by 90 degrees.
struct MeasurementRecord {
  int set = 0;
  int setting = 0;
  double alice_deg = 0.0;
  double bob_deg = 0.0;
  double duration_s = 0.0;
  std::int64_t singles_a = 0;
  std::int64_t singles_b = 0;
  std::int64_t coincidences = 0;
};

/// @brief A full measurement campaign: sets x 16 settings worth of records.
struct MeasurementRecordSet {
  std::vector<MeasurementRecord> records;

  int n_sets() const;
  std::int64_t total_coincidences() const;

  /// @brief Throws data_error unless every set has the 16 dense settings
  /// with positive durations and nonnegative counts.
  void validate() const;
};

/// @brief Correlation index (0..3) measured by a given setting index.
inline int pair_of_setting(int setting) { return setting / 4; }

/// @brief Outcome-sign index (0..3 for ++, +-, -+, --) of a setting index.
inline int outcome_of_setting(int setting) { return setting % 4; }

/// @brief The four base analyzer angles of a campaign.
struct OperatingAngles {
  double a0_deg = 0.0;
  double a1_deg = 0.0;
  double b0_deg = 0.0;
  double b1_deg = 0.0;
};

/// @brief Reads the base angles back from the records of the first set
/// ((+,+) orientations of the (a0,b0), (a0,b1), (a1,b0) analyzer pairs).
/// Throws data_error if those settings are missing.
OperatingAngles operating_angles(const MeasurementRecordSet& records);

}  // namespace bellbench
