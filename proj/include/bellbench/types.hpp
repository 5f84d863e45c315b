#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bellbench {

/// @brief CHSH value attainable by local deterministic strategies.
inline constexpr double local_bound = 2.0;

/// @brief Quantum maximum of the CHSH value, 2*sqrt(2).
inline const double tsirelson_bound = 2.0 * std::sqrt(2.0);

/// @brief Proposed sub-quantum bound on the CHSH value, 2.82537(2).
///
/// Hard-coded to the published value; the model behind it is out of scope
/// here. The quoted uncertainty of 2e-5 on the last digit is not propagated.
inline constexpr double grinbaum_bound = 2.82537;

/// @brief CHSH value of the no-signaling-maximal box.
inline constexpr double no_signaling_maximum = 4.0;

/// @brief Raised when a configuration file or parameter set is invalid.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// @brief Raised when measurement data are malformed or unusable.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// @brief Maps an angle in degrees into the canonical range [0, 180).
double normalize_deg(double deg);

/// @brief Snaps an angle to the nearest actuator step, ties toward the
/// smaller angle, then normalizes into [0, 180). A resolution of 0 means
/// a continuous actuator: the angle is only normalized.
double quantize_deg(double deg, double resolution_deg);

/// @brief Linear-polarizer orientation, stored in degrees in [0, 180).
///
/// A polarizer axis is a line, not a direction, so orientations are taken
/// modulo 180 degrees on construction.
struct PolarizerAngle {
  double degrees = 0.0;

  PolarizerAngle() = default;
  PolarizerAngle(double deg) : degrees(normalize_deg(deg)) {}

  double radians() const { return degrees * (M_PI / 180.0); }

  /// @brief Orientation rotated by delta degrees, renormalized.
  PolarizerAngle rotated(double delta_deg) const {
    return PolarizerAngle(degrees + delta_deg);
  }
};

/// @brief One joint analyzer setting: Alice's and Bob's polarizer angles.
struct SettingPair {
  PolarizerAngle alice;
  PolarizerAngle bob;
};

/// @brief Joint outcome probabilities behind two single-channel analyzers.
///
/// pp means both photons transmitted, pm Alice transmitted / Bob absorbed,
/// and so on.
struct OutcomeProbabilities {
  double pp = 0.0;
  double pm = 0.0;
  double mp = 0.0;
  double mm = 0.0;

  double sum() const { return pp + pm + mp + mm; }
};

/// @brief Phenomenological polarization-correlation model of a real pair source.
///
/// The correlation between transmission outcomes at angles (a, b) is
///   E(a, b) = -[v_hv * cos 2(a+ma) * cos 2(b+mb)
///              + v_45 * sin 2(a+ma) * sin 2(b+mb)]
/// where v_hv and v_45 are the fringe visibilities in the 0/90 and +-45
/// degree bases and ma, mb are fixed analyzer misalignments. With both
/// visibilities 1 and no misalignment this is the ideal -cos 2(a-b).
struct CorrelationModel {
  double v_hv = 1.0;
  double v_45 = 1.0;
  double misalign_a_deg = 0.0;
  double misalign_b_deg = 0.0;

  /// @brief Throws config_error unless both visibilities are in [0, 1].
  void validate() const;
};

}  // namespace bellbench
