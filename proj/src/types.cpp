#include "bellbench/types.hpp"

#include <cmath>

namespace bellbench {

double normalize_deg(double deg) {
  double r = std::fmod(deg, 180.0);
  if (r < 0.0) r += 180.0;
  // fmod can return exactly 180.0 after the correction when deg is a tiny
  // negative number; fold that back to 0.
  if (r >= 180.0) r -= 180.0;
  // Map -0.0 to +0.0 so formatted angles never show a negative zero.
  return r + 0.0;
}

double quantize_deg(double deg, double resolution_deg) {
  if (resolution_deg <= 0.0) return normalize_deg(deg);
  const double steps = std::ceil(deg / resolution_deg - 0.5);
  return normalize_deg(steps * resolution_deg);
}

void CorrelationModel::validate() const {
  if (!(v_hv >= 0.0 && v_hv <= 1.0))
    throw config_error("correlation model: v_hv must be in [0, 1]");
  if (!(v_45 >= 0.0 && v_45 <= 1.0))
    throw config_error("correlation model: v_45 must be in [0, 1]");
  if (!std::isfinite(misalign_a_deg) || !std::isfinite(misalign_b_deg))
    throw config_error("correlation model: misalignments must be finite");
}

}  // namespace bellbench
