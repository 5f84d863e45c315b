#pragma once

#include <Eigen/Dense>

#include "bellbench/types.hpp"

namespace bellbench {

/// @brief Two-photon polarization state as a 4x4 density matrix.
///
/// Basis order is HH, HV, VH, VV.
struct TwoQubitState {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

  /// @brief True if rho is Hermitian, unit-trace and positive within tol.
  bool is_physical(double tol = 1e-9) const;
};

/// @brief The singlet state (|HV> - |VH>)/sqrt(2) as a density matrix.
TwoQubitState singlet_state();

/// @brief Singlet mixed with white noise: v*singlet + (1-v)*I/4.
///
/// Throws std::domain_error unless v is in [0, 1].
TwoQubitState werner_state(double visibility);

/// @brief Projector onto transmission through a polarizer at the given angle.
///
/// One-qubit basis order is H, V; the transmission axis is
/// cos(theta)|H> + sin(theta)|V>.
Eigen::Matrix2cd transmission_projector(PolarizerAngle angle);

/// @brief Joint transmit/absorb probabilities for a state at a setting pair.
OutcomeProbabilities outcome_probabilities(const TwoQubitState& state,
                                           SettingPair setting);

/// @brief Correlation E = p_pp - p_pm - p_mp + p_mm for a state at a setting.
double correlation(const TwoQubitState& state, SettingPair setting);

/// @brief CHSH combination E(a0,b0) - E(a0,b1) + E(a1,b0) + E(a1,b1).
double chsh_value(const TwoQubitState& state, PolarizerAngle a0,
                  PolarizerAngle a1, PolarizerAngle b0, PolarizerAngle b1);

/// @brief Correlation of the phenomenological model at a setting pair.
double model_correlation(const CorrelationModel& model, SettingPair setting);

/// @brief CHSH combination of model correlations at the four setting pairs.
double model_chsh(const CorrelationModel& model, PolarizerAngle a0,
                  PolarizerAngle a1, PolarizerAngle b0, PolarizerAngle b1);

}  // namespace bellbench
