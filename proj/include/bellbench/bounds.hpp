#pragma once

#include <array>
#include <cstdint>

#include "bellbench/correlation.hpp"
#include "bellbench/estimator.hpp"
#include "bellbench/types.hpp"

namespace bellbench {

/// @brief Conditional outcome distribution p(a, b | x, y) for the two-setting,
/// two-outcome scenario.
///
/// Indices: x, y are the setting choices (0 or 1); a, b are the outcomes with
/// 0 meaning +1 and 1 meaning -1.
struct BehaviorTable {
  std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> p{};

  double& at(int x, int y, int a, int b) { return p[x][y][a][b]; }
  double at(int x, int y, int a, int b) const { return p[x][y][a][b]; }

  /// @brief Correlation E(x, y) = sum_ab (-1)^(a+b) p(a,b|x,y).
  double correlation(int x, int y) const;

  /// @brief True if every p(.|x,y) is nonnegative and sums to 1 within tol.
  bool is_normalized(double tol = 1e-12) const;
};

/// @brief CHSH combination E(0,0) - E(0,1) + E(1,0) + E(1,1) of a table.
double chsh_of_behavior(const BehaviorTable& table);

/// @brief Result of a no-signaling marginal check.
struct NoSignalingCheck {
  bool ok = false;
  double max_violation = 0.0;
};

/// @brief Compares each party's marginals across the other party's settings.
NoSignalingCheck check_no_signaling(const BehaviorTable& table,
                                    double tol = 1e-12);

/// @brief The no-signaling-maximal box for this CHSH sign pattern.
///
/// Outcomes are perfectly correlated except at the setting pair (x=0, y=1),
/// which is anticorrelated, matching the minus sign on E(a0, b1); all
/// marginals are uniform. Its CHSH value is exactly 4.
BehaviorTable pr_box();

/// @brief Local deterministic strategy: outcome assignments a(x), b(y).
struct DeterministicStrategy {
  std::array<int, 2> a{};  // outcome sign index per Alice setting
  std::array<int, 2> b{};
};

/// @brief Behavior table of a deterministic strategy.
BehaviorTable deterministic_behavior(const DeterministicStrategy& strategy);

/// @brief Exhaustive maximum of |CHSH| over all 16 deterministic strategies.
struct LocalBoundResult {
  double max_abs_s = 0.0;
  DeterministicStrategy argmax;
  std::array<double, 16> all_values{};  // signed CHSH per enumerated strategy
};

LocalBoundResult local_deterministic_bound();

/// @brief Symmetry transform of a behavior: setting swaps and outcome flips.
struct Relabeling {
  bool swap_x = false;
  bool swap_y = false;
  std::array<bool, 2> flip_a{};  // flip Alice's outcome at setting x
  std::array<bool, 2> flip_b{};
};

BehaviorTable relabel(const BehaviorTable& table, const Relabeling& r);

/// @brief Convex mixture w * first + (1 - w) * second.
BehaviorTable mix(const BehaviorTable& first, const BehaviorTable& second,
                  double weight_first);

/// @brief Quantum behavior of a state measured at the four setting pairs.
BehaviorTable behavior_from_state(const TwoQubitState& state, PolarizerAngle a0,
                                  PolarizerAngle a1, PolarizerAngle b0,
                                  PolarizerAngle b1);

/// @brief An S estimate placed against the classical, sub-quantum and
/// quantum bounds.
struct BoundReport {
  double s_abs = 0.0;
  double sigma = 0.0;
  double z_local = 0.0;       // (|s| - 2) / sigma
  double z_grinbaum = 0.0;    // (|s| - grinbaum_bound) / sigma
  double tsirelson_gap = 0.0; // 2*sqrt(2) - |s|
  double gap_sigmas = 0.0;    // tsirelson_gap / sigma
};

BoundReport bound_report(const SResult& result);

}  // namespace bellbench
