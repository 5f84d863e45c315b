#include "bellbench/bounds.hpp"

#include <cmath>

namespace bellbench {

double BehaviorTable::correlation(int x, int y) const {
  return p[x][y][0][0] - p[x][y][0][1] - p[x][y][1][0] + p[x][y][1][1];
}

bool BehaviorTable::is_normalized(double tol) const {
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (p[x][y][a][b] < -tol) return false;
          sum += p[x][y][a][b];
        }
      }
      if (std::abs(sum - 1.0) > tol) return false;
    }
  }
  return true;
}

double chsh_of_behavior(const BehaviorTable& table) {
  return table.correlation(0, 0) - table.correlation(0, 1) +
         table.correlation(1, 0) + table.correlation(1, 1);
}

NoSignalingCheck check_no_signaling(const BehaviorTable& table, double tol) {
  double worst = 0.0;
  // Alice's marginal must not depend on y, Bob's must not depend on x.
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 2; ++a) {
      const double m0 = table.at(x, 0, a, 0) + table.at(x, 0, a, 1);
      const double m1 = table.at(x, 1, a, 0) + table.at(x, 1, a, 1);
      worst = std::max(worst, std::abs(m0 - m1));
    }
  }
  for (int y = 0; y < 2; ++y) {
    for (int b = 0; b < 2; ++b) {
      const double m0 = table.at(0, y, 0, b) + table.at(0, y, 1, b);
      const double m1 = table.at(1, y, 0, b) + table.at(1, y, 1, b);
      worst = std::max(worst, std::abs(m0 - m1));
    }
  }
  return {worst <= tol, worst};
}

BehaviorTable pr_box() {
  BehaviorTable t;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const bool anticorrelated = (x == 0 && y == 1);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const bool same = (a == b);
          t.at(x, y, a, b) = (same != anticorrelated) ? 0.5 : 0.0;
        }
      }
    }
  }
  return t;
}

BehaviorTable deterministic_behavior(const DeterministicStrategy& strategy) {
  BehaviorTable t;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      t.at(x, y, strategy.a[x], strategy.b[y]) = 1.0;
  return t;
}

LocalBoundResult local_deterministic_bound() {
  LocalBoundResult result;
  int index = 0;
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int b0 = 0; b0 < 2; ++b0) {
        for (int b1 = 0; b1 < 2; ++b1) {
          DeterministicStrategy strategy{{a0, a1}, {b0, b1}};
          const double s = chsh_of_behavior(deterministic_behavior(strategy));
          result.all_values[index++] = s;
          if (std::abs(s) > result.max_abs_s) {
            result.max_abs_s = std::abs(s);
            result.argmax = strategy;
          }
        }
      }
    }
  }
  return result;
}

BehaviorTable relabel(const BehaviorTable& table, const Relabeling& r) {
  BehaviorTable out;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const int sx = r.swap_x ? 1 - x : x;
      const int sy = r.swap_y ? 1 - y : y;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int fa = r.flip_a[x] ? 1 - a : a;
          const int fb = r.flip_b[y] ? 1 - b : b;
          out.at(x, y, fa, fb) = table.at(sx, sy, a, b);
        }
      }
    }
  }
  return out;
}

BehaviorTable mix(const BehaviorTable& first, const BehaviorTable& second,
                  double weight_first) {
  BehaviorTable out;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out.at(x, y, a, b) = weight_first * first.at(x, y, a, b) +
                               (1.0 - weight_first) * second.at(x, y, a, b);
  return out;
}

BehaviorTable behavior_from_state(const TwoQubitState& state, PolarizerAngle a0,
                                  PolarizerAngle a1, PolarizerAngle b0,
                                  PolarizerAngle b1) {
  const PolarizerAngle alice[2] = {a0, a1};
  const PolarizerAngle bob[2] = {b0, b1};
  BehaviorTable t;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const OutcomeProbabilities p =
          outcome_probabilities(state, {alice[x], bob[y]});
      t.at(x, y, 0, 0) = p.pp;
      t.at(x, y, 0, 1) = p.pm;
      t.at(x, y, 1, 0) = p.mp;
      t.at(x, y, 1, 1) = p.mm;
    }
  }
  return t;
}

BoundReport bound_report(const SResult& result) {
  BoundReport report;
  report.s_abs = std::abs(result.s);
  report.sigma = result.sigma;
  report.tsirelson_gap = tsirelson_bound - report.s_abs;
  if (result.sigma > 0.0) {
    report.z_local = (report.s_abs - local_bound) / result.sigma;
    report.z_grinbaum = (report.s_abs - grinbaum_bound) / result.sigma;
    report.gap_sigmas = report.tsirelson_gap / result.sigma;
  }
  return report;
}

}  // namespace bellbench
