#include "bellbench/estimator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>

#include "bellbench/types.hpp"

namespace bellbench {

CorrelationEstimate estimate_correlation(const CoincidenceCounts& counts) {
  const std::int64_t n = counts.total();
  if (n <= 0)
    throw data_error("estimate_correlation: zero total count, E undefined");
  const double agree = static_cast<double>(counts.n_pp + counts.n_mm);
  const double disagree = static_cast<double>(counts.n_pm + counts.n_mp);
  const double total = static_cast<double>(n);

  CorrelationEstimate est;
  est.n_total = n;
  est.e = (agree - disagree) / total;
  est.sigma = std::sqrt(4.0 * agree * disagree / (total * total * total));
  return est;
}

namespace {

SResult finish_s(SResult result) {
  result.tsirelson_gap = tsirelson_bound - std::abs(result.s);
  result.grinbaum_z = result.sigma > 0.0
                          ? (std::abs(result.s) - grinbaum_bound) / result.sigma
                          : 0.0;
  return result;
}

}  // namespace

SResult estimate_s(const MeasurementRecordSet& records) {
  records.validate();

  std::array<CoincidenceCounts, 4> pooled{};
  std::array<double, 4> duration_sum{};
  for (const MeasurementRecord& rec : records.records) {
    CoincidenceCounts& c = pooled[pair_of_setting(rec.setting)];
    switch (outcome_of_setting(rec.setting)) {
      case 0:
        c.n_pp += rec.coincidences;
        // the (+,+) row carries the base angles of this correlation
        c.setting = {rec.alice_deg, rec.bob_deg};
        break;
      case 1: c.n_pm += rec.coincidences; break;
      case 2: c.n_mp += rec.coincidences; break;
      case 3: c.n_mm += rec.coincidences; break;
    }
    duration_sum[pair_of_setting(rec.setting)] += rec.duration_s;
  }

  SResult result;
  for (int pair = 0; pair < 4; ++pair) {
    pooled[pair].duration_s = duration_sum[pair];
    if (pooled[pair].total() <= 0)
      throw data_error("estimate_s: correlation " + std::to_string(pair) +
                       " (settings " + std::to_string(4 * pair) + ".." +
                       std::to_string(4 * pair + 3) +
                       ") has zero coincidences");
    result.correlations[pair] = estimate_correlation(pooled[pair]);
  }

  result.s = result.correlations[0].e - result.correlations[1].e +
             result.correlations[2].e + result.correlations[3].e;
  double var = 0.0;
  for (const CorrelationEstimate& est : result.correlations)
    var += est.sigma * est.sigma;
  result.sigma = std::sqrt(var);
  return finish_s(result);
}

SResult s_result_from_value(double s, double sigma) {
  SResult result;
  result.s = s;
  result.sigma = sigma;
  return finish_s(result);
}

VisibilityEstimate estimate_visibility(const std::vector<double>& angles_deg,
                                       const std::vector<std::int64_t>& counts) {
  if (angles_deg.size() != counts.size())
    throw data_error("estimate_visibility: angle/count size mismatch");
  const std::size_t n = counts.size();
  if (n < 4) throw data_error("estimate_visibility: need at least 4 points");

  bool all_equal = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] < 0)
      throw data_error("estimate_visibility: negative count");
    if (counts[i] != counts[0]) all_equal = false;
  }
  if (all_equal)
    throw data_error("estimate_visibility: degenerate scan, all counts equal");

  // Weighted linear least squares for counts = B + p cos2t + q sin2t with
  // Poisson weights 1/max(count, 1).
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * angles_deg[i] * (M_PI / 180.0);
    const Eigen::Vector3d row(1.0, std::cos(t), std::sin(t));
    const double w = 1.0 / std::max<double>(static_cast<double>(counts[i]), 1.0);
    normal += w * row * row.transpose();
    rhs += w * row * static_cast<double>(counts[i]);
  }

  Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
  if (!lu.isInvertible())
    throw data_error("estimate_visibility: degenerate scan, singular fit");
  const Eigen::Vector3d beta = lu.solve(rhs);
  const Eigen::Matrix3d cov = lu.inverse();

  const double B = beta(0), p = beta(1), q = beta(2);
  const double amp = std::hypot(p, q);
  if (B <= 0.0 || amp <= 0.0)
    throw data_error("estimate_visibility: fit has no positive fringe");

  VisibilityEstimate est;
  est.v = amp / B;
  // Delta method on v(B, p, q).
  Eigen::Vector3d grad(-amp / (B * B), p / (amp * B), q / (amp * B));
  est.sigma = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
  return est;
}

}  // namespace bellbench
