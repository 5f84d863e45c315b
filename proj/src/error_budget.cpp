#include "bellbench/error_budget.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bellbench/correlation.hpp"
#include "bellbench/estimator.hpp"
#include "bellbench/rng.hpp"

namespace bellbench {

double counting_term(const MeasurementRecordSet& records) {
  return estimate_s(records).sigma;
}

double exposure_term(const MeasurementRecordSet& records, double f) {
  records.validate();

  // Pooled agree/disagree totals per correlation give the sensitivities
  // dE/dN of each interval's count; the independent relative errors f then
  // add in quadrature over every (set, setting) interval.
  std::array<double, 4> agree{}, disagree{};
  for (const MeasurementRecord& rec : records.records) {
    const int pair = pair_of_setting(rec.setting);
    const int outcome = outcome_of_setting(rec.setting);
    const double n = static_cast<double>(rec.coincidences);
    if (outcome == 0 || outcome == 3)
      agree[pair] += n;
    else
      disagree[pair] += n;
  }

  double var = 0.0;
  for (const MeasurementRecord& rec : records.records) {
    const int pair = pair_of_setting(rec.setting);
    const double total = agree[pair] + disagree[pair];
    if (total <= 0.0) continue;
    const int outcome = outcome_of_setting(rec.setting);
    const double sensitivity = (outcome == 0 || outcome == 3)
                                   ? 2.0 * disagree[pair] / (total * total)
                                   : 2.0 * agree[pair] / (total * total);
    const double perturbation =
        f * static_cast<double>(rec.coincidences) * sensitivity;
    var += perturbation * perturbation;
  }
  return std::sqrt(var);
}

namespace {

double mean_interval(const MeasurementRecordSet& records) {
  double sum = 0.0;
  for (const MeasurementRecord& rec : records.records) sum += rec.duration_s;
  return sum / static_cast<double>(records.records.size());
}

}  // namespace

double dead_time_term(const MeasurementRecordSet& records,
                      const ApparatusParams& params) {
  records.validate();
  double singles_a = 0.0, singles_b = 0.0;
  for (const MeasurementRecord& rec : records.records) {
    singles_a += static_cast<double>(rec.singles_a);
    singles_b += static_cast<double>(rec.singles_b);
  }
  const double n = static_cast<double>(records.records.size());
  const double interval = mean_interval(records);
  const double f_a = std::sqrt(singles_a / n) *
                     params.detector_a.dead_time_s / interval;
  const double f_b = std::sqrt(singles_b / n) *
                     params.detector_b.dead_time_s / interval;
  return exposure_term(records, std::hypot(f_a, f_b));
}

double timing_term(const MeasurementRecordSet& records, double jitter_s) {
  return exposure_term(records, jitter_s / mean_interval(records));
}

double clock_term(const MeasurementRecordSet& records, double drift_fraction) {
  return exposure_term(records, drift_fraction);
}

double angle_term(const CorrelationModel& model, PolarizerAngle a0,
                  PolarizerAngle a1, PolarizerAngle b0, PolarizerAngle b1,
                  double resolution_deg, int n_samples, std::uint64_t seed) {
  if (n_samples < 2)
    throw std::invalid_argument("angle_term: need at least 2 samples");
  if (resolution_deg <= 0.0) return 0.0;
  std::mt19937_64 rng = make_engine(seed);
  std::uniform_real_distribution<double> delta(-resolution_deg, resolution_deg);

  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double d0 = delta(rng), d1 = delta(rng);
    const double d2 = delta(rng), d3 = delta(rng);
    const double s = model_chsh(model, a0.degrees + d0, a1.degrees + d1,
                                b0.degrees + d2, b1.degrees + d3);
    sum += s;
    sum_sq += s * s;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return std::sqrt(var);
}

ErrorBudget full_budget(const MeasurementRecordSet& records,
                        const ApparatusParams& params,
                        const CorrelationModel& model,
                        const OperatingAngles& angles,
                        const BudgetParams& budget) {
  records.validate();

  ErrorBudget out;
  out.counting = counting_term(records);
  out.dead_time = dead_time_term(records, params);
  out.timing_jitter = timing_term(records, params.timing.jitter_s);
  out.clock_drift = clock_term(records, params.timing.clock_drift);
  out.angle = angle_term(model, angles.a0_deg, angles.a1_deg, angles.b0_deg,
                         angles.b1_deg, params.actuator.resolution_deg,
                         budget.angle_mc_samples, budget.angle_mc_seed);

  out.total = std::sqrt(out.counting * out.counting +
                        out.dead_time * out.dead_time +
                        out.timing_jitter * out.timing_jitter +
                        out.angle * out.angle);

  const std::array<std::pair<const char*, double>, 4> included = {{
      {"counting", out.counting},
      {"dead_time", out.dead_time},
      {"timing_jitter", out.timing_jitter},
      {"angle", out.angle},
  }};
  out.dominant = std::max_element(included.begin(), included.end(),
                                  [](const auto& l, const auto& r) {
                                    return l.second < r.second;
                                  })
                     ->first;
  return out;
}

}  // namespace bellbench
