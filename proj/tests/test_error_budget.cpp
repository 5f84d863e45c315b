#include <cmath>
#include <vector>

#include <doctest.h>

#include "bellbench/error_budget.hpp"
#include "bellbench/event_sim.hpp"
#include "bellbench/io.hpp"
#include "oracles.hpp"

using namespace bellbench;

namespace {

/// Records whose counts are the rounded closed-form expectations, so the
/// budget terms can be pinned without sampling noise.
MeasurementRecordSet expected_records(const ApparatusParams& params,
                                      const ExperimentPlan& plan) {
  MeasurementRecordSet out;
  for (int set = 0; set < plan.sets; ++set) {
    for (int setting = 0; setting < 16; ++setting) {
      const SettingPair angles = setting_angles(
          plan, params.actuator.resolution_deg, setting);
      const SettingRates rates = expected_setting_rates(params, angles);
      MeasurementRecord rec;
      rec.set = set;
      rec.setting = setting;
      rec.alice_deg = angles.alice.degrees;
      rec.bob_deg = angles.bob.degrees;
      rec.duration_s = plan.interval_s;
      rec.singles_a = std::llround(rates.singles_a * plan.interval_s);
      rec.singles_b = std::llround(rates.singles_b * plan.interval_s);
      rec.coincidences = std::llround(
          (rates.true_coinc + rates.accidental_coinc) * plan.interval_s);
      out.records.push_back(rec);
    }
  }
  return out;
}

MeasurementRecordSet preset_expected_records() {
  const RunConfig preset = paper_preset();
  return expected_records(preset.apparatus, preset.plan);
}

}  // namespace

TEST_SUITE("error_budget") {

TEST_CASE("counting term at the reference operating point") {
  const MeasurementRecordSet records = preset_expected_records();
  const double counting = counting_term(records);
  CHECK_REL(counting, 4.9e-4, 0.10);   // headline statistical error
  CHECK_REL(counting, 4.910e-4, 0.02); // pinned closed-form value
}

TEST_CASE("counting term halves when the exposure quadruples") {
  const RunConfig preset = paper_preset();
  ExperimentPlan plan = preset.plan;
  const double base = counting_term(expected_records(preset.apparatus, plan));
  plan.sets *= 4;
  const double quad = counting_term(expected_records(preset.apparatus, plan));
  CHECK_REL(quad, base / 2.0, 1e-3);
}

TEST_CASE("exposure engine: zero error, linearity, closed form") {
  const MeasurementRecordSet records = preset_expected_records();
  CHECK(exposure_term(records, 0.0) == 0.0);
  CHECK_REL(exposure_term(records, 2e-4), 2.0 * exposure_term(records, 1e-4),
            1e-12);
  CHECK_REL(exposure_term(records, 1e-2), 100.0 * exposure_term(records, 1e-4),
            1e-12);

  // For identical counts in every set the engine reduces to
  // sigma = (f / sqrt(sets)) * sqrt(sum over pairs of ((1 - E^2)/2)^2).
  MeasurementRecordSet one_set = records;
  one_set.records.resize(16);
  double sum_sq = 0.0;
  for (int pair = 0; pair < 4; ++pair) {
    double counts[4];
    for (int outcome = 0; outcome < 4; ++outcome)
      counts[outcome] =
          static_cast<double>(one_set.records[4 * pair + outcome].coincidences);
    const double total = counts[0] + counts[1] + counts[2] + counts[3];
    const double e = (counts[0] - counts[1] - counts[2] + counts[3]) / total;
    sum_sq += (1.0 - e * e) * (1.0 - e * e) / 4.0;
  }
  const double f = 0.01;
  CHECK_REL(exposure_term(one_set, f), f * std::sqrt(sum_sq), 1e-9);
  CHECK_REL(exposure_term(records, f),
            f * std::sqrt(sum_sq) / std::sqrt(312.0), 1e-9);
}

TEST_CASE("timing jitter and clock drift terms at the reference point") {
  const MeasurementRecordSet records = preset_expected_records();
  const double jitter = timing_term(records, 100e-9);
  const double drift = clock_term(records, 1e-7);
  CHECK_REL(jitter, 4.718e-11, 0.05);
  CHECK_REL(drift, 2.831e-9, 0.05);
  // Both run through the same engine; f differs by exactly
  // drift / (jitter / interval) = 1e-7 / (100e-9 / 60) = 60.
  CHECK_REL(drift / jitter, 60.0, 1e-12);
  CHECK(timing_term(records, 0.0) == 0.0);
  CHECK(clock_term(records, 0.0) == 0.0);
}

TEST_CASE("dead time term at the reference point") {
  const RunConfig preset = paper_preset();
  const MeasurementRecordSet records = preset_expected_records();
  const double ds = dead_time_term(records, preset.apparatus);
  CHECK_REL(ds, 3.85e-7, 0.05);      // from the detected per-channel singles
  CHECK(ds > 5.4e-7 / 2.0);          // headline value, within a factor of 2
  CHECK(ds < 5.4e-7 * 2.0);

  ApparatusParams doubled = preset.apparatus;
  doubled.detector_a.dead_time_s *= 2.0;
  doubled.detector_b.dead_time_s *= 2.0;
  CHECK_REL(dead_time_term(records, doubled), 2.0 * ds, 1e-12);

  ApparatusParams no_dead = preset.apparatus;
  no_dead.detector_a.dead_time_s = 0.0;
  no_dead.detector_b.dead_time_s = 0.0;
  CHECK(dead_time_term(records, no_dead) == 0.0);
}

TEST_CASE("angle term: stationary at the ideal optimum, larger off it") {
  const CorrelationModel ideal;
  const double at_optimum =
      angle_term(ideal, 0.0, 45.0, 22.5, 67.5, 0.1, 20000, 1);
  CHECK(at_optimum > 0.0);
  CHECK(at_optimum < 2e-5);

  const RunConfig preset = paper_preset();
  const double at_reference = angle_term(preset.apparatus.model, 1.9, 46.8,
                                         22.9, 67.7, 0.1, 20000, 1);
  CHECK_REL(at_reference, 1.30e-4, 0.05);  // headline quotes 1.2e-4
  CHECK(at_reference > 1.2e-4 / 3.0);
  CHECK(at_reference < 1.2e-4 * 3.0);

  CHECK(angle_term(ideal, 0.0, 45.0, 22.5, 67.5, 0.0, 20000, 1) == 0.0);

  // Same seed, same draw.
  CHECK(angle_term(ideal, 0.0, 45.0, 22.5, 67.5, 0.1, 5000, 7) ==
        angle_term(ideal, 0.0, 45.0, 22.5, 67.5, 0.1, 5000, 7));
}

TEST_CASE("angle term grows quadratically around the optimum") {
  const CorrelationModel ideal;
  std::vector<double> log_res, log_term;
  for (double res : {0.05, 0.1, 0.2, 0.4}) {
    log_res.push_back(std::log(res));
    log_term.push_back(
        std::log(angle_term(ideal, 0.0, 45.0, 22.5, 67.5, res, 40000, 2)));
  }
  CHECK_NEAR(testref::fit_slope(log_res, log_term), 2.0, 0.1);
}

TEST_CASE("full budget at the reference operating point") {
  const RunConfig preset = paper_preset();
  MeasurementRecordSet records =
      sample_counts_aggregate(preset.apparatus, preset.plan);
  const ErrorBudget budget =
      full_budget(records, preset.apparatus, preset.apparatus.model,
                  operating_angles(records), preset.budget);

  CHECK_REL(budget.counting, 4.91e-4, 0.03);
  CHECK_REL(budget.angle, 1.30e-4, 0.05);
  CHECK_REL(budget.total, 5.08e-4, 0.03);
  CHECK_REL(budget.total, 5.1e-4, 0.15);  // headline total
  CHECK(budget.dominant == "counting");

  // clock_drift is reported but stays outside the quadrature.
  CHECK(budget.clock_drift > 0.0);
  const double included =
      std::sqrt(budget.counting * budget.counting +
                budget.dead_time * budget.dead_time +
                budget.timing_jitter * budget.timing_jitter +
                budget.angle * budget.angle);
  CHECK_REL(budget.total, included, 1e-12);
}

TEST_CASE("with a perfect apparatus the budget is pure counting") {
  RunConfig preset = paper_preset();
  MeasurementRecordSet records = preset_expected_records();
  preset.apparatus.detector_a.dead_time_s = 0.0;
  preset.apparatus.detector_b.dead_time_s = 0.0;
  preset.apparatus.timing.jitter_s = 0.0;
  preset.apparatus.timing.clock_drift = 0.0;
  preset.apparatus.actuator.resolution_deg = 0.0;
  const ErrorBudget budget =
      full_budget(records, preset.apparatus, preset.apparatus.model,
                  operating_angles(records), preset.budget);
  CHECK(budget.dead_time == 0.0);
  CHECK(budget.timing_jitter == 0.0);
  CHECK(budget.angle == 0.0);
  CHECK_REL(budget.total, budget.counting, 1e-15);
}

TEST_CASE("the total is bounded by its largest term and the linear sum") {
  const RunConfig preset = paper_preset();
  const MeasurementRecordSet records = preset_expected_records();
  for (double scale : {0.5, 1.0, 2.0, 5.0}) {
    ApparatusParams params = preset.apparatus;
    params.timing.jitter_s *= scale;
    params.detector_a.dead_time_s *= scale;
    const ErrorBudget budget = full_budget(
        records, params, params.model, operating_angles(records), {});
    const double largest =
        std::max({budget.counting, budget.dead_time, budget.timing_jitter,
                  budget.angle});
    const double sum = budget.counting + budget.dead_time +
                       budget.timing_jitter + budget.angle;
    CHECK(budget.total >= largest - 1e-15);
    CHECK(budget.total <= sum + 1e-15);
  }
}

}  // TEST_SUITE
