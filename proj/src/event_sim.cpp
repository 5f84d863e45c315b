#include "bellbench/event_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "bellbench/correlation.hpp"
#include "bellbench/rng.hpp"

namespace bellbench {

bool TimestampStream::is_sorted() const {
  return std::is_sorted(times_s.begin(), times_s.end());
}

TimestampStream generate_stream(double rate, double duration_s,
                                std::mt19937_64& rng) {
  TimestampStream stream;
  if (rate <= 0.0 || duration_s <= 0.0) return stream;
  stream.times_s.reserve(static_cast<std::size_t>(rate * duration_s * 1.1) + 16);
  std::exponential_distribution<double> gap(rate);
  double t = gap(rng);
  while (t < duration_s) {
    stream.times_s.push_back(t);
    t += gap(rng);
  }
  return stream;
}

TimestampStream apply_dead_time(const TimestampStream& stream,
                                double dead_time_s) {
  if (dead_time_s <= 0.0) return stream;
  TimestampStream out;
  out.detector = stream.detector;
  out.times_s.reserve(stream.times_s.size());
  double last_kept = -dead_time_s;
  for (double t : stream.times_s) {
    if (t - last_kept >= dead_time_s) {
      out.times_s.push_back(t);
      last_kept = t;
    }
  }
  return out;
}

std::int64_t match_coincidences(const TimestampStream& a,
                                const TimestampStream& b,
                                double window_half_width_s) {
  if (!a.is_sorted() || !b.is_sorted())
    throw std::invalid_argument("match_coincidences: streams must be sorted");
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.times_s.size() && j < b.times_s.size()) {
    const double dt = b.times_s[j] - a.times_s[i];
    if (std::abs(dt) <= window_half_width_s) {
      ++count;
      ++i;
      ++j;
    } else if (dt > 0.0) {
      ++i;  // a[i] is too early for any remaining b
    } else {
      ++j;
    }
  }
  return count;
}

void ExperimentPlan::validate() const {
  if (sets < 1) throw config_error("plan: sets must be >= 1");
  if (!(interval_s > 0.0)) throw config_error("plan: interval must be > 0");
}

SettingPair setting_angles(const ExperimentPlan& plan, double resolution_deg,
                           int setting) {
  if (setting < 0 || setting > 15)
    throw std::invalid_argument("setting_angles: index out of range 0..15");
  const int pair = pair_of_setting(setting);
  const int outcome = outcome_of_setting(setting);
  const double res = resolution_deg;
  double a = quantize_deg((pair & 2) ? plan.a1_deg : plan.a0_deg, res);
  double b = quantize_deg((pair & 1) ? plan.b1_deg : plan.b0_deg, res);
  if (outcome >= 2) a += 90.0;      // Alice's "-" orientation
  if (outcome % 2 == 1) b += 90.0;  // Bob's
  return {a, b};
}

SettingCounts simulate_setting(const ApparatusParams& params,
                               SettingPair setting, double duration_s,
                               std::uint64_t substream_seed) {
  const SourceParams& src = params.source;
  const DetectorParams& da = params.detector_a;
  const DetectorParams& db = params.detector_b;

  std::mt19937_64 rng_pairs = make_engine(substream_seed ^ 0x70617273ULL);
  std::mt19937_64 rng_arm_a = make_engine(substream_seed ^ 0x61726d41ULL);
  std::mt19937_64 rng_arm_b = make_engine(substream_seed ^ 0x61726d42ULL);

  // Joint transmission probabilities behind the analyzers; marginals are
  // exactly 1/2 each.
  const double e = model_correlation(params.model, setting);
  const double p_both = 0.25 * (1.0 + e);
  const double p_a_only = 0.25 * (1.0 - e);
  const double p_b_only = 0.25 * (1.0 - e);

  TimestampStream arm_a, arm_b;
  arm_a.detector = "A";
  arm_b.detector = "B";

  {
    TimestampStream pairs = generate_stream(src.pair_rate, duration_s, rng_pairs);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    arm_a.times_s.reserve(pairs.times_s.size() / 2 + 16);
    arm_b.times_s.reserve(pairs.times_s.size() / 2 + 16);
    for (double t : pairs.times_s) {
      const double u = uniform(rng_pairs);
      bool to_a = false, to_b = false;
      if (u < p_both) {
        to_a = to_b = true;
      } else if (u < p_both + p_a_only) {
        to_a = true;
      } else if (u < p_both + p_a_only + p_b_only) {
        to_b = true;
      }
      if (to_a && da.efficiency < 1.0 && uniform(rng_pairs) >= da.efficiency)
        to_a = false;
      if (to_b && db.efficiency < 1.0 && uniform(rng_pairs) >= db.efficiency)
        to_b = false;
      if (to_a) arm_a.times_s.push_back(t);
      if (to_b) arm_b.times_s.push_back(t);
    }
  }

  // Unpaired photons (half pass the analyzer) and dark counts; efficiency
  // thins the photon rate directly.
  auto add_background = [&](TimestampStream& arm, double arm_rate,
                            const DetectorParams& det, std::mt19937_64& rng) {
    const double unpaired = 0.5 * (arm_rate - src.pair_rate) * det.efficiency;
    TimestampStream photons = generate_stream(unpaired, duration_s, rng);
    TimestampStream darks = generate_stream(det.dark_rate, duration_s, rng);
    std::vector<double> merged(arm.times_s.size() + photons.times_s.size() +
                               darks.times_s.size());
    std::vector<double> tmp(arm.times_s.size() + photons.times_s.size());
    std::merge(arm.times_s.begin(), arm.times_s.end(),
               photons.times_s.begin(), photons.times_s.end(), tmp.begin());
    std::merge(tmp.begin(), tmp.end(), darks.times_s.begin(),
               darks.times_s.end(), merged.begin());
    arm.times_s = std::move(merged);
  };
  add_background(arm_a, src.singles_rate_a, da, rng_arm_a);
  add_background(arm_b, src.singles_rate_b, db, rng_arm_b);

  arm_a = apply_dead_time(arm_a, da.dead_time_s);
  arm_b = apply_dead_time(arm_b, db.dead_time_s);

  SettingCounts counts;
  counts.singles_a = static_cast<std::int64_t>(arm_a.times_s.size());
  counts.singles_b = static_cast<std::int64_t>(arm_b.times_s.size());
  counts.coincidences =
      match_coincidences(arm_a, arm_b, params.window.match_half_width_s());
  return counts;
}

SettingCounts sample_setting_aggregate(const ApparatusParams& params,
                                       SettingPair setting, double duration_s,
                                       std::uint64_t substream_seed) {
  const SettingRates rates = expected_setting_rates(params, setting);
  std::mt19937_64 rng = make_engine(substream_seed ^ 0x61676772ULL);
  auto draw = [&](double mean) -> std::int64_t {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(rng);
  };
  SettingCounts counts;
  counts.singles_a = draw(rates.singles_a * duration_s);
  counts.singles_b = draw(rates.singles_b * duration_s);
  counts.coincidences =
      draw((rates.true_coinc + rates.accidental_coinc) * duration_s);
  return counts;
}

namespace {

template <typename Task>
MeasurementRecordSet run_campaign(const ApparatusParams& params,
                                  const ExperimentPlan& plan, int n_threads,
                                  Task task) {
  params.validate();
  plan.validate();

  const int n_items = plan.sets * 16;
  MeasurementRecordSet out;
  out.records.resize(n_items);

  const int workers = std::min(resolve_thread_count(n_threads), n_items);
  auto worker = [&](int worker_id) {
    for (int item = worker_id; item < n_items; item += workers) {
      const int set = item / 16;
      const int setting = item % 16;
      const SettingPair angles =
          setting_angles(plan, params.actuator.resolution_deg, setting);
      const SettingCounts counts =
          task(angles, substream_seed(plan.seed, set, setting));
      MeasurementRecord& rec = out.records[item];
      rec.set = set;
      rec.setting = setting;
      rec.alice_deg = angles.alice.degrees;
      rec.bob_deg = angles.bob.degrees;
      rec.duration_s = plan.interval_s;
      rec.singles_a = counts.singles_a;
      rec.singles_b = counts.singles_b;
      rec.coincidences = counts.coincidences;
    }
  };

  if (workers <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

}  // namespace

MeasurementRecordSet run_experiment(const ApparatusParams& params,
                                    const ExperimentPlan& plan, int n_threads) {
  return run_campaign(params, plan, n_threads,
                      [&](SettingPair angles, std::uint64_t seed) {
                        return simulate_setting(params, angles,
                                                plan.interval_s, seed);
                      });
}

MeasurementRecordSet sample_counts_aggregate(const ApparatusParams& params,
                                             const ExperimentPlan& plan,
                                             int n_threads) {
  return run_campaign(params, plan, n_threads,
                      [&](SettingPair angles, std::uint64_t seed) {
                        return sample_setting_aggregate(params, angles,
                                                        plan.interval_s, seed);
                      });
}

int resolve_thread_count(int requested) {
  int n = requested > 0
              ? requested
              : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap_str = std::getenv("BELLBENCH_THREADS")) {
    const int cap = std::atoi(cap_str);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

}  // namespace bellbench
