#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bellbench/apparatus.hpp"
#include "bellbench/records.hpp"
#include "bellbench/types.hpp"

namespace bellbench {

/// @brief Ordered detection timestamps of one detector channel.
struct TimestampStream {
  std::vector<double> times_s;
  std::string detector;

  bool is_sorted() const;
};

/// @brief Homogeneous Poisson arrivals over [0, duration), sorted.
TimestampStream generate_stream(double rate, double duration_s,
                                std::mt19937_64& rng);

/// @brief Non-paralyzable dead time: drops any event closer than dead_time
/// to the previously kept one; dropped events do not extend the dead window.
TimestampStream apply_dead_time(const TimestampStream& stream,
                                double dead_time_s);

/// @brief Greedy earliest-match pairing of two sorted timestamp streams.
///
/// Walks both streams once; the earliest unmatched event on each side is
/// paired when |t_a - t_b| <= window_half_width, and every event enters at
/// most one coincidence. Throws std::invalid_argument on unsorted input.
std::int64_t match_coincidences(const TimestampStream& a,
                                const TimestampStream& b,
                                double window_half_width_s);

/// @brief Campaign layout: base angles, repetitions and timing.
struct ExperimentPlan {
  double a0_deg = 0.0;
  double a1_deg = 45.0;
  double b0_deg = 22.5;
  double b1_deg = 67.5;
  int sets = 1;
  double interval_s = 60.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// @brief Analyzer orientations of one setting index under a plan.
///
/// Base angles are quantized to the actuator resolution; "-" orientations
/// add 90 degrees. Index layout is documented on MeasurementRecord.
SettingPair setting_angles(const ExperimentPlan& plan, double resolution_deg,
                           int setting);

/// @brief Counts from one simulated measurement interval.
struct SettingCounts {
  std::int64_t singles_a = 0;
  std::int64_t singles_b = 0;
  std::int64_t coincidences = 0;
};

/// @brief Event-level simulation of one interval at one setting.
///
/// Generates per-arm streams of pair photons (joint, simultaneous
/// arrivals with outcomes drawn from the correlation model), unpaired
/// photons and dark counts; applies efficiency thinning and dead time;
/// then counts coincidences with the matcher at the window's effective
/// width. All randomness comes from the given substream seed.
SettingCounts simulate_setting(const ApparatusParams& params,
                               SettingPair setting, double duration_s,
                               std::uint64_t substream_seed);

/// @brief Poisson draw of the closed-form expected counts for one interval.
SettingCounts sample_setting_aggregate(const ApparatusParams& params,
                                       SettingPair setting, double duration_s,
                                       std::uint64_t substream_seed);

/// @brief Full event-level campaign: sets x 16 settings.
///
/// Work items are distributed over threads (0 = automatic, capped by the
/// BELLBENCH_THREADS environment variable); identical seeds give identical
/// records for any thread count.
MeasurementRecordSet run_experiment(const ApparatusParams& params,
                                    const ExperimentPlan& plan,
                                    int n_threads = 0);

/// @brief Full campaign drawing counts directly from the closed-form rates.
MeasurementRecordSet sample_counts_aggregate(const ApparatusParams& params,
                                             const ExperimentPlan& plan,
                                             int n_threads = 0);

/// @brief Worker-thread count after applying the BELLBENCH_THREADS cap.
int resolve_thread_count(int requested);

}  // namespace bellbench
