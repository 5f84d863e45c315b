#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "bellbench/apparatus.hpp"
#include "bellbench/bounds.hpp"
#include "bellbench/error_budget.hpp"
#include "bellbench/estimator.hpp"
#include "bellbench/event_sim.hpp"
#include "bellbench/optimizer.hpp"
#include "bellbench/records.hpp"

namespace bellbench {

inline constexpr const char* tool_name = "bellbench";
inline constexpr const char* tool_version = "1.0.0";

/// @brief Raised when a file cannot be read or written.
struct io_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// @brief Everything a run needs: apparatus, plan, budget and optimizer
/// settings plus output selection.
struct RunConfig {
  ApparatusParams apparatus;
  ExperimentPlan plan;
  BudgetParams budget;
  OptimizerOptions optimizer;
  bool optimizer_noiseless = false;
  std::string mode = "aggregate";  // "event" or "aggregate"
  std::string out_dir = ".";

  void validate() const;
};

/// @brief Built-in configuration reproducing the reference experiment's
/// operating point: calibrated pair and singles rates, dark rates, dead
/// time, +-1.2 ns window (half convention), 0.999/0.999 visibility model
/// with -0.9 degree analyzer-a misalignment, and 312 sets of 60 s at the
/// measured operating angles.
RunConfig paper_preset();

/// @brief Parses and validates a config JSON document.
///
/// Missing keys keep their defaults; unknown keys are rejected with a
/// config_error naming the key. When `preset` is nonempty the named preset
/// supplies the defaults that the document then overrides.
RunConfig parse_config(const nlohmann::json& doc,
                       const std::string& preset = "");

/// @brief Loads a config file; I/O problems raise config_error with the path.
RunConfig load_config(const std::filesystem::path& path,
                      const std::string& preset = "");

/// @brief Canonical JSON form of a config (stable key order).
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// @brief FNV-1a hash of the canonical config serialization.
std::string config_hash(const RunConfig& config);

/// @brief Writes records as CSV with header
/// set,setting,alice_deg,bob_deg,duration_s,singles_a,singles_b,coincidences.
///
/// Output uses '.' decimal separators and LF line endings regardless of
/// locale. The write is atomic: a temporary file in the target directory
/// is renamed over the destination.
void write_records_csv(const std::filesystem::path& path,
                       const MeasurementRecordSet& records);

/// @brief Reads a records CSV; malformed lines raise data_error with the
/// line number, and the result is validated for dense settings.
MeasurementRecordSet read_records_csv(const std::filesystem::path& path);

/// @brief Writes a fringe-scan trace as angle_deg,count plot data.
void write_scan_csv(const std::filesystem::path& path,
                    const std::vector<FringePoint>& trace);

/// @brief Atomically writes text via a temporary file plus rename.
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content);

/// @brief Serialization of a behavior table (bounds reporting, tests).
nlohmann::ordered_json behavior_to_json(const BehaviorTable& table);
BehaviorTable behavior_from_json(const nlohmann::json& doc);

/// @brief Assembles the analysis report for a record set.
///
/// Key order is fixed. The headline uncertainty under "bounds" is the
/// budget total; "s_estimate.sigma_counting" keeps the pure counting
/// sigma. Both window conventions' accidental rates are listed so the
/// factor-of-two choice stays visible. grinbaum_z_display truncates to
/// one decimal. Identical config and seed reproduce the document
/// byte-for-byte except for the generated_at timestamp.
nlohmann::ordered_json build_report(const RunConfig& config,
                                    const MeasurementRecordSet& records,
                                    const SResult& s, const ErrorBudget& budget);

/// @brief One-decimal truncation used for displayed significance values.
std::string truncate_one_decimal(double value);

}  // namespace bellbench
