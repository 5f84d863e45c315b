#pragma once

#include <filesystem>

#include "bellbench/io.hpp"

namespace bellbench {

/// @brief Process exit codes of the command-line tool.
enum ExitCode {
  exit_ok = 0,
  exit_failure = 1,        // unexpected internal error
  exit_config_error = 2,   // bad configuration or arguments
  exit_data_error = 3,     // malformed or unusable measurement data
  exit_no_convergence = 4, // optimizer hit its round limit
  exit_io_error = 5,       // file system failure
};

/// @brief Runs a campaign and writes records.csv plus report.json.
int cmd_simulate(const RunConfig& config);

/// @brief Analyzes an existing records CSV and writes report.json.
///
/// The result is a pure function of the CSV and the config (which supplies
/// the apparatus context for the budget terms).
int cmd_analyze(const RunConfig& config, const std::filesystem::path& csv);

/// @brief Runs the angle optimizer; writes angles.json plus the final
/// a- and b-fringe scan traces as CSV plot data.
///
/// On non-convergence the best angles so far are still written and the
/// exit code is exit_no_convergence.
int cmd_optimize(const RunConfig& config);

/// @brief Evaluates one behavior table against the bound landscape and
/// writes bounds.json.
///
/// The table comes from a JSON file, or from a builtin name: "pr" (the
/// no-signaling box at S = 4), "local" (a deterministic strategy attaining
/// the local bound) or "quantum" (the singlet at canonical angles).
/// A table whose outcome distributions do not normalize is rejected with
/// the maximum deviation in the message.
int cmd_bounds(const RunConfig& config, const std::string& builtin,
               const std::filesystem::path& table_path);

/// @brief Computes only the error budget for a records CSV.
int cmd_budget(const RunConfig& config, const std::filesystem::path& csv);

/// @brief Full argv entry point used by the binary and by tests.
int run_cli(int argc, const char* const* argv);

}  // namespace bellbench
