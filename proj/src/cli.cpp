#include "bellbench/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "bellbench/correlation.hpp"

namespace bellbench {

namespace {

template <typename Fn>
int guarded(Fn fn) {
  try {
    return fn();
  } catch (const config_error& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return exit_config_error;
  } catch (const data_error& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return exit_data_error;
  } catch (const io_failure& err) {
    std::cerr << "io error: " << err.what() << "\n";
    return exit_io_error;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_failure;
  }
}

std::filesystem::path prepare_out_dir(const RunConfig& config) {
  std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw io_failure("cannot create output directory \"" + dir.string() +
                     "\": " + ec.message());
  return dir;
}

void write_json(const std::filesystem::path& path,
                const nlohmann::ordered_json& doc) {
  atomic_write_text(path, doc.dump(2) + "\n");
}

void print_s_summary(const SResult& s, const ErrorBudget& budget) {
  std::printf("S = %+.5f  |S| = %.5f +- %.5f (counting %.5f)\n", s.s,
              std::abs(s.s), budget.total, s.sigma);
  const BoundReport bounds = bound_report(s_result_from_value(s.s, budget.total));
  std::printf("local bound: %+.1f sigma;  sub-quantum bound: %s sigma;  "
              "quantum gap: %.5f\n",
              bounds.z_local, truncate_one_decimal(bounds.z_grinbaum).c_str(),
              bounds.tsirelson_gap);
}

}  // namespace

int cmd_simulate(const RunConfig& config) {
  return guarded([&] {
    config.validate();
    const MeasurementRecordSet records =
        config.mode == "event"
            ? run_experiment(config.apparatus, config.plan)
            : sample_counts_aggregate(config.apparatus, config.plan);
    const SResult s = estimate_s(records);
    const ErrorBudget budget =
        full_budget(records, config.apparatus, config.apparatus.model,
                    operating_angles(records), config.budget);

    const std::filesystem::path dir = prepare_out_dir(config);
    write_records_csv(dir / "records.csv", records);
    write_json(dir / "report.json", build_report(config, records, s, budget));
    print_s_summary(s, budget);
    return static_cast<int>(exit_ok);
  });
}

int cmd_analyze(const RunConfig& config, const std::filesystem::path& csv) {
  return guarded([&] {
    config.validate();
    const MeasurementRecordSet records = read_records_csv(csv);
    const SResult s = estimate_s(records);
    const ErrorBudget budget =
        full_budget(records, config.apparatus, config.apparatus.model,
                    operating_angles(records), config.budget);

    const std::filesystem::path dir = prepare_out_dir(config);
    write_json(dir / "report.json", build_report(config, records, s, budget));
    print_s_summary(s, budget);
    return static_cast<int>(exit_ok);
  });
}

int cmd_optimize(const RunConfig& config) {
  return guarded([&] {
    config.validate();
    const ExperimentOracle oracle =
        config.optimizer_noiseless
            ? model_oracle(config.apparatus.model,
                           config.apparatus.source.pair_rate)
            : noisy_oracle(config.apparatus, config.plan.seed);
    const OptimizedAngles found = optimize(oracle, config.optimizer);

    const CorrelationModel& model = config.apparatus.model;
    const double s_found = model_chsh(model, found.a0_deg, found.a1_deg,
                                      found.b0_deg, found.b1_deg);
    const double s_canonical = model_chsh(model, 0.0, 45.0, 22.5, 67.5);

    nlohmann::ordered_json doc;
    doc["angles"] = {{"a0_deg", found.a0_deg},
                     {"b0_deg", found.b0_deg},
                     {"a1_deg", found.a1_deg},
                     {"b1_deg", found.b1_deg}};
    doc["iterations"] = found.iterations;
    doc["converged"] = found.converged;
    doc["model_s_abs_at_found"] = std::abs(s_found);
    doc["model_s_abs_at_canonical"] = std::abs(s_canonical);

    const std::filesystem::path dir = prepare_out_dir(config);
    write_json(dir / "angles.json", doc);

    // Final fringe traces for plotting: sweep one side across the full
    // period while the other sits at its found operating angle.
    std::vector<double> sweep;
    for (double deg = 0.0; deg < 180.0; deg += 1.0) sweep.push_back(deg);
    write_scan_csv(dir / "b_scan.csv",
                   scan_fringe(oracle, found.a0_deg, sweep,
                               config.optimizer.dwell_s));
    const ExperimentOracle swapped = [&oracle](double a, double b, double t) {
      return oracle(b, a, t);
    };
    write_scan_csv(dir / "a_scan.csv",
                   scan_fringe(swapped, found.b0_deg, sweep,
                               config.optimizer.dwell_s));
    std::printf("angles: a0=%.1f b0=%.1f a1=%.1f b1=%.1f  (%d rounds%s)  "
                "|S|model = %.5f\n",
                found.a0_deg, found.b0_deg, found.a1_deg, found.b1_deg,
                found.iterations, found.converged ? "" : ", not converged",
                std::abs(s_found));
    return static_cast<int>(found.converged ? exit_ok : exit_no_convergence);
  });
}

int cmd_bounds(const RunConfig& config, const std::string& builtin,
               const std::filesystem::path& table_path) {
  return guarded([&] {
    BehaviorTable table;
    std::string source;
    if (!builtin.empty()) {
      if (builtin == "pr") {
        table = pr_box();
      } else if (builtin == "local") {
        table = deterministic_behavior(local_deterministic_bound().argmax);
      } else if (builtin == "quantum") {
        table = behavior_from_state(singlet_state(), 0.0, 45.0, 22.5, 67.5);
      } else {
        throw config_error("bounds: builtin must be pr, local or quantum, "
                           "got \"" + builtin + "\"");
      }
      source = "builtin:" + builtin;
    } else {
      std::ifstream in(table_path);
      if (!in)
        throw io_failure("bounds: cannot open \"" + table_path.string() +
                         "\"");
      nlohmann::json raw;
      try {
        raw = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& err) {
        throw data_error(std::string("bounds: ") + err.what());
      }
      table = behavior_from_json(raw);
      source = table_path.string();
    }

    double max_deviation = 0.0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        double sum = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const double p = table.at(x, y, a, b);
            if (p < -1e-12)
              throw data_error("bounds: negative probability " +
                               std::to_string(p));
            sum += p;
          }
        max_deviation = std::max(max_deviation, std::abs(sum - 1.0));
      }
    }
    if (max_deviation > 1e-9)
      throw data_error(
          "bounds: outcome distributions do not normalize; max deviation " +
          std::to_string(max_deviation));

    const double s = chsh_of_behavior(table);
    const NoSignalingCheck ns = check_no_signaling(table);

    nlohmann::ordered_json doc;
    doc["source"] = source;
    doc["chsh"] = s;
    doc["no_signaling"] = {{"ok", ns.ok},
                           {"max_marginal_violation", ns.max_violation}};
    doc["constants"] = {{"local_bound", local_bound},
                        {"tsirelson_bound", tsirelson_bound},
                        {"grinbaum_bound", grinbaum_bound},
                        {"no_signaling_maximum", no_signaling_maximum}};
    doc["gaps"] = {{"above_local", std::abs(s) - local_bound},
                   {"above_grinbaum", std::abs(s) - grinbaum_bound},
                   {"below_tsirelson", tsirelson_bound - std::abs(s)},
                   {"below_no_signaling_maximum",
                    no_signaling_maximum - std::abs(s)}};
    doc["table"] = behavior_to_json(table);

    const std::filesystem::path dir = prepare_out_dir(config);
    write_json(dir / "bounds.json", doc);
    std::printf("%s: S = %+.8f, |S| - 2 = %+.4f, no-signaling %s\n",
                source.c_str(), s, std::abs(s) - local_bound,
                ns.ok ? "ok" : "violated");
    return static_cast<int>(exit_ok);
  });
}

int cmd_budget(const RunConfig& config, const std::filesystem::path& csv) {
  return guarded([&] {
    config.validate();
    const MeasurementRecordSet records = read_records_csv(csv);
    const ErrorBudget budget =
        full_budget(records, config.apparatus, config.apparatus.model,
                    operating_angles(records), config.budget);

    nlohmann::ordered_json doc;
    doc["provenance"] = {{"config_hash", config_hash(config)},
                         {"records", records.records.size()}};
    doc["budget"] = {
        {"counting", budget.counting},
        {"dead_time", budget.dead_time},
        {"timing_jitter", budget.timing_jitter},
        {"clock_drift", budget.clock_drift},
        {"angle", budget.angle},
        {"total", budget.total},
        {"dominant", budget.dominant},
        {"note", "clock_drift is reported but excluded from total"}};

    const std::filesystem::path dir = prepare_out_dir(config);
    write_json(dir / "budget.json", doc);
    std::printf("budget total = %.3e (dominant: %s)\n", budget.total,
                budget.dominant.c_str());
    return static_cast<int>(exit_ok);
  });
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"CHSH measurement toolkit: simulation, estimation, bounds and "
               "error budgets"};
  app.require_subcommand(1);

  std::string config_path, preset, mode, out_dir, csv_path;
  std::string builtin, table_path;
  std::uint64_t seed = 0;
  int sets = 0;
  bool have_seed = false, have_sets = false;

  auto add_common = [&](CLI::App* sub, bool with_csv) {
    sub->add_option("--config", config_path, "config JSON path");
    sub->add_option("--preset", preset, "built-in parameter set (paper)");
    sub->add_option("--seed", seed, "override the run seed")
        ->each([&](const std::string&) { have_seed = true; });
    sub->add_option("--sets", sets, "override the number of sets")
        ->each([&](const std::string&) { have_sets = true; });
    sub->add_option("--mode", mode, "event or aggregate");
    sub->add_option("--out-dir", out_dir, "output directory");
    if (with_csv)
      sub->add_option("records", csv_path, "records CSV path")->required();
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run a campaign");
  CLI::App* analyze = app.add_subcommand("analyze", "analyze a records CSV");
  CLI::App* optimize_cmd =
      app.add_subcommand("optimize", "find operating angles");
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "evaluate a behavior table against the "
                                   "CHSH bound landscape");
  CLI::App* budget_cmd =
      app.add_subcommand("budget", "error budget of a records CSV");
  add_common(simulate, false);
  add_common(analyze, true);
  add_common(optimize_cmd, false);
  add_common(bounds_cmd, false);
  add_common(budget_cmd, true);
  bounds_cmd->add_option("table", table_path, "behavior table JSON path");
  bounds_cmd->add_option("--builtin", builtin,
                         "builtin behavior: pr, local or quantum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config_error;
  }

  return guarded([&] {
    RunConfig config;
    if (!config_path.empty())
      config = load_config(config_path, preset);
    else if (!preset.empty())
      config = parse_config(nlohmann::json::object(), preset);

    if (have_seed) config.plan.seed = seed;
    if (have_sets) config.plan.sets = sets;
    if (!mode.empty()) config.mode = mode;
    if (!out_dir.empty()) config.out_dir = out_dir;
    config.validate();

    if (simulate->parsed()) return cmd_simulate(config);
    if (analyze->parsed()) return cmd_analyze(config, csv_path);
    if (optimize_cmd->parsed()) return cmd_optimize(config);
    if (bounds_cmd->parsed()) {
      if (builtin.empty() == table_path.empty())
        throw config_error(
            "bounds: give exactly one of a table path or --builtin");
      return cmd_bounds(config, builtin, table_path);
    }
    if (budget_cmd->parsed()) return cmd_budget(config, csv_path);
    return static_cast<int>(exit_config_error);
  });
}

}  // namespace bellbench
