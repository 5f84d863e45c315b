#include "bellbench/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

namespace bellbench {

namespace {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw io_failure("failed to format number");
  return std::string(buf.data(), ptr);
}

double parse_double_field(const std::string& field, int line) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw data_error("records csv line " + std::to_string(line) +
                     ": bad numeric field \"" + field + "\"");
  return value;
}

std::int64_t parse_int_field(const std::string& field, int line) {
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw data_error("records csv line " + std::to_string(line) +
                     ": bad integer field \"" + field + "\"");
  return value;
}

constexpr const char* csv_header =
    "set,setting,alice_deg,bob_deg,duration_s,singles_a,singles_b,"
    "coincidences";

void reject_unknown_keys(const nlohmann::json& obj, const char* section,
                         std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw config_error(std::string("config: section \"") + section +
                       "\" must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) { known = true; break; }
    if (!known)
      throw config_error(std::string("config: unknown key \"") + item.key() +
                         "\" in section \"" + section + "\"");
  }
}

template <typename T>
void read_field(const nlohmann::json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

void read_detector(const nlohmann::json& obj, const char* section,
                   DetectorParams& det) {
  reject_unknown_keys(obj, section, {"efficiency", "dark_rate", "dead_time_s"});
  read_field(obj, "efficiency", det.efficiency);
  read_field(obj, "dark_rate", det.dark_rate);
  read_field(obj, "dead_time_s", det.dead_time_s);
}

std::string iso_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  apparatus.validate();
  plan.validate();
  if (mode != "event" && mode != "aggregate")
    throw config_error("config: mode must be \"event\" or \"aggregate\"");
  if (!(optimizer.resolution_deg > 0.0) || !(optimizer.dwell_s > 0.0) ||
      !(optimizer.coarse_step_deg > 0.0) || optimizer.max_rounds < 1)
    throw config_error("config: optimizer settings must be positive");
  if (budget.angle_mc_samples < 2)
    throw config_error("config: budget angle_mc_samples must be >= 2");
}

RunConfig paper_preset() {
  RunConfig cfg;

  SourceParams& src = cfg.apparatus.source;
  src.singles_rate_a = 4840.0;
  src.singles_rate_b = 3450.0;

  cfg.apparatus.detector_a = {1.0, 91.7, 1.6e-6};
  cfg.apparatus.detector_b = {1.0, 106.2, 1.6e-6};
  cfg.apparatus.window = {1.2e-9, WindowConvention::half};
  cfg.apparatus.timing = {60.0, 100e-9, 1e-7};
  cfg.apparatus.actuator = {0.1};
  cfg.apparatus.model = {0.999, 0.999, -0.9, 0.0};

  cfg.plan.a0_deg = 1.9;
  cfg.plan.a1_deg = 46.8;
  cfg.plan.b0_deg = 22.9;
  cfg.plan.b1_deg = 67.7;
  cfg.plan.sets = 312;
  cfg.plan.interval_s = 60.0;
  cfg.plan.seed = 1;

  // Pair rate calibrated so the expected detected coincidences over the
  // whole campaign reproduce the reference grand total. Summed over the
  // four outcome orientations of a correlation the transmission
  // probabilities add to 1, so each correlation sees pair_rate scaled by
  // the two live-time fractions.
  const double total_pairs = 33184329.0;
  const double arrivals_a = 0.5 * src.singles_rate_a + cfg.apparatus.detector_a.dark_rate;
  const double arrivals_b = 0.5 * src.singles_rate_b + cfg.apparatus.detector_b.dark_rate;
  const double live_a = 1.0 / (1.0 + arrivals_a * cfg.apparatus.detector_a.dead_time_s);
  const double live_b = 1.0 / (1.0 + arrivals_b * cfg.apparatus.detector_b.dead_time_s);
  const double correlation_seconds = 4.0 * cfg.plan.interval_s * cfg.plan.sets;
  src.pair_rate = total_pairs / (correlation_seconds * live_a * live_b);

  cfg.budget.angle_mc_samples = 20000;
  cfg.budget.angle_mc_seed = 1;

  cfg.optimizer.resolution_deg = 0.1;
  cfg.optimizer.dwell_s = 10.0;
  cfg.optimizer.coarse_step_deg = 5.0;
  cfg.optimizer.max_rounds = 8;

  return cfg;
}

RunConfig parse_config(const nlohmann::json& doc, const std::string& preset) {
  RunConfig cfg;
  if (preset == "paper") {
    cfg = paper_preset();
  } else if (!preset.empty()) {
    throw config_error("config: unknown preset \"" + preset + "\"");
  }

  reject_unknown_keys(doc, "top level",
                      {"apparatus", "plan", "budget", "optimizer", "mode",
                       "out_dir"});

  if (doc.contains("apparatus")) {
    const nlohmann::json& app = doc.at("apparatus");
    reject_unknown_keys(app, "apparatus",
                        {"source", "detector_a", "detector_b", "window",
                         "timing", "actuator", "model"});
    if (app.contains("source")) {
      const nlohmann::json& src = app.at("source");
      reject_unknown_keys(src, "apparatus.source",
                          {"pair_rate", "singles_rate_a", "singles_rate_b"});
      read_field(src, "pair_rate", cfg.apparatus.source.pair_rate);
      read_field(src, "singles_rate_a", cfg.apparatus.source.singles_rate_a);
      read_field(src, "singles_rate_b", cfg.apparatus.source.singles_rate_b);
    }
    if (app.contains("detector_a"))
      read_detector(app.at("detector_a"), "apparatus.detector_a",
                    cfg.apparatus.detector_a);
    if (app.contains("detector_b"))
      read_detector(app.at("detector_b"), "apparatus.detector_b",
                    cfg.apparatus.detector_b);
    if (app.contains("window")) {
      const nlohmann::json& win = app.at("window");
      reject_unknown_keys(win, "apparatus.window",
                          {"half_width_s", "convention"});
      read_field(win, "half_width_s", cfg.apparatus.window.half_width_s);
      if (win.contains("convention")) {
        const std::string conv = win.at("convention").get<std::string>();
        if (conv == "half")
          cfg.apparatus.window.convention = WindowConvention::half;
        else if (conv == "full")
          cfg.apparatus.window.convention = WindowConvention::full;
        else
          throw config_error(
              "config: window convention must be \"half\" or \"full\"");
      }
    }
    if (app.contains("timing")) {
      const nlohmann::json& timing = app.at("timing");
      reject_unknown_keys(timing, "apparatus.timing",
                          {"interval_s", "jitter_s", "clock_drift"});
      read_field(timing, "interval_s", cfg.apparatus.timing.interval_s);
      read_field(timing, "jitter_s", cfg.apparatus.timing.jitter_s);
      read_field(timing, "clock_drift", cfg.apparatus.timing.clock_drift);
      // The nominal interval doubles as the plan default; an explicit
      // plan.interval_s below still overrides it.
      cfg.plan.interval_s = cfg.apparatus.timing.interval_s;
    }
    if (app.contains("actuator")) {
      const nlohmann::json& act = app.at("actuator");
      reject_unknown_keys(act, "apparatus.actuator", {"resolution_deg"});
      read_field(act, "resolution_deg", cfg.apparatus.actuator.resolution_deg);
    }
    if (app.contains("model")) {
      const nlohmann::json& model = app.at("model");
      reject_unknown_keys(model, "apparatus.model",
                          {"v_hv", "v_45", "misalign_a_deg", "misalign_b_deg"});
      read_field(model, "v_hv", cfg.apparatus.model.v_hv);
      read_field(model, "v_45", cfg.apparatus.model.v_45);
      read_field(model, "misalign_a_deg", cfg.apparatus.model.misalign_a_deg);
      read_field(model, "misalign_b_deg", cfg.apparatus.model.misalign_b_deg);
    }
  }

  if (doc.contains("plan")) {
    const nlohmann::json& plan = doc.at("plan");
    reject_unknown_keys(plan, "plan",
                        {"a0_deg", "a1_deg", "b0_deg", "b1_deg", "sets",
                         "interval_s", "seed"});
    read_field(plan, "a0_deg", cfg.plan.a0_deg);
    read_field(plan, "a1_deg", cfg.plan.a1_deg);
    read_field(plan, "b0_deg", cfg.plan.b0_deg);
    read_field(plan, "b1_deg", cfg.plan.b1_deg);
    read_field(plan, "sets", cfg.plan.sets);
    read_field(plan, "interval_s", cfg.plan.interval_s);
    read_field(plan, "seed", cfg.plan.seed);
  }

  if (doc.contains("budget")) {
    const nlohmann::json& budget = doc.at("budget");
    reject_unknown_keys(budget, "budget",
                        {"angle_mc_samples", "angle_mc_seed"});
    read_field(budget, "angle_mc_samples", cfg.budget.angle_mc_samples);
    read_field(budget, "angle_mc_seed", cfg.budget.angle_mc_seed);
  }

  if (doc.contains("optimizer")) {
    const nlohmann::json& opt = doc.at("optimizer");
    reject_unknown_keys(opt, "optimizer",
                        {"resolution_deg", "dwell_s", "coarse_step_deg",
                         "max_rounds", "noiseless"});
    read_field(opt, "resolution_deg", cfg.optimizer.resolution_deg);
    read_field(opt, "dwell_s", cfg.optimizer.dwell_s);
    read_field(opt, "coarse_step_deg", cfg.optimizer.coarse_step_deg);
    read_field(opt, "max_rounds", cfg.optimizer.max_rounds);
    read_field(opt, "noiseless", cfg.optimizer_noiseless);
  }

  read_field(doc, "mode", cfg.mode);
  read_field(doc, "out_dir", cfg.out_dir);

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::string& preset) {
  std::ifstream in(path);
  if (!in)
    throw config_error("config: cannot open \"" + path.string() + "\"");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw config_error("config: \"" + path.string() + "\" is not valid JSON: " +
                       err.what());
  }
  return parse_config(doc, preset);
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  nlohmann::ordered_json doc;
  doc["apparatus"]["source"] = {
      {"pair_rate", config.apparatus.source.pair_rate},
      {"singles_rate_a", config.apparatus.source.singles_rate_a},
      {"singles_rate_b", config.apparatus.source.singles_rate_b}};
  auto detector_json = [](const DetectorParams& det) {
    return nlohmann::ordered_json{{"efficiency", det.efficiency},
                                  {"dark_rate", det.dark_rate},
                                  {"dead_time_s", det.dead_time_s}};
  };
  doc["apparatus"]["detector_a"] = detector_json(config.apparatus.detector_a);
  doc["apparatus"]["detector_b"] = detector_json(config.apparatus.detector_b);
  doc["apparatus"]["window"] = {
      {"half_width_s", config.apparatus.window.half_width_s},
      {"convention",
       config.apparatus.window.convention == WindowConvention::half ? "half"
                                                                    : "full"}};
  doc["apparatus"]["timing"] = {
      {"interval_s", config.apparatus.timing.interval_s},
      {"jitter_s", config.apparatus.timing.jitter_s},
      {"clock_drift", config.apparatus.timing.clock_drift}};
  doc["apparatus"]["actuator"] = {
      {"resolution_deg", config.apparatus.actuator.resolution_deg}};
  doc["apparatus"]["model"] = {
      {"v_hv", config.apparatus.model.v_hv},
      {"v_45", config.apparatus.model.v_45},
      {"misalign_a_deg", config.apparatus.model.misalign_a_deg},
      {"misalign_b_deg", config.apparatus.model.misalign_b_deg}};
  doc["plan"] = {{"a0_deg", config.plan.a0_deg},
                 {"a1_deg", config.plan.a1_deg},
                 {"b0_deg", config.plan.b0_deg},
                 {"b1_deg", config.plan.b1_deg},
                 {"sets", config.plan.sets},
                 {"interval_s", config.plan.interval_s},
                 {"seed", config.plan.seed}};
  doc["budget"] = {{"angle_mc_samples", config.budget.angle_mc_samples},
                   {"angle_mc_seed", config.budget.angle_mc_seed}};
  doc["optimizer"] = {{"resolution_deg", config.optimizer.resolution_deg},
                      {"dwell_s", config.optimizer.dwell_s},
                      {"coarse_step_deg", config.optimizer.coarse_step_deg},
                      {"max_rounds", config.optimizer.max_rounds},
                      {"noiseless", config.optimizer_noiseless}};
  doc["mode"] = config.mode;
  doc["out_dir"] = config.out_dir;
  return doc;
}

std::string config_hash(const RunConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw io_failure("cannot open \"" + tmp.string() + "\" for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw io_failure("short write to \"" + tmp.string() + "\"");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw io_failure("cannot move \"" + tmp.string() + "\" to \"" +
                     path.string() + "\": " + ec.message());
}

void write_records_csv(const std::filesystem::path& path,
                       const MeasurementRecordSet& records) {
  std::string out;
  out.reserve(records.records.size() * 48 + 64);
  out += csv_header;
  out += '\n';
  for (const MeasurementRecord& rec : records.records) {
    out += std::to_string(rec.set);
    out += ',';
    out += std::to_string(rec.setting);
    out += ',';
    out += format_double(rec.alice_deg);
    out += ',';
    out += format_double(rec.bob_deg);
    out += ',';
    out += format_double(rec.duration_s);
    out += ',';
    out += std::to_string(rec.singles_a);
    out += ',';
    out += std::to_string(rec.singles_b);
    out += ',';
    out += std::to_string(rec.coincidences);
    out += '\n';
  }
  atomic_write_text(path, out);
}

void write_scan_csv(const std::filesystem::path& path,
                    const std::vector<FringePoint>& trace) {
  std::string out = "angle_deg,count\n";
  for (const FringePoint& point : trace) {
    out += format_double(point.angle_deg);
    out += ',';
    out += format_double(point.count);
    out += '\n';
  }
  atomic_write_text(path, out);
}

MeasurementRecordSet read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_failure("cannot open \"" + path.string() + "\"");

  MeasurementRecordSet out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != csv_header)
        throw data_error("records csv line 1: expected header \"" +
                         std::string(csv_header) + "\"");
      continue;
    }
    if (line.empty()) continue;

    std::array<std::string, 8> fields;
    std::size_t start = 0, field = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field >= fields.size())
          throw data_error("records csv line " + std::to_string(line_no) +
                           ": too many fields");
        fields[field++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (field != fields.size())
      throw data_error("records csv line " + std::to_string(line_no) +
                       ": expected 8 fields, got " + std::to_string(field));

    MeasurementRecord rec;
    rec.set = static_cast<int>(parse_int_field(fields[0], line_no));
    rec.setting = static_cast<int>(parse_int_field(fields[1], line_no));
    rec.alice_deg = parse_double_field(fields[2], line_no);
    rec.bob_deg = parse_double_field(fields[3], line_no);
    rec.duration_s = parse_double_field(fields[4], line_no);
    rec.singles_a = parse_int_field(fields[5], line_no);
    rec.singles_b = parse_int_field(fields[6], line_no);
    rec.coincidences = parse_int_field(fields[7], line_no);
    out.records.push_back(rec);
  }
  out.validate();
  return out;
}

nlohmann::ordered_json behavior_to_json(const BehaviorTable& table) {
  nlohmann::ordered_json doc;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          doc["p"][x][y][a][b] = table.at(x, y, a, b);
  return doc;
}

BehaviorTable behavior_from_json(const nlohmann::json& doc) {
  BehaviorTable table;
  try {
    const nlohmann::json& p = doc.at("p");
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            table.at(x, y, a, b) = p.at(x).at(y).at(a).at(b).get<double>();
  } catch (const nlohmann::json::exception& err) {
    throw data_error(std::string("behavior table: ") + err.what());
  }
  return table;
}

std::string truncate_one_decimal(double value) {
  const double truncated = std::trunc(value * 10.0) / 10.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", truncated);
  return buf;
}

nlohmann::ordered_json build_report(const RunConfig& config,
                                    const MeasurementRecordSet& records,
                                    const SResult& s,
                                    const ErrorBudget& budget) {
  nlohmann::ordered_json doc;
  doc["tool"] = {{"name", tool_name}, {"version", tool_version}};
  doc["provenance"] = {{"config_hash", config_hash(config)},
                       {"seed", config.plan.seed},
                       {"mode", config.mode},
                       {"generated_at", iso_utc_now()}};
  doc["plan"] = {{"a0_deg", config.plan.a0_deg},
                 {"a1_deg", config.plan.a1_deg},
                 {"b0_deg", config.plan.b0_deg},
                 {"b1_deg", config.plan.b1_deg},
                 {"sets", records.n_sets()},
                 {"interval_s", config.plan.interval_s}};

  std::int64_t singles_a = 0, singles_b = 0;
  for (const MeasurementRecord& rec : records.records) {
    singles_a += rec.singles_a;
    singles_b += rec.singles_b;
  }
  doc["totals"] = {{"records", records.records.size()},
                   {"coincidences", records.total_coincidences()},
                   {"singles_a", singles_a},
                   {"singles_b", singles_b}};

  nlohmann::ordered_json correlations = nlohmann::ordered_json::array();
  for (const CorrelationEstimate& est : s.correlations)
    correlations.push_back(
        {{"e", est.e}, {"sigma", est.sigma}, {"n", est.n_total}});
  doc["s_estimate"] = {
      {"s", s.s},
      {"s_abs", std::abs(s.s)},
      {"sigma_counting", s.sigma},
      {"sign_convention",
       "s keeps the sign of E00 - E01 + E10 + E11; bound comparisons use |s|"},
      {"correlations", correlations}};

  doc["budget"] = {
      {"counting", budget.counting},
      {"dead_time", budget.dead_time},
      {"timing_jitter", budget.timing_jitter},
      {"clock_drift", budget.clock_drift},
      {"angle", budget.angle},
      {"total", budget.total},
      {"dominant", budget.dominant},
      {"note", "clock_drift is reported but excluded from total"}};

  const BoundReport bounds = bound_report(s_result_from_value(s.s, budget.total));
  doc["bounds"] = {{"s_abs", bounds.s_abs},
                   {"sigma", bounds.sigma},
                   {"z_local", bounds.z_local},
                   {"z_grinbaum", bounds.z_grinbaum},
                   {"z_grinbaum_display", truncate_one_decimal(bounds.z_grinbaum)},
                   {"tsirelson_gap", bounds.tsirelson_gap},
                   {"gap_sigmas", bounds.gap_sigmas}};

  doc["visibilities"] = {
      {"model_v_hv", config.apparatus.model.v_hv},
      {"model_v_45", config.apparatus.model.v_45},
      {"effective_from_s", std::abs(s.s) / tsirelson_bound},
      {"note", "effective_from_s is |s| / (2*sqrt(2)), the white-noise "
               "visibility that would produce this s at ideal angles"}};

  // Arm-level accidental estimate from the configured singles rates, under
  // both window conventions so the factor-of-2 ambiguity stays visible.
  CoincidenceWindow half_window = config.apparatus.window;
  half_window.convention = WindowConvention::half;
  CoincidenceWindow full_window = config.apparatus.window;
  full_window.convention = WindowConvention::full;
  const double sa = config.apparatus.source.singles_rate_a;
  const double sb = config.apparatus.source.singles_rate_b;
  doc["accidentals"] = {
      {"rate_half_convention", accidental_rate(sa, sb, half_window)},
      {"rate_full_convention", accidental_rate(sa, sb, full_window)},
      {"convention_used",
       config.apparatus.window.convention == WindowConvention::half ? "half"
                                                                    : "full"},
      {"note",
       "the two conventions differ by a factor of 2 in effective width"}};
  return doc;
}

}  // namespace bellbench
