#include "bellbench/apparatus.hpp"

#include <cmath>

#include "bellbench/correlation.hpp"

namespace bellbench {

void ApparatusParams::validate() const {
  auto check = [](bool ok, const char* msg) {
    if (!ok) throw config_error(msg);
  };
  check(source.pair_rate >= 0.0, "apparatus: pair_rate must be >= 0");
  check(source.singles_rate_a >= 0.0 && source.singles_rate_b >= 0.0,
        "apparatus: singles rates must be >= 0");
  check(source.pair_rate <= source.singles_rate_a &&
            source.pair_rate <= source.singles_rate_b,
        "apparatus: pair_rate cannot exceed either arm's singles rate");
  for (const DetectorParams* d : {&detector_a, &detector_b}) {
    check(d->efficiency >= 0.0 && d->efficiency <= 1.0,
          "apparatus: detector efficiency must be in [0, 1]");
    check(d->dark_rate >= 0.0, "apparatus: dark rate must be >= 0");
    check(d->dead_time_s >= 0.0, "apparatus: dead time must be >= 0");
  }
  check(window.half_width_s > 0.0, "apparatus: window half width must be > 0");
  check(timing.interval_s > 0.0, "apparatus: timing interval must be > 0");
  check(timing.jitter_s >= 0.0, "apparatus: timing jitter must be >= 0");
  check(timing.clock_drift >= 0.0, "apparatus: clock drift must be >= 0");
  check(actuator.resolution_deg >= 0.0,
        "apparatus: actuator resolution must be >= 0");
  model.validate();
}

double accidental_rate(double singles_a, double singles_b,
                       const CoincidenceWindow& window) {
  return singles_a * singles_b * window.effective_width_s();
}

double dead_time_throughput(double rate, double dead_time_s) {
  return rate / (1.0 + rate * dead_time_s);
}

SettingRates expected_setting_rates(const ApparatusParams& params,
                                    SettingPair setting) {
  const SourceParams& src = params.source;
  const DetectorParams& da = params.detector_a;
  const DetectorParams& db = params.detector_b;

  // Photon arrivals at each detector: half the arm rate passes the
  // analyzer (the marginal of the pair photons is exactly 1/2 as well),
  // thinned by efficiency, plus darks.
  const double arrivals_a = 0.5 * src.singles_rate_a * da.efficiency + da.dark_rate;
  const double arrivals_b = 0.5 * src.singles_rate_b * db.efficiency + db.dark_rate;
  const double live_a = 1.0 / (1.0 + arrivals_a * da.dead_time_s);
  const double live_b = 1.0 / (1.0 + arrivals_b * db.dead_time_s);

  SettingRates rates;
  rates.singles_a = arrivals_a * live_a;
  rates.singles_b = arrivals_b * live_b;

  const double e = model_correlation(params.model, setting);
  const double p_both = 0.25 * (1.0 + e);
  rates.true_coinc = src.pair_rate * p_both * da.efficiency * db.efficiency *
                     live_a * live_b;
  rates.accidental_coinc =
      accidental_rate(rates.singles_a, rates.singles_b, params.window);
  return rates;
}

}  // namespace bellbench
