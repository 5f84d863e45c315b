#include "bellbench/records.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace bellbench {

int MeasurementRecordSet::n_sets() const {
  std::set<int> sets;
  for (const MeasurementRecord& rec : records) sets.insert(rec.set);
  return static_cast<int>(sets.size());
}

std::int64_t MeasurementRecordSet::total_coincidences() const {
  std::int64_t total = 0;
  for (const MeasurementRecord& rec : records) total += rec.coincidences;
  return total;
}

void MeasurementRecordSet::validate() const {
  if (records.empty()) throw data_error("records: empty record set");
  std::set<std::pair<int, int>> seen;
  std::set<int> sets;
  for (const MeasurementRecord& rec : records) {
    if (rec.setting < 0 || rec.setting > 15)
      throw data_error("records: setting index " +
                       std::to_string(rec.setting) + " out of range 0..15");
    if (!(rec.duration_s > 0.0))
      throw data_error("records: non-positive duration in set " +
                       std::to_string(rec.set));
    if (rec.singles_a < 0 || rec.singles_b < 0 || rec.coincidences < 0)
      throw data_error("records: negative count in set " +
                       std::to_string(rec.set));
    if (!seen.insert({rec.set, rec.setting}).second)
      throw data_error("records: duplicate (set " + std::to_string(rec.set) +
                       ", setting " + std::to_string(rec.setting) + ")");
    sets.insert(rec.set);
  }
  for (int set : sets) {
    for (int setting = 0; setting < 16; ++setting) {
      if (!seen.count({set, setting}))
        throw data_error("records: set " + std::to_string(set) +
                         " is missing setting " + std::to_string(setting));
    }
  }
}

OperatingAngles operating_angles(const MeasurementRecordSet& records) {
  if (records.records.empty()) throw data_error("records: empty record set");
  int first_set = records.records.front().set;
  for (const MeasurementRecord& rec : records.records)
    first_set = std::min(first_set, rec.set);

  OperatingAngles angles;
  bool have[3] = {false, false, false};
  for (const MeasurementRecord& rec : records.records) {
    if (rec.set != first_set || outcome_of_setting(rec.setting) != 0) continue;
    switch (pair_of_setting(rec.setting)) {
      case 0:
        angles.a0_deg = rec.alice_deg;
        angles.b0_deg = rec.bob_deg;
        have[0] = true;
        break;
      case 1:
        angles.b1_deg = rec.bob_deg;
        have[1] = true;
        break;
      case 2:
        angles.a1_deg = rec.alice_deg;
        have[2] = true;
        break;
      default:
        break;
    }
  }
  if (!(have[0] && have[1] && have[2]))
    throw data_error("records: cannot recover base angles; settings 0, 4 and "
                     "8 of the first set are required");
  return angles;
}

}  // namespace bellbench
