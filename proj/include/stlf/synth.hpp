#pragma once

#include <cstdint>

#include "stlf/features.hpp"
#include "stlf/timestamp.hpp"

namespace stlf {

// Parameters of the synthetic load/weather generator. For hour t let h be the
// hour of day, w the hour of week (Monday 00:00 = 0), y the hour of year
// (January 1 00:00 = 0), weekend = 1 on Saturday and Sunday, and z1, z2, z3
// independent standard normals drawn in that order for every hour:
//
//   dry_bulb = temp_mean - temp_annual_amp cos(2 pi y / 8766)
//              - temp_daily_amp cos(2 pi (h - 3) / 24) + temp_noise_sd z1
//   load     = base_load - daily_amp cos(2 pi (h - 4) / 24)
//              + weekly_amp sin(2 pi w / 168) + annual_amp cos(4 pi y / 8766)
//              + temp_coupling |dry_bulb - 65| - weekend_depression weekend
//              + noise_sd z2
//   dew_point = dry_bulb - dew_offset - dew_noise_sd |z3|
struct SynthConfig {
  Timestamp start = Timestamp::from_civil(2013, 1, 1);
  std::size_t hours = 17520;
  double base_load = 6000.0;          // MW
  double daily_amp = 1200.0;          // MW
  double weekly_amp = 250.0;          // MW
  double annual_amp = 300.0;          // MW
  double temp_coupling = 45.0;        // MW per degree F away from 65 F
  double weekend_depression = 700.0;  // MW
  double noise_sd = 60.0;             // MW
  double temp_mean = 55.0;            // F
  double temp_annual_amp = 22.0;      // F
  double temp_daily_amp = 8.0;        // F
  double temp_noise_sd = 1.5;         // F
  double dew_offset = 8.0;            // F
  double dew_noise_sd = 3.0;          // F
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthSeries {
  HourlySeries load{SeriesKind::Load, {}};
  HourlySeries dry_bulb{SeriesKind::DryBulb, {}};
  HourlySeries dew_point{SeriesKind::DewPoint, {}};
};

SynthSeries generate(const SynthConfig& config);

}  // namespace stlf
