#include "stlf/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stlf/error.hpp"
#include "stlf/random.hpp"

namespace stlf {

void SynthConfig::validate() const {
  if (hours < 169) throw Error("synth: need at least 169 hours, got " + std::to_string(hours));
  for (double a : {daily_amp, weekly_amp, annual_amp, temp_coupling, weekend_depression, noise_sd,
                   temp_annual_amp, temp_daily_amp, temp_noise_sd, dew_noise_sd})
    if (!(a >= 0.0)) throw Error("synth: amplitudes and noise levels must be non-negative");
  if (!(base_load > 0.0)) throw Error("synth: base_load must be positive");
}

SynthSeries generate(const SynthConfig& c) {
  c.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Rng rng(c.seed);
  SynthSeries out;
  out.load.entries.reserve(c.hours);
  out.dry_bulb.entries.reserve(c.hours);
  out.dew_point.entries.reserve(c.hours);
  for (std::size_t i = 0; i < c.hours; ++i) {
    const Timestamp t = c.start + static_cast<std::int64_t>(i);
    const double h = t.hour();
    const int dow = t.day_of_week();
    const double w = (dow - 1) * 24 + h;
    const double y = static_cast<double>(
        t - Timestamp::from_date(Date{t.date().year(), std::chrono::January, std::chrono::day{1}}));
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double z3 = rng.normal();

    const double temp = c.temp_mean - c.temp_annual_amp * std::cos(two_pi * y / 8766.0) -
                        c.temp_daily_amp * std::cos(two_pi * (h - 3.0) / 24.0) +
                        c.temp_noise_sd * z1;
    const double load = c.base_load - c.daily_amp * std::cos(two_pi * (h - 4.0) / 24.0) +
                        c.weekly_amp * std::sin(two_pi * w / 168.0) +
                        c.annual_amp * std::cos(2.0 * two_pi * y / 8766.0) +
                        c.temp_coupling * std::abs(temp - 65.0) -
                        (dow >= 6 ? c.weekend_depression : 0.0) + c.noise_sd * z2;
    const double dew = temp - c.dew_offset - c.dew_noise_sd * std::abs(z3);
    if (!(load > 0.0))
      throw Error("synth: configuration produces a non-positive load at " + t.to_string());
    out.load.entries.push_back({t, load});
    out.dry_bulb.entries.push_back({t, temp});
    out.dew_point.entries.push_back({t, dew});
  }
  return out;
}

}  // namespace stlf
