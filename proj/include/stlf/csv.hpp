#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stlf/features.hpp"

namespace stlf::csv {

// Shortest text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

inline constexpr std::string_view kLoadHeader = "timestamp,load_mw";
inline constexpr std::string_view kWeatherHeader = "timestamp,dry_bulb_f,dew_point_f";
inline constexpr std::string_view kPreparedHeader =
    "timestamp,hour,day_of_week,is_working,dry_bulb_f,dew_point_f,"
    "lag_prior_hour_mw,lag_prior_day_mw,lag_prior_week_mw,target_mw";

struct Weather {
  HourlySeries dry_bulb{SeriesKind::DryBulb, {}};
  HourlySeries dew_point{SeriesKind::DewPoint, {}};
};

HourlySeries read_load(const std::filesystem::path& path);
void write_load(const std::filesystem::path& path, const HourlySeries& load);

Weather read_weather(const std::filesystem::path& path);
void write_weather(const std::filesystem::path& path, const HourlySeries& dry_bulb,
                   const HourlySeries& dew_point);

std::vector<FeatureRow> read_prepared(const std::filesystem::path& path);
void write_prepared(const std::filesystem::path& path, const std::vector<FeatureRow>& rows);
std::string prepared_line(const FeatureRow& row);

// One YYYY-MM-DD per line; '#' starts a comment.
HolidayCalendar read_holidays(const std::filesystem::path& path);

// Reads a whole text file, throwing Error if it cannot be opened.
std::string read_text(const std::filesystem::path& path);
// Writes atomically enough for our purposes: truncate and write.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace stlf::csv
