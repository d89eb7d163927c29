#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stlf/network.hpp"
#include "stlf/timestamp.hpp"

namespace stlf {

enum class SeriesKind { Load, DryBulb, DewPoint };

struct Observation {
  Timestamp time;
  double value = 0.0;
  bool operator==(const Observation&) const = default;
};

struct HourlySeries {
  SeriesKind kind = SeriesKind::Load;
  std::vector<Observation> entries;
  bool operator==(const HourlySeries&) const = default;
};

struct MergedRow {
  Timestamp time;
  double load = 0.0;
  double dry_bulb = 0.0;
  double dew_point = 0.0;
};
using MergedTable = std::vector<MergedRow>;

class HolidayCalendar {
 public:
  HolidayCalendar() = default;
  explicit HolidayCalendar(std::set<std::int64_t> days) : days_(std::move(days)) {}
  void add(Date d);
  bool contains(Date d) const;
  std::size_t size() const { return days_.size(); }

 private:
  std::set<std::int64_t> days_;  // days since epoch
};

inline constexpr std::size_t kFeatureCount = 8;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "hour",       "day_of_week",       "is_working",       "dry_bulb_f",
    "dew_point_f", "lag_prior_hour_mw", "lag_prior_day_mw", "lag_prior_week_mw"};

struct FeatureRow {
  Timestamp time;
  int hour = 0;         // 0..23
  int day_of_week = 1;  // Monday = 1 .. Sunday = 7
  int is_working = 1;   // 0 on weekends and calendar holidays
  double dry_bulb = 0.0;
  double dew_point = 0.0;
  double lag_prior_hour = 0.0;  // load at t - 1h
  double lag_prior_day = 0.0;   // load at t - 24h
  double lag_prior_week = 0.0;  // load at t - 168h
  double target = 0.0;

  // Network inputs in kFeatureNames order.
  std::array<double, kFeatureCount> inputs() const;
  bool operator==(const FeatureRow&) const = default;
};

struct ColumnRange {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const ColumnRange&) const = default;
};

// Min/max of every input column and of the target, from the training split.
struct NormStats {
  std::array<ColumnRange, kFeatureCount> inputs{};
  ColumnRange target{};
  bool operator==(const NormStats&) const = default;
};

// Duplicate hours are averaged, gaps of up to 24 missing hours are linearly
// interpolated, and values farther than 5 median absolute deviations from a
// centred 25-hour rolling median are clamped to that median (repeated until
// nothing changes). Throws DataError on longer gaps.
HourlySeries clean(const HourlySeries& series);

// Inner join on timestamp.
MergedTable merge(const HourlySeries& load, const HourlySeries& dry_bulb,
                  const HourlySeries& dew_point);

// One row per hour from the 169th onward whose three lags are present.
std::vector<FeatureRow> extract_features(const MergedTable& merged, const HolidayCalendar& calendar);

NormStats fit_normalizer(std::span<const FeatureRow> train_rows);
// Scales to [-1, 1] over the training range; values outside are not clipped.
double scale(double value, const ColumnRange& range);
double unscale(double scaled, const ColumnRange& range);
Vector normalize_inputs(const FeatureRow& row, const NormStats& stats);
std::vector<Sample> normalize(std::span<const FeatureRow> rows, const NormStats& stats);
Vector denormalize_target(std::span<const double> values, const NormStats& stats);

// Rows before `boundary` train, the rest test. Throws when either side is empty.
std::pair<std::vector<FeatureRow>, std::vector<FeatureRow>> split(
    std::span<const FeatureRow> rows, Timestamp boundary);

// Cuts time-contiguous runs of rows into consecutive windows of `length`
// steps for recurrent training; trailing partial windows are dropped.
std::vector<Window> make_windows(std::span<const FeatureRow> rows, const NormStats& stats,
                                 std::size_t length);

}  // namespace stlf
