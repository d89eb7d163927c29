#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stlf/features.hpp"
#include "stlf/model_io.hpp"

namespace stlf {

// Mean absolute percentage error in percent. Throws on length mismatch,
// empty input, or a zero actual value.
double mape(std::span<const double> actual, std::span<const double> forecast);

enum class Horizon { Day = 24, Week = 168 };
enum class ForecastMode { Recursive, Static };

std::size_t hours(Horizon h);
std::string_view to_string(Horizon h);
Horizon parse_horizon(std::string_view s);
std::string_view to_string(ForecastMode m);
ForecastMode parse_forecast_mode(std::string_view s);

inline constexpr std::size_t kContextHours = 168;

struct ForecastResult {
  std::vector<Timestamp> timestamps;
  std::vector<double> actual;
  std::vector<double> forecast;
  Horizon horizon = Horizon::Day;
  ForecastMode mode = ForecastMode::Recursive;
  double mape = 0.0;
};

// Forecasts rows[origin, origin + horizon) hour by hour. rows[origin - 168,
// origin + horizon) must be consecutive hours. Recursive mode feeds earlier
// predictions into the prior-hour/day/week lags once they fall inside the
// horizon; static mode uses the lags stored in the rows. Recurrent models
// first replay the 168 context hours from a zero state.
ForecastResult forecast_horizon(const Model& model, std::span<const FeatureRow> rows,
                                std::size_t origin, Horizon horizon,
                                ForecastMode mode = ForecastMode::Recursive);
// Same, locating the origin by timestamp.
ForecastResult forecast_horizon(const Model& model, std::span<const FeatureRow> rows,
                                Timestamp origin, Horizon horizon,
                                ForecastMode mode = ForecastMode::Recursive);

std::string forecast_csv(const ForecastResult& result);

enum class Season { Winter, Spring, Summer, Autumn };
inline constexpr std::array<Season, 4> kSeasons{Season::Winter, Season::Spring, Season::Summer,
                                                Season::Autumn};
std::string_view to_string(Season s);

// Month (1..12) to season. Defaults to meteorological seasons.
struct SeasonRule {
  std::array<Season, 12> by_month{Season::Winter, Season::Winter, Season::Spring, Season::Spring,
                                  Season::Spring, Season::Summer, Season::Summer, Season::Summer,
                                  Season::Autumn, Season::Autumn, Season::Autumn, Season::Winter};
  Season operator()(unsigned month) const { return by_month.at(month - 1); }
};

// First origin at midnight, at or after `test_begin`, whose whole horizon lies
// in `season` and whose context and horizon are consecutive hours.
std::optional<std::size_t> find_window(std::span<const FeatureRow> rows, Timestamp test_begin,
                                       Season season, Horizon horizon,
                                       const SeasonRule& rule = {});

struct CaseModel {
  int case_number;
  const Model* model;  // null when the case failed to train
};

struct ReportCell {
  Season season;
  Horizon horizon;
  int case_number;
  ForecastMode mode;
  std::optional<double> mape;  // empty: season absent or case unavailable
  std::optional<ForecastResult> result;
  std::string note;
};

struct SeasonalReport {
  std::vector<int> cases;
  std::vector<ForecastMode> modes;
  std::vector<ReportCell> cells;  // season-major, then horizon, mode, case

  const ReportCell* find(Season s, Horizon h, int case_number, ForecastMode m) const;
  std::string to_csv() const;
  std::string to_text(ForecastMode mode) const;
};

SeasonalReport seasonal_report(std::span<const CaseModel> models, std::span<const FeatureRow> rows,
                               Timestamp test_begin,
                               std::span<const ForecastMode> modes = {},
                               const SeasonRule& rule = {});

}  // namespace stlf
