#include "stlf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stlf/csv.hpp"
#include "stlf/error.hpp"
#include "stlf/kernels.hpp"

namespace stlf {

double mape(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.size() != forecast.size())
    throw DimensionError("mape: " + std::to_string(actual.size()) + " actual values but " +
                         std::to_string(forecast.size()) + " forecasts");
  if (actual.empty()) throw DataError("mape: no values");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) throw DataError("mape: actual value " + std::to_string(i) + " is zero");
    sum += std::abs(actual[i] - forecast[i]) / std::abs(actual[i]);
  }
  return sum / static_cast<double>(actual.size()) * 100.0;
}

std::size_t hours(Horizon h) { return static_cast<std::size_t>(h); }

std::string_view to_string(Horizon h) { return h == Horizon::Day ? "day" : "week"; }

Horizon parse_horizon(std::string_view s) {
  if (s == "day") return Horizon::Day;
  if (s == "week") return Horizon::Week;
  throw Error("unknown horizon '" + std::string(s) + "' (expected day or week)");
}

std::string_view to_string(ForecastMode m) {
  return m == ForecastMode::Recursive ? "recursive" : "static";
}

ForecastMode parse_forecast_mode(std::string_view s) {
  if (s == "recursive") return ForecastMode::Recursive;
  if (s == "static") return ForecastMode::Static;
  throw Error("unknown forecast mode '" + std::string(s) + "' (expected recursive or static)");
}

std::string_view to_string(Season s) {
  switch (s) {
    case Season::Winter:
      return "winter";
    case Season::Spring:
      return "spring";
    case Season::Summer:
      return "summer";
    case Season::Autumn:
      return "autumn";
  }
  return "";
}

ForecastResult forecast_horizon(const Model& model, std::span<const FeatureRow> rows,
                                std::size_t origin, Horizon horizon, ForecastMode mode) {
  const std::size_t n = hours(horizon);
  if (origin < kContextHours)
    throw DataError("forecast: need 168 hours of context before the origin, have " +
                    std::to_string(origin));
  if (origin + n > rows.size())
    throw DataError("forecast: weather/calendar rows cover only " +
                    std::to_string(rows.size() - std::min(origin, rows.size())) + " of " +
                    std::to_string(n) + " forecast hours");
  for (std::size_t i = origin - kContextHours + 1; i < origin + n; ++i)
    if (rows[i].time - rows[i - 1].time != 1)
      throw DataError("forecast: rows are not consecutive hours near " + rows[i].time.to_string());

  const NetworkParams& net = model.params;
  const NormStats& stats = model.stats;
  RnnState state;
  if (net.spec.recurrent) {
    state = zero_state(net.spec);
    for (std::size_t i = origin - kContextHours; i < origin; ++i)
      rnn_step(net, normalize_inputs(rows[i], stats), state);
  }

  ForecastResult r;
  r.horizon = horizon;
  r.mode = mode;
  for (std::size_t k = 0; k < n; ++k) {
    FeatureRow row = rows[origin + k];
    if (mode == ForecastMode::Recursive) {
      if (k >= 1) row.lag_prior_hour = r.forecast[k - 1];
      if (k >= 24) row.lag_prior_day = r.forecast[k - 24];
      if (k >= 168) row.lag_prior_week = r.forecast[k - 168];
    }
    const Vector x = normalize_inputs(row, stats);
    const Vector y = net.spec.recurrent ? rnn_step(net, x, state) : fnn_forward(net, x);
    r.timestamps.push_back(row.time);
    r.actual.push_back(row.target);
    r.forecast.push_back(unscale(y[0], stats.target));
  }
  r.mape = mape(r.actual, r.forecast);
  return r;
}

ForecastResult forecast_horizon(const Model& model, std::span<const FeatureRow> rows,
                                Timestamp origin, Horizon horizon, ForecastMode mode) {
  const auto it = std::lower_bound(rows.begin(), rows.end(), origin,
                                   [](const FeatureRow& r, Timestamp t) { return r.time < t; });
  if (it == rows.end() || it->time != origin)
    throw DataError("forecast: no data row at origin " + origin.to_string());
  return forecast_horizon(model, rows, static_cast<std::size_t>(it - rows.begin()), horizon, mode);
}

std::string forecast_csv(const ForecastResult& r) {
  std::string out = "timestamp,actual_mw,forecast_mw,horizon,mode\n";
  for (std::size_t i = 0; i < r.forecast.size(); ++i)
    out += r.timestamps[i].to_string() + ',' + csv::format_double(r.actual[i]) + ',' +
           csv::format_double(r.forecast[i]) + ',' + std::string(to_string(r.horizon)) + ',' +
           std::string(to_string(r.mode)) + '\n';
  return out;
}

std::optional<std::size_t> find_window(std::span<const FeatureRow> rows, Timestamp test_begin,
                                       Season season, Horizon horizon, const SeasonRule& rule) {
  const std::size_t n = hours(horizon);
  // Length of the consecutive-hour run ending at each index.
  std::vector<std::size_t> run(rows.size(), 1);
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].time - rows[i - 1].time == 1) run[i] = run[i - 1] + 1;
  for (std::size_t o = kContextHours; o + n <= rows.size(); ++o) {
    const FeatureRow& first = rows[o];
    if (first.time < test_begin || first.hour != 0) continue;
    if (rule(first.time.month()) != season) continue;
    if (run[o + n - 1] < kContextHours + n) continue;
    if (rule(rows[o + n - 1].time.month()) != season) continue;
    bool inside = true;
    for (std::size_t k = 0; k < n && inside; ++k) inside = rule(rows[o + k].time.month()) == season;
    if (inside) return o;
  }
  return std::nullopt;
}

const ReportCell* SeasonalReport::find(Season s, Horizon h, int c, ForecastMode m) const {
  for (const auto& cell : cells)
    if (cell.season == s && cell.horizon == h && cell.case_number == c && cell.mode == m) return &cell;
  return nullptr;
}

std::string SeasonalReport::to_csv() const {
  std::string out = "season,horizon,case,mape_percent,mode\n";
  for (const auto& c : cells)
    out += std::string(to_string(c.season)) + ',' + std::string(to_string(c.horizon)) + ',' +
           std::to_string(c.case_number) + ',' + (c.mape ? csv::format_double(*c.mape) : "absent") +
           ',' + std::string(to_string(c.mode)) + '\n';
  return out;
}

std::string SeasonalReport::to_text(ForecastMode mode) const {
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  auto cap = [](std::string_view s) {
    std::string t(s);
    if (!t.empty()) t[0] = static_cast<char>(t[0] - 'a' + 'A');
    return t;
  };
  std::string out = "MAPE (%), " + std::string(to_string(mode)) + " forecasts\n";
  out += pad("Forecast Type", 18);
  for (int c : cases) out += pad("Case " + std::to_string(c), 9);
  out += '\n';
  for (Season s : kSeasons) {
    for (Horizon h : {Horizon::Day, Horizon::Week}) {
      out += pad(h == Horizon::Day ? cap(to_string(s)) : "", 10) + pad(std::string(to_string(h)), 8);
      for (int c : cases) {
        const ReportCell* cell = find(s, h, c, mode);
        std::string v = "absent";
        if (cell && cell->mape) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.2f", *cell->mape);
          v = buf;
        }
        out += pad(v, 9);
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      out += '\n';
    }
  }
  return out;
}

SeasonalReport seasonal_report(std::span<const CaseModel> models, std::span<const FeatureRow> rows,
                               Timestamp test_begin, std::span<const ForecastMode> modes,
                               const SeasonRule& rule) {
  SeasonalReport report;
  for (const auto& m : models) report.cases.push_back(m.case_number);
  if (modes.empty())
    report.modes = {ForecastMode::Recursive};
  else
    report.modes.assign(modes.begin(), modes.end());

  std::vector<std::optional<std::size_t>> origins;
  std::vector<const Model*> cell_models;
  for (Season s : kSeasons)
    for (Horizon h : {Horizon::Day, Horizon::Week}) {
      const auto origin = find_window(rows, test_begin, s, h, rule);
      for (ForecastMode mode : report.modes)
        for (const auto& m : models) {
          ReportCell cell{s, h, m.case_number, mode, std::nullopt, std::nullopt, ""};
          if (!origin) cell.note = "season absent from test data";
          else if (!m.model) cell.note = "model unavailable";
          report.cells.push_back(std::move(cell));
          origins.push_back(origin);
          cell_models.push_back(m.model);
        }
    }

  // Cells are independent; each worker fills only its own cell.
  kernels::for_each_index(report.cells.size(), Execution::Parallel, [&](std::size_t i) {
    ReportCell& cell = report.cells[i];
    if (!origins[i] || !cell_models[i]) return;
    try {
      cell.result = forecast_horizon(*cell_models[i], rows, *origins[i], cell.horizon, cell.mode);
      cell.mape = cell.result->mape;
    } catch (const Error& e) {
      cell.note = e.what();
    }
  });
  return report;
}

}  // namespace stlf
