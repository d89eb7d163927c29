#include <cmath>

#include "doctest.h"
#include "stlf/error.hpp"
#include "stlf/eval.hpp"
#include "stlf/pipeline.hpp"
#include "stlf/synth.hpp"
#include "test_support.hpp"

using namespace stlf;

namespace {

// Independent evaluation of the metric, summing in long double.
double reference_mape(const Vector& a, const Vector& f) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::fabs(static_cast<long double>(a[i]) - f[i]) / std::fabs(static_cast<long double>(a[i]));
  return static_cast<double>(100.0L * s / a.size());
}

std::vector<FeatureRow> synthetic_rows(std::size_t hours, std::uint64_t seed = 3) {
  SynthConfig c;
  c.hours = hours;
  c.seed = seed;
  const auto s = generate(c);
  return extract_features(merge(s.load, s.dry_bulb, s.dew_point), HolidayCalendar{});
}

Model constant_model(const NetworkSpec& spec, const NormStats& stats, double c) {
  Model m;
  m.params = zero_params(spec);
  m.params.layers.back().bias[0] = c;
  m.stats = stats;
  return m;
}

}  // namespace

TEST_CASE("mape examples") {
  CHECK(mape(Vector{100, 200}, Vector{100, 200}) == 0.0);
  CHECK(mape(Vector{100, 200}, Vector{110, 190}) == doctest::Approx(7.5).epsilon(1e-14));
  CHECK(mape(Vector{100}, Vector{0}) == 100.0);
  CHECK_THROWS_AS(mape(Vector{0, 1}, Vector{1, 1}), DataError);
  CHECK_THROWS_AS(mape(Vector{1, 1}, Vector{1}), DimensionError);
  CHECK_THROWS_AS(mape(Vector{}, Vector{}), DataError);
}

TEST_CASE("mape properties") {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(200);
    Vector a(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(1, 1000) * (rng.below(5) == 0 ? -1 : 1);
      f[i] = a[i] + rng.normal() * 50;
    }
    const double m = mape(a, f);
    CHECK(std::abs(m - reference_mape(a, f)) <= 1e-12 * std::max(1.0, m));
    CHECK(m >= 0);
    const double k = rng.uniform(0.01, 100);
    Vector ka(a), kf(f);
    for (std::size_t i = 0; i < n; ++i) ka[i] *= k, kf[i] *= k;
    CHECK(std::abs(mape(ka, kf) - m) <= 1e-12 * std::max(1.0, m));
    CHECK(mape(a, a) == 0.0);
    Vector g(a);
    g[rng.below(n)] += 1e-3;
    CHECK(mape(a, g) > 0.0);
  }
}

TEST_CASE("forecast horizon contracts") {
  const auto rows = synthetic_rows(24 * 30);
  const NormStats stats = fit_normalizer(rows);
  const auto spec = case_spec(5);
  const Model m = constant_model(spec, stats, 0.25);

  for (auto h : {Horizon::Day, Horizon::Week}) {
    const auto r = forecast_horizon(m, rows, std::size_t{200}, h);
    CHECK(r.forecast.size() == hours(h));
    CHECK(r.actual.size() == hours(h));
    for (double v : r.forecast) CHECK(v == unscale(0.25, stats.target));
    CHECK(r.timestamps.front() == rows[200].time);
  }
  CHECK_THROWS_AS(forecast_horizon(m, rows, std::size_t{100}, Horizon::Day), DataError);
  CHECK_THROWS_AS(forecast_horizon(m, rows, rows.size() - 10, Horizon::Day), DataError);
  CHECK_THROWS_AS(forecast_horizon(m, rows, Timestamp::from_civil(2030, 1, 1), Horizon::Day), DataError);

  auto gappy = rows;
  gappy.erase(gappy.begin() + 210);
  CHECK_THROWS_AS(forecast_horizon(m, gappy, std::size_t{200}, Horizon::Day), DataError);

  SUBCASE("recurrent constant model") {
    const Model rm = constant_model(case_spec(2), stats, -0.5);
    const auto r = forecast_horizon(rm, rows, rows[300].time, Horizon::Day, ForecastMode::Static);
    for (double v : r.forecast) CHECK(v == unscale(-0.5, stats.target));
  }
}

TEST_CASE("recursive and static modes agree on an exact model") {
  // Noise-free data that is a linear function of the prior-day lag: load(t) = load(t - 24).
  SynthConfig c;
  c.hours = 24 * 25;
  c.weekly_amp = c.annual_amp = c.temp_coupling = c.weekend_depression = c.noise_sd = 0;
  const auto s = generate(c);
  const auto rows = extract_features(merge(s.load, s.dry_bulb, s.dew_point), HolidayCalendar{});
  const NormStats stats = fit_normalizer(rows);
  NetworkSpec spec;
  spec.hidden_layers = {{1, ActivationKind::Linear}};
  Model m;
  m.params = zero_params(spec);
  m.stats = stats;
  // hidden = scaled prior-day lag; output maps it back to the scaled target.
  const auto& lag = stats.inputs[6];
  const auto& tgt = stats.target;
  m.params.layers[0].weights(0, 6) = 1.0;
  const double a = (lag.max - lag.min) / (tgt.max - tgt.min);
  m.params.layers[1].weights(0, 0) = a;
  m.params.layers[1].bias[0] = (lag.min - tgt.min) * 2.0 / (tgt.max - tgt.min) + a - 1.0;
  const auto rec = forecast_horizon(m, rows, std::size_t{170}, Horizon::Week, ForecastMode::Recursive);
  const auto sta = forecast_horizon(m, rows, std::size_t{170}, Horizon::Week, ForecastMode::Static);
  for (std::size_t i = 0; i < rec.forecast.size(); ++i) {
    CHECK(std::abs(rec.forecast[i] - sta.forecast[i]) < 1e-6);
    CHECK(std::abs(sta.forecast[i] - sta.actual[i]) < 1e-6);
  }
  CHECK(rec.mape < 1e-8);
}

TEST_CASE("seasonal report shape") {
  const auto rows = synthetic_rows(24 * 365 + 24 * 30);
  const auto [train, test] = split(rows, Timestamp::from_civil(2013, 3, 1));
  const NormStats stats = fit_normalizer(train);
  std::vector<Model> models;
  for (int c = 1; c <= 6; ++c) models.push_back(constant_model(case_spec(c), stats, 0.1 * c));
  std::vector<CaseModel> cms;
  for (int c = 1; c <= 6; ++c) cms.push_back({c, &models[c - 1]});
  const std::vector<ForecastMode> modes{ForecastMode::Recursive, ForecastMode::Static};
  const auto report = seasonal_report(cms, rows, test.front().time, modes);
  CHECK(report.cells.size() == 6 * 4 * 2 * 2);
  std::size_t populated = 0;
  for (const auto& cell : report.cells) {
    if (cell.mape) {
      ++populated;
      CHECK(*cell.mape >= 0);
      CHECK(cell.result->forecast.size() == hours(cell.horizon));
      CHECK(SeasonRule{}(cell.result->timestamps.front().month()) == cell.season);
      CHECK(SeasonRule{}(cell.result->timestamps.back().month()) == cell.season);
      CHECK(cell.result->timestamps.front().hour() == 0);
    }
  }
  // Winter of the test range starts 2013-12-01; all four seasons exist.
  CHECK(populated == report.cells.size());
  const std::string text = report.to_text(ForecastMode::Recursive);
  CHECK(text.find("Case 1   Case 2") != std::string::npos);
  CHECK(text.find("Autumn    day") != std::string::npos);
  CHECK(report.to_csv().rfind("season,horizon,case,mape_percent,mode\n", 0) == 0);

  SUBCASE("missing season is marked absent") {
    const auto short_rows = std::vector<FeatureRow>(rows.begin(), rows.begin() + 24 * 120);
    const auto r = seasonal_report(cms, short_rows, short_rows[200].time);
    const auto* cell = r.find(Season::Autumn, Horizon::Week, 3, ForecastMode::Recursive);
    REQUIRE(cell);
    CHECK(!cell->mape);
    CHECK(r.to_csv().find("autumn,week,3,absent,recursive") != std::string::npos);
    CHECK(r.to_text(ForecastMode::Recursive).find("absent") != std::string::npos);
  }
}

TEST_CASE("case specs follow the experiment numbering") {
  CHECK(case_description(1) == "Deep-RNN with sigmoid");
  CHECK(case_description(2) == "Deep-RNN with tanh");
  CHECK(case_description(3) == "Deep-RNN with relu");
  CHECK(case_description(4) == "Deep-FNN with sigmoid");
  CHECK(case_description(5) == "Deep-FNN with tanh");
  CHECK(case_description(6) == "Deep-FNN with relu");
  CHECK(case_spec(2).recurrent);
  CHECK(case_spec(2).hidden_layers[0].activation == ActivationKind::Tanh);
  CHECK(!case_spec(6).recurrent);
  CHECK(case_spec(6).hidden_layers[1].activation == ActivationKind::ReLU);
  CHECK(case_spec(2).parameter_count() == 231);
  CHECK_THROWS_AS(case_spec(7), Error);
}
