#include <filesystem>

#include "doctest.h"
#include "stlf/csv.hpp"
#include "stlf/error.hpp"
#include "stlf/model_io.hpp"
#include "stlf/pipeline.hpp"
#include "stlf/synth.hpp"
#include "test_support.hpp"

using namespace stlf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stlf_unit_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles round-trip through text") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20, 20));
    CHECK(csv::parse_double(csv::format_double(v)) == v);
  }
  CHECK_THROWS_AS(csv::parse_double("12a"), Error);
  CHECK_THROWS_AS(csv::parse_double("nan"), Error);
}

TEST_CASE("load and weather CSV round-trip") {
  SynthConfig c;
  c.hours = 300;
  const auto s = generate(c);
  csv::write_load(scratch("load.csv"), s.load);
  csv::write_weather(scratch("weather.csv"), s.dry_bulb, s.dew_point);
  CHECK(csv::read_load(scratch("load.csv")) == s.load);
  const auto w = csv::read_weather(scratch("weather.csv"));
  CHECK(w.dry_bulb == s.dry_bulb);
  CHECK(w.dew_point == s.dew_point);
  CHECK(csv::read_text(scratch("load.csv")).rfind("timestamp,load_mw\n2013-01-01 00:00,", 0) == 0);
}

TEST_CASE("prepared CSV round-trips bit-exactly") {
  SynthConfig c;
  c.hours = 500;
  const auto s = generate(c);
  const auto rows = extract_features(merge(s.load, s.dry_bulb, s.dew_point), HolidayCalendar{});
  csv::write_prepared(scratch("prep.csv"), rows);
  CHECK(csv::read_prepared(scratch("prep.csv")) == rows);
}

TEST_CASE("parse errors carry line numbers") {
  csv::write_text(scratch("bad.csv"), "timestamp,load_mw\n2013-01-01 00:00,5\n2013-01-01 01:00,abc\n");
  try {
    csv::read_load(scratch("bad.csv"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  csv::write_text(scratch("hdr.csv"), "time,load\n");
  CHECK_THROWS_AS(csv::read_load(scratch("hdr.csv")), ParseError);
  CHECK_THROWS_WITH(csv::read_load(scratch("missing.csv")), doctest::Contains("not found"));
  csv::write_text(scratch("prep_bad.csv"), std::string(csv::kPreparedHeader) +
                                               "\n2013-01-08 00:00,0,9,1,1,1,1,1,1,1\n");
  CHECK_THROWS_WITH_AS(csv::read_prepared(scratch("prep_bad.csv")), doctest::Contains("day_of_week"), ParseError);
}

TEST_CASE("holiday file") {
  csv::write_text(scratch("hol.txt"), "# federal\n2014-01-01\n\n2014-07-04  # independence\n");
  const auto cal = csv::read_holidays(scratch("hol.txt"));
  CHECK(cal.size() == 2);
  CHECK(cal.contains(parse_date("2014-07-04")));
  csv::write_text(scratch("hol_bad.txt"), "2014-02-30\n");
  CHECK_THROWS_AS(csv::read_holidays(scratch("hol_bad.txt")), ParseError);
}

TEST_CASE("model files reproduce forecasts exactly") {
  Rng rng(5);
  for (int c = 1; c <= 6; ++c) {
    Model m;
    m.params = testing::random_params(case_spec(c), rng);
    for (std::size_t k = 0; k < kFeatureCount; ++k) m.stats.inputs[k] = {rng.uniform(-5, 0), rng.uniform(1, 5)};
    m.stats.target = {2854, 11447};
    m.seed = 99;
    m.case_number = c;
    m.window_length = c <= 3 ? 24 : 0;
    m.report.final_loss = 0.125;
    m.report.epochs_run = 17;
    m.report.stop_reason = StopReason::MuExhausted;
    save_model(scratch("model.json"), m);
    const Model back = load_model(scratch("model.json"));
    CHECK(back.params == m.params);
    CHECK(back.stats == m.stats);
    CHECK(back.case_number == m.case_number);
    CHECK(back.report.stop_reason == StopReason::MuExhausted);
    const Vector x = testing::random_vector(rng, 8);
    if (m.params.spec.recurrent) {
      RnnState a = zero_state(m.params.spec), b = a;
      CHECK(rnn_step(m.params, x, a) == rnn_step(back.params, x, b));
    } else {
      CHECK(fnn_forward(m.params, x) == fnn_forward(back.params, x));
    }
  }
  csv::write_text(scratch("notmodel.json"), "{\"format\": \"other\"}");
  CHECK_THROWS_AS(load_model(scratch("notmodel.json")), Error);
  csv::write_text(scratch("garbage.json"), "{");
  CHECK_THROWS_AS(load_model(scratch("garbage.json")), Error);
}
