#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(STLF_TEST_WORK_DIR) / "cli";

int cli(const std::string& args) {
  fs::create_directories(kWork);
  const std::string cmd = std::string(STLF_CLI_PATH) + " " + args + " > " + (kWork / "last.log").string() + " 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// One small prepared dataset shared across cases.
const fs::path& prepared() {
  static const fs::path dir = [] {
    const fs::path d = kWork / "shared";
    fs::remove_all(d);
    const std::string D = d.string();
    REQUIRE(cli("synth --hours 4000 --seed 3 --out " + D + "/raw") == 0);
    REQUIRE(cli("prepare --load " + D + "/raw/load.csv --weather " + D + "/raw/weather.csv --split \"2013-05-01 00:00\" --out " + D + "/prep") == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("cli rejects too few synthetic hours") {
  CHECK(cli("synth --hours 100 --out " + (kWork / "short").string()) != 0);
  CHECK(slurp(kWork / "last.log").find("stlf: error:") != std::string::npos);
}

TEST_CASE("cli reports a missing weather file") {
  const auto& d = prepared();
  CHECK(cli("prepare --load " + (d / "raw/load.csv").string() + " --weather " + (kWork / "nope.csv").string() +
            " --out " + (kWork / "missing").string()) != 0);
  CHECK(slurp(kWork / "last.log").find("not found") != std::string::npos);
}

TEST_CASE("cli rejects unknown case numbers") {
  CHECK(cli("train --data " + (prepared() / "prep").string() + " --case 9 --out " + (kWork / "bad").string()) != 0);
}

TEST_CASE("prepare leaves its inputs untouched") {
  const auto& d = prepared();
  const std::string load_before = slurp(d / "raw/load.csv");
  const std::string weather_before = slurp(d / "raw/weather.csv");
  REQUIRE(cli("prepare --load " + (d / "raw/load.csv").string() + " --weather " + (d / "raw/weather.csv").string() +
              " --split \"2013-05-01 00:00\" --out " + (kWork / "prep2").string()) == 0);
  CHECK(slurp(d / "raw/load.csv") == load_before);
  CHECK(slurp(d / "raw/weather.csv") == weather_before);
  CHECK(slurp(kWork / "prep2/train.csv") == slurp(d / "prep/train.csv"));
}

TEST_CASE("same seed gives identical training output") {
  const std::string data = (prepared() / "prep").string();
  REQUIRE(cli("train --data " + data + " --case 5 --epochs 10 --seed 4 --out " + (kWork / "m1").string()) == 0);
  REQUIRE(cli("train --data " + data + " --case 5 --epochs 10 --seed 4 --out " + (kWork / "m2").string()) == 0);
  CHECK(slurp(kWork / "m1/model.json") == slurp(kWork / "m2/model.json"));
  CHECK(slurp(kWork / "m1/train_log.csv") == slurp(kWork / "m2/train_log.csv"));
  REQUIRE(cli("train --data " + data + " --case 5 --epochs 10 --seed 5 --out " + (kWork / "m3").string()) == 0);
  CHECK(slurp(kWork / "m1/model.json") != slurp(kWork / "m3/model.json"));
}

TEST_CASE("forecast and evaluate agree on the error") {
  const std::string data = (prepared() / "prep").string();
  REQUIRE(cli("train --data " + data + " --case 4 --epochs 10 --seed 4 --out " + (kWork / "m4").string()) == 0);
  const fs::path fc = kWork / "fc.csv";
  REQUIRE(cli("forecast --model " + (kWork / "m4/model.json").string() + " --data " + data +
              " --horizon day --mode static --out " + fc.string()) == 0);
  const std::string text = slurp(fc);
  CHECK(text.rfind("timestamp,actual_mw,forecast_mw,horizon,mode\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 25);
  REQUIRE(cli("evaluate --forecast " + fc.string()) == 0);
  CHECK(slurp(kWork / "last.log").find("mape ") != std::string::npos);
}

TEST_CASE("experiment with a single case gives a single-column report") {
  const fs::path out = kWork / "single";
  fs::remove_all(out);
  REQUIRE(cli("experiment --data " + (prepared() / "prep").string() + " --cases 2 --epochs 3 --max-rows 512 --out " +
              out.string()) == 0);
  const std::string report = slurp(out / "report.csv");
  std::istringstream in(report);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",2,") != std::string::npos);
  }
  CHECK(rows == 16);
  const std::string text = slurp(out / "report.txt");
  CHECK(text.find("Case 2") != std::string::npos);
  CHECK(text.find("Case 1") == std::string::npos);
  CHECK(fs::exists(out / "case2/model.json"));
}
