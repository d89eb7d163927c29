// Command-line front end: synth, prepare, train, forecast, evaluate, experiment.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stlf/csv.hpp"
#include "stlf/error.hpp"
#include "stlf/eval.hpp"
#include "stlf/kernels.hpp"
#include "stlf/model_io.hpp"
#include "stlf/pipeline.hpp"
#include "stlf/synth.hpp"

namespace fs = std::filesystem;
using namespace stlf;

namespace {

constexpr const char* kTrainFile = "train.csv";
constexpr const char* kTestFile = "test.csv";
constexpr const char* kStatsFile = "norm_stats.json";
constexpr const char* kModelFile = "model.json";

struct Shared {
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

struct TrainOptions {
  std::optional<int> case_number;
  std::string arch = "rnn";
  std::string activation = "tanh";
  std::vector<std::size_t> hidden{10, 10};
  std::string recurrence = "diagonal";
  std::size_t window = kDefaultWindowHours;
  LmConfig lm;
  bool stream_progress = false;
};

void add_lm_flags(CLI::App* cmd, TrainOptions& t) {
  cmd->add_option("--epochs", t.lm.max_epochs, "maximum LM epochs")->capture_default_str();
  cmd->add_option("--max-rows", t.lm.max_rows, "row cap per Jacobian, 0 disables")->capture_default_str();
  cmd->add_option("--mu0", t.lm.mu0, "initial damping")->capture_default_str();
  cmd->add_option("--mu-increase", t.lm.mu_increase)->capture_default_str();
  cmd->add_option("--mu-decrease", t.lm.mu_decrease)->capture_default_str();
  cmd->add_option("--mu-max", t.lm.mu_max)->capture_default_str();
  cmd->add_option("--gradient-tolerance", t.lm.gradient_tolerance)->capture_default_str();
  cmd->add_option("--loss-tolerance", t.lm.loss_tolerance)->capture_default_str();
  cmd->add_option("--window", t.window, "recurrent training window (hours)")->capture_default_str();
  cmd->add_option("--hidden", t.hidden, "hidden layer widths, e.g. 10,10")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_flag("--progress", t.stream_progress, "stream one line per LM trial to stdout");
}

// Writes the effective configuration (flags over config file over defaults).
void echo_config(const CLI::App& root, const fs::path& dir) {
  csv::write_text(dir / "effective_config.ini", root.config_to_str(true, true));
}

std::vector<FeatureRow> load_all_rows(const fs::path& data) {
  auto rows = csv::read_prepared(data / kTrainFile);
  auto test = csv::read_prepared(data / kTestFile);
  rows.insert(rows.end(), test.begin(), test.end());
  return rows;
}

Timestamp test_begin(const fs::path& data) {
  const auto test = csv::read_prepared(data / kTestFile);
  if (test.empty()) throw DataError("empty test split in " + data.string());
  return test.front().time;
}

NetworkSpec spec_from(const TrainOptions& t) {
  if (t.case_number) return case_spec(*t.case_number, t.hidden);
  NetworkSpec spec;
  if (t.arch != "rnn" && t.arch != "fnn") throw Error("--arch must be fnn or rnn");
  spec.recurrent = t.arch == "rnn";
  spec.recurrence_form = parse_recurrence_form(t.recurrence);
  const ActivationKind act = parse_activation(t.activation);
  spec.hidden_layers.clear();
  for (std::size_t n : t.hidden) spec.hidden_layers.push_back({n, act});
  spec.validate();
  return spec;
}

Model run_training(const TrainOptions& t, std::uint64_t seed, const fs::path& data,
                   const fs::path& out) {
  const auto train_rows = csv::read_prepared(data / kTrainFile);
  const NormStats stats = load_stats(data / kStatsFile);
  LmConfig lm = t.lm;
  lm.seed = seed;
  std::string log = "epoch,loss,mu,accepted\n";
  auto progress = [&](const EpochEvent& e) {
    std::string line = std::to_string(e.epoch) + ',' + csv::format_double(e.loss) + ',' +
                       csv::format_double(e.mu) + ',' + (e.accepted ? "1" : "0");
    if (t.stream_progress) std::cout << line << '\n';
    log += line + '\n';
  };
  Model m = train_model(spec_from(t), train_rows, stats, lm, t.window, t.case_number, progress);
  save_model(out / kModelFile, m);
  csv::write_text(out / "train_log.csv", log);
  return m;
}

void print_report(const Model& m, const fs::path& path) {
  std::cout << "model " << path.string() << ": " << m.report.epochs_run << " epochs, final sse "
            << csv::format_double(m.report.final_loss) << ", stop "
            << to_string(m.report.stop_reason) << '\n';
}

std::size_t default_origin(std::span<const FeatureRow> rows, Timestamp begin) {
  for (std::size_t i = kContextHours; i < rows.size(); ++i)
    if (rows[i].time >= begin && rows[i].hour == 0) return i;
  throw DataError("no forecast origin with 168 hours of context in the test split");
}

SeasonalReport report_for(const std::map<int, Model>& models, const std::vector<int>& cases,
                          const std::vector<FeatureRow>& rows, Timestamp begin) {
  std::vector<CaseModel> cms;
  for (int c : cases) {
    const auto it = models.find(c);
    cms.push_back({c, it == models.end() ? nullptr : &it->second});
  }
  const std::vector<ForecastMode> modes{ForecastMode::Recursive, ForecastMode::Static};
  return seasonal_report(cms, rows, begin, modes);
}

void write_report(const SeasonalReport& report, const fs::path& out, bool per_cell) {
  csv::write_text(out / "report.csv", report.to_csv());
  std::string text;
  for (std::size_t c = 0; c < report.cases.size(); ++c)
    text += "Case " + std::to_string(report.cases[c]) + ": " + case_description(report.cases[c]) + '\n';
  text += '\n' + report.to_text(ForecastMode::Recursive) + '\n' + report.to_text(ForecastMode::Static);
  std::string notes;
  for (const auto& cell : report.cells)
    if (!cell.mape)
      notes += std::string(to_string(cell.season)) + '/' + std::string(to_string(cell.horizon)) +
               "/case " + std::to_string(cell.case_number) + '/' +
               std::string(to_string(cell.mode)) + ": " + cell.note + '\n';
  if (!notes.empty()) text += "\nAbsent cells:\n" + notes;
  csv::write_text(out / "report.txt", text);
  std::cout << text;
  if (!per_cell) return;
  for (const auto& cell : report.cells)
    if (cell.result)
      csv::write_text(out / ("case" + std::to_string(cell.case_number)) / "forecasts" /
                          (std::string(to_string(cell.season)) + '_' +
                           std::string(to_string(cell.horizon)) + '_' +
                           std::string(to_string(cell.mode)) + ".csv"),
                      forecast_csv(*cell.result));
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-term load forecasting with Levenberg-Marquardt trained deep networks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML config file; command-line flags take precedence");
  Shared shared;
  app.add_option("--threads", shared.threads, "worker threads for parallel kernels");

  auto add_shared = [&](CLI::App* cmd, bool out_required) {
    cmd->add_option("--seed", shared.seed, "random seed")->capture_default_str();
    auto* o = cmd->add_option("--out", shared.out, "output location");
    if (out_required) o->required();
  };

  // synth
  SynthConfig synth;
  std::string synth_start = "2013-01-01 00:00";
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic load and weather CSVs");
  add_shared(synth_cmd, true);
  synth_cmd->add_option("--hours", synth.hours, "hours to generate (>= 169)")->capture_default_str();
  synth_cmd->add_option("--start", synth_start, "first timestamp")->capture_default_str();
  synth_cmd->add_option("--base-load", synth.base_load)->capture_default_str();
  synth_cmd->add_option("--daily-amp", synth.daily_amp)->capture_default_str();
  synth_cmd->add_option("--weekly-amp", synth.weekly_amp)->capture_default_str();
  synth_cmd->add_option("--annual-amp", synth.annual_amp)->capture_default_str();
  synth_cmd->add_option("--temp-coupling", synth.temp_coupling)->capture_default_str();
  synth_cmd->add_option("--weekend-depression", synth.weekend_depression)->capture_default_str();
  synth_cmd->add_option("--noise-sd", synth.noise_sd)->capture_default_str();

  // prepare
  std::string load_path, weather_path, holidays_path, split_at = "2014-01-01 00:00";
  auto* prep_cmd = app.add_subcommand("prepare", "clean, merge, extract features and split");
  add_shared(prep_cmd, true);
  prep_cmd->add_option("--load", load_path, "load CSV (timestamp,load_mw)")->required();
  prep_cmd->add_option("--weather", weather_path, "weather CSV (timestamp,dry_bulb_f,dew_point_f)")->required();
  prep_cmd->add_option("--holidays", holidays_path, "holiday list, one YYYY-MM-DD per line");
  prep_cmd->add_option("--split", split_at, "first timestamp of the test split")->capture_default_str();

  // train
  TrainOptions topt;
  std::string data_dir;
  auto* train_cmd = app.add_subcommand("train", "train one network with Levenberg-Marquardt");
  add_shared(train_cmd, true);
  train_cmd->add_option("--data", data_dir, "prepared dataset directory")->required();
  auto* case_opt = train_cmd->add_option("--case", topt.case_number, "experiment case 1..6")
                       ->check(CLI::Range(1, kCaseCount));
  train_cmd->add_option("--arch", topt.arch, "fnn or rnn")->excludes(case_opt)->capture_default_str();
  train_cmd->add_option("--activation", topt.activation, "sigmoid, tanh or relu")
      ->excludes(case_opt)
      ->capture_default_str();
  train_cmd->add_option("--recurrence", topt.recurrence, "diagonal or full")
      ->excludes(case_opt)
      ->capture_default_str();
  add_lm_flags(train_cmd, topt);

  // forecast
  std::string model_path, origin_text, horizon_text = "day", mode_text = "recursive";
  auto* fc_cmd = app.add_subcommand("forecast", "forecast a day or week from a trained model");
  add_shared(fc_cmd, false);
  fc_cmd->add_option("--model", model_path, "model file")->required();
  fc_cmd->add_option("--data", data_dir, "prepared dataset directory")->required();
  fc_cmd->add_option("--origin", origin_text, "first forecast hour (default: first test midnight)");
  fc_cmd->add_option("--horizon", horizon_text, "day or week")->capture_default_str();
  fc_cmd->add_option("--mode", mode_text, "recursive or static")->capture_default_str();

  // evaluate
  std::string forecast_path, models_dir;
  std::vector<int> cases{1, 2, 3, 4, 5, 6};
  auto* eval_cmd = app.add_subcommand("evaluate", "score a forecast file or build a seasonal report");
  add_shared(eval_cmd, false);
  auto* fopt = eval_cmd->add_option("--forecast", forecast_path, "forecast CSV to score");
  auto* mopt = eval_cmd->add_option("--models", models_dir, "directory with caseN/model.json");
  eval_cmd->add_option("--data", data_dir, "prepared dataset directory")->needs(mopt);
  eval_cmd->add_option("--cases", cases, "cases to include")->delimiter(',')->check(CLI::Range(1, kCaseCount));
  fopt->excludes(mopt);

  // experiment
  bool retrain = false;
  auto* exp_cmd = app.add_subcommand("experiment", "train the case grid and build the seasonal report");
  add_shared(exp_cmd, true);
  exp_cmd->add_option("--data", data_dir, "prepared dataset directory")->required();
  exp_cmd->add_option("--cases", cases, "cases to run, e.g. 1,2,6")
      ->delimiter(',')
      ->check(CLI::Range(1, kCaseCount))
      ->capture_default_str();
  exp_cmd->add_flag("--retrain", retrain, "ignore cached model files");
  TrainOptions eopt;
  add_lm_flags(exp_cmd, eopt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    kernels::set_threads(shared.threads);
    const fs::path out = shared.out;

    if (*synth_cmd) {
      synth.seed = shared.seed;
      synth.start = Timestamp::parse(synth_start);
      const auto s = generate(synth);
      csv::write_load(out / "load.csv", s.load);
      csv::write_weather(out / "weather.csv", s.dry_bulb, s.dew_point);
      echo_config(app, out);
      std::cout << (out / "load.csv").string() << ' ' << s.load.entries.size() << " rows\n"
                << (out / "weather.csv").string() << ' ' << s.dry_bulb.entries.size() << " rows\n";
    } else if (*prep_cmd) {
      const auto load = csv::read_load(load_path);
      const auto weather = csv::read_weather(weather_path);
      const HolidayCalendar cal = holidays_path.empty() ? HolidayCalendar{} : csv::read_holidays(holidays_path);
      const auto prepared = prepare(load, weather, cal, Timestamp::parse(split_at));
      csv::write_prepared(out / kTrainFile, prepared.train);
      csv::write_prepared(out / kTestFile, prepared.test);
      save_stats(out / kStatsFile, prepared.stats);
      echo_config(app, out);
      std::cout << (out / kTrainFile).string() << ' ' << prepared.train.size() << " rows\n"
                << (out / kTestFile).string() << ' ' << prepared.test.size() << " rows\n";
    } else if (*train_cmd) {
      const Model m = run_training(topt, shared.seed, data_dir, out);
      echo_config(app, out);
      print_report(m, out / kModelFile);
    } else if (*fc_cmd) {
      const Model m = load_model(model_path);
      const auto rows = load_all_rows(data_dir);
      const Horizon h = parse_horizon(horizon_text);
      const ForecastMode mode = parse_forecast_mode(mode_text);
      const ForecastResult r =
          origin_text.empty()
              ? forecast_horizon(m, rows, default_origin(rows, test_begin(data_dir)), h, mode)
              : forecast_horizon(m, rows, Timestamp::parse(origin_text), h, mode);
      const fs::path file = out.empty() ? fs::path("forecast.csv") : out;
      csv::write_text(file, forecast_csv(r));
      std::cout << file.string() << ' ' << r.forecast.size() << " rows, mode " << to_string(mode)
                << ", mape " << csv::format_double(r.mape) << "%\n";
    } else if (*eval_cmd) {
      if (!forecast_path.empty()) {
        std::vector<double> actual, forecast;
        std::istringstream in(csv::read_text(forecast_path));
        std::string line;
        std::getline(in, line);
        if (line.rfind("timestamp,actual_mw,forecast_mw", 0) != 0)
          throw ParseError(forecast_path, 1, "not a forecast file");
        std::size_t n = 1;
        while (std::getline(in, line)) {
          ++n;
          if (line.empty()) continue;
          std::istringstream fields(line);
          std::string ts, a, f;
          std::getline(fields, ts, ',');
          std::getline(fields, a, ',');
          std::getline(fields, f, ',');
          try {
            actual.push_back(csv::parse_double(a));
            forecast.push_back(csv::parse_double(f));
          } catch (const Error& e) {
            throw ParseError(forecast_path, n, e.what());
          }
        }
        std::cout << "mape " << csv::format_double(mape(actual, forecast)) << "%\n";
      } else if (!models_dir.empty()) {
        if (data_dir.empty()) throw Error("evaluate --models needs --data");
        std::map<int, Model> models;
        for (int c : cases) {
          const fs::path p = fs::path(models_dir) / ("case" + std::to_string(c)) / kModelFile;
          if (fs::exists(p)) models.emplace(c, load_model(p));
        }
        const auto rows = load_all_rows(data_dir);
        const auto report = report_for(models, cases, rows, test_begin(data_dir));
        write_report(report, out.empty() ? fs::path(models_dir) : out, false);
      } else {
        throw Error("evaluate needs --forecast or --models");
      }
    } else if (*exp_cmd) {
      fs::create_directories(out);
      echo_config(app, out);
      std::map<int, Model> models;
      for (int c : cases) {
        const fs::path dir = out / ("case" + std::to_string(c));
        const fs::path file = dir / kModelFile;
        try {
          if (!retrain && fs::exists(file)) {
            models.emplace(c, load_model(file));
            std::cout << "case " << c << ": reusing " << file.string() << '\n';
          } else {
            TrainOptions t = eopt;
            t.case_number = c;
            models.emplace(c, run_training(t, shared.seed, data_dir, dir));
            std::cout << "case " << c << " (" << case_description(c) << "): ";
            print_report(models.at(c), file);
          }
        } catch (const Error& e) {
          std::cerr << "stlf: case " << c << " failed: " << one_line(e.what()) << '\n';
        }
      }
      const auto rows = load_all_rows(data_dir);
      write_report(report_for(models, cases, rows, test_begin(data_dir)), out, true);
    }
  } catch (const std::exception& e) {
    std::cerr << "stlf: error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}
