#include "stlf/pipeline.hpp"

#include "stlf/error.hpp"

namespace stlf {

namespace {

ActivationKind case_activation(int c) {
  switch ((c - 1) % 3) {
    case 0:
      return ActivationKind::Sigmoid;
    case 1:
      return ActivationKind::Tanh;
    default:
      return ActivationKind::ReLU;
  }
}

void check_case(int c) {
  if (c < 1 || c > kCaseCount)
    throw Error("unknown case " + std::to_string(c) + " (expected 1..6)");
}

}  // namespace

NetworkSpec case_spec(int case_number, std::span<const std::size_t> hidden) {
  check_case(case_number);
  NetworkSpec spec;
  spec.recurrent = case_number <= 3;
  const ActivationKind act = case_activation(case_number);
  spec.hidden_layers.clear();
  if (hidden.empty()) {
    spec.hidden_layers = {{10, act}, {10, act}};
  } else {
    for (std::size_t n : hidden) spec.hidden_layers.push_back({n, act});
  }
  spec.validate();
  return spec;
}

std::string case_description(int case_number) {
  check_case(case_number);
  return std::string(case_number <= 3 ? "Deep-RNN" : "Deep-FNN") + " with " +
         std::string(to_string(case_activation(case_number)));
}

PreparedData prepare(const HourlySeries& load, const csv::Weather& weather,
                     const HolidayCalendar& calendar, Timestamp boundary) {
  const MergedTable merged = merge(clean(load), clean(weather.dry_bulb), clean(weather.dew_point));
  const auto rows = extract_features(merged, calendar);
  auto [train, test] = split(rows, boundary);
  PreparedData out;
  out.stats = fit_normalizer(train);
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

TrainingSet training_set(std::span<const FeatureRow> rows, const NormStats& stats,
                         const NetworkSpec& spec, std::size_t window_length) {
  TrainingSet set;
  if (spec.recurrent) {
    set.windows = make_windows(rows, stats, window_length);
    if (set.windows.empty())
      throw DataError("not enough consecutive training rows for one window of " +
                      std::to_string(window_length) + " hours");
  } else {
    set.samples = normalize(rows, stats);
  }
  return set;
}

Model train_model(const NetworkSpec& spec, std::span<const FeatureRow> train_rows,
                  const NormStats& stats, const LmConfig& config, std::size_t window_length,
                  std::optional<int> case_number, const ProgressFn& progress) {
  if (spec.input_dim != kFeatureCount)
    throw Error("forecasting networks take " + std::to_string(kFeatureCount) + " inputs");
  if (spec.output_dim != 1) throw Error("forecasting networks have a single output");
  auto result = train(spec, training_set(train_rows, stats, spec, window_length), config, progress);
  Model m;
  m.params = std::move(result.params);
  m.stats = stats;
  m.seed = config.seed;
  m.case_number = case_number;
  m.window_length = spec.recurrent ? window_length : 0;
  m.report = std::move(result.report);
  return m;
}

}  // namespace stlf
