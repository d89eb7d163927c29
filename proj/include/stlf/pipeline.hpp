#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlf/csv.hpp"
#include "stlf/features.hpp"
#include "stlf/model_io.hpp"
#include "stlf/optimizer.hpp"

namespace stlf {

inline constexpr int kCaseCount = 6;
// Recurrent training windows match the 168-hour state replay used when forecasting.
inline constexpr std::size_t kDefaultWindowHours = 168;

// Cases 1-3: recurrent network with sigmoid, tanh, relu hidden layers.
// Cases 4-6: feedforward network with sigmoid, tanh, relu hidden layers.
NetworkSpec case_spec(int case_number, std::span<const std::size_t> hidden = {});
std::string case_description(int case_number);

struct PreparedData {
  std::vector<FeatureRow> train;
  std::vector<FeatureRow> test;
  NormStats stats;
};

// clean -> merge -> extract_features -> split -> fit_normalizer(train)
PreparedData prepare(const HourlySeries& load, const csv::Weather& weather,
                     const HolidayCalendar& calendar, Timestamp boundary);

TrainingSet training_set(std::span<const FeatureRow> rows, const NormStats& stats,
                         const NetworkSpec& spec, std::size_t window_length);

Model train_model(const NetworkSpec& spec, std::span<const FeatureRow> train_rows,
                  const NormStats& stats, const LmConfig& config, std::size_t window_length,
                  std::optional<int> case_number = std::nullopt, const ProgressFn& progress = {});

}  // namespace stlf
