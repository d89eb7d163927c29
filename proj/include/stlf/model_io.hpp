#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "stlf/features.hpp"
#include "stlf/network.hpp"
#include "stlf/optimizer.hpp"

namespace stlf {

// A trained forecaster: network, the scaling it was trained with, and
// enough provenance to reproduce it.
struct Model {
  NetworkParams params;
  NormStats stats;
  std::uint64_t seed = 0;
  std::optional<int> case_number;  // 1..6 when built from a named case
  std::size_t window_length = 0;   // recurrent training window, 0 for feedforward
  TrainReport report;
};

inline constexpr int kModelFormatVersion = 1;

nlohmann::json stats_to_json(const NormStats& stats);
NormStats stats_from_json(const nlohmann::json& j);

nlohmann::json spec_to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

void save_stats(const std::filesystem::path& path, const NormStats& stats);
NormStats load_stats(const std::filesystem::path& path);

}  // namespace stlf
