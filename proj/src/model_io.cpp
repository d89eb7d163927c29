#include "stlf/model_io.hpp"

#include "stlf/csv.hpp"
#include "stlf/error.hpp"

namespace stlf {

using nlohmann::json;

namespace {

json range_json(const ColumnRange& r) { return {{"min", r.min}, {"max", r.max}}; }

ColumnRange range_from(const json& j) { return {j.at("min").get<double>(), j.at("max").get<double>()}; }

StopReason parse_stop_reason(const std::string& s) {
  for (auto r : {StopReason::MaxEpochs, StopReason::GradientTolerance, StopReason::MuExhausted,
                 StopReason::LossTolerance})
    if (to_string(r) == s) return r;
  throw Error("unknown stop reason '" + s + "'");
}

template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(what + ": " + e.what());
  }
}

}  // namespace

json stats_to_json(const NormStats& stats) {
  json inputs = json::array();
  for (std::size_t c = 0; c < kFeatureCount; ++c) {
    json col = range_json(stats.inputs[c]);
    col["name"] = std::string(kFeatureNames[c]);
    inputs.push_back(col);
  }
  return {{"inputs", inputs}, {"target", range_json(stats.target)}};
}

NormStats stats_from_json(const json& j) {
  return guarded("normalization statistics", [&] {
    NormStats s;
    const auto& inputs = j.at("inputs");
    if (inputs.size() != kFeatureCount) throw Error("expected 8 input columns");
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      if (inputs[c].at("name").get<std::string>() != kFeatureNames[c])
        throw Error("input column " + std::to_string(c) + " should be '" +
                    std::string(kFeatureNames[c]) + "'");
      s.inputs[c] = range_from(inputs[c]);
    }
    s.target = range_from(j.at("target"));
    return s;
  });
}

json spec_to_json(const NetworkSpec& spec) {
  json hidden = json::array();
  for (const auto& h : spec.hidden_layers)
    hidden.push_back({{"neurons", h.neurons}, {"activation", std::string(to_string(h.activation))}});
  return {{"input_dim", spec.input_dim},
          {"hidden_layers", hidden},
          {"output_dim", spec.output_dim},
          {"output_activation", "linear"},
          {"recurrent", spec.recurrent},
          {"recurrence_form", std::string(to_string(spec.recurrence_form))}};
}

NetworkSpec spec_from_json(const json& j) {
  return guarded("network spec", [&] {
    NetworkSpec s;
    s.input_dim = j.at("input_dim").get<std::size_t>();
    s.hidden_layers.clear();
    for (const auto& h : j.at("hidden_layers"))
      s.hidden_layers.push_back(
          {h.at("neurons").get<std::size_t>(), parse_activation(h.at("activation").get<std::string>())});
    s.output_dim = j.at("output_dim").get<std::size_t>();
    s.recurrent = j.at("recurrent").get<bool>();
    s.recurrence_form = parse_recurrence_form(j.at("recurrence_form").get<std::string>());
    s.validate();
    return s;
  });
}

json model_to_json(const Model& m) {
  return {{"format", "stlf-model"},
          {"format_version", kModelFormatVersion},
          {"case", m.case_number ? json(*m.case_number) : json(nullptr)},
          {"seed", m.seed},
          {"spec", spec_to_json(m.params.spec)},
          {"normalization", stats_to_json(m.stats)},
          {"parameters", flatten_params(m.params)},
          {"training",
           {{"window_length", m.window_length},
            {"final_loss", m.report.final_loss},
            {"epochs_run", m.report.epochs_run},
            {"stop_reason", std::string(to_string(m.report.stop_reason))}}}};
}

Model model_from_json(const json& j) {
  return guarded("model file", [&] {
    if (j.at("format").get<std::string>() != "stlf-model") throw Error("not a model file");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw Error("unsupported model format version " + std::to_string(version));
    Model m;
    const NetworkSpec spec = spec_from_json(j.at("spec"));
    m.params = unflatten_params(spec, j.at("parameters").get<std::vector<double>>());
    m.stats = stats_from_json(j.at("normalization"));
    m.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("case").is_null()) m.case_number = j.at("case").get<int>();
    const auto& t = j.at("training");
    m.window_length = t.at("window_length").get<std::size_t>();
    m.report.final_loss = t.at("final_loss").get<double>();
    m.report.epochs_run = t.at("epochs_run").get<std::size_t>();
    m.report.stop_reason = parse_stop_reason(t.at("stop_reason").get<std::string>());
    return m;
  });
}

void save_model(const std::filesystem::path& path, const Model& model) {
  csv::write_text(path, model_to_json(model).dump(2) + "\n");
}

Model load_model(const std::filesystem::path& path) {
  const std::string text = csv::read_text(path);
  const json j = guarded(path.string(), [&] { return json::parse(text); });
  try {
    return model_from_json(j);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_stats(const std::filesystem::path& path, const NormStats& stats) {
  csv::write_text(path, stats_to_json(stats).dump(2) + "\n");
}

NormStats load_stats(const std::filesystem::path& path) {
  const std::string text = csv::read_text(path);
  return stats_from_json(guarded(path.string(), [&] { return json::parse(text); }));
}

}  // namespace stlf
