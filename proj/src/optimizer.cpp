#include "stlf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stlf/error.hpp"
#include "stlf/kernels.hpp"
#include "stlf/random.hpp"

namespace stlf {

void LmConfig::validate() const {
  if (!(mu0 > 0.0)) throw Error("lm config: mu0 must be positive");
  if (!(mu_increase > 1.0) || !(mu_decrease > 1.0))
    throw Error("lm config: mu factors must exceed 1");
  if (!(mu_max > mu0)) throw Error("lm config: mu_max must exceed mu0");
  if (!(mu_min > 0.0) || !(mu_min <= mu0)) throw Error("lm config: need 0 < mu_min <= mu0");
  if (max_epochs < 1) throw Error("lm config: max_epochs must be >= 1");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxEpochs:
      return "max_epochs";
    case StopReason::GradientTolerance:
      return "gradient_tolerance";
    case StopReason::MuExhausted:
      return "mu_exhausted";
    case StopReason::LossTolerance:
      return "loss_tolerance";
  }
  return "unknown";
}

std::size_t TrainingSet::rows() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.target.size();
  for (const auto& w : windows)
    for (const auto& t : w.targets) n += t.size();
  return n;
}

double sse_loss(std::span<const double> residuals) { return dot(residuals, residuals); }

Vector lm_step(std::span<const double> weights, const Matrix& jacobian,
               std::span<const double> residuals, double mu, Execution exec) {
  if (jacobian.rows() != residuals.size())
    throw DimensionError("lm_step: Jacobian rows do not match residual length");
  if (jacobian.cols() != weights.size())
    throw DimensionError("lm_step: Jacobian columns do not match weight count");
  const Matrix jtj = kernels::gram(jacobian, exec);
  const Vector g = kernels::gradient(jacobian, residuals, exec);
  const Vector delta = solve_damped(jtj, mu, g);
  Vector next(weights.begin(), weights.end());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] -= delta[i];
  return next;
}

namespace {

// Sorted random subset of k indices out of n (partial Fisher-Yates).
std::vector<std::size_t> pick(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

struct Problem {
  NetworkSpec spec;
  const TrainingSet& data;
  Execution exec;

  JacobianResult jacobian(const Vector& w) const {
    const NetworkParams p = unflatten_params(spec, w);
    return spec.recurrent ? rnn_jacobian(p, data.windows, exec) : fnn_jacobian(p, data.samples, exec);
  }
  Vector residuals(const Vector& w) const {
    const NetworkParams p = unflatten_params(spec, w);
    return spec.recurrent ? rnn_residuals(p, data.windows, exec)
                          : fnn_residuals(p, data.samples, exec);
  }
};

}  // namespace

TrainingSet cap_rows(const TrainingSet& data, std::size_t max_rows, std::uint64_t seed) {
  if (max_rows == 0 || data.rows() <= max_rows) return data;
  TrainingSet out;
  if (!data.samples.empty()) {
    const std::size_t per = data.samples.front().target.size();
    const std::size_t keep = std::max<std::size_t>(1, max_rows / per);
    for (std::size_t i : pick(data.samples.size(), keep, seed)) out.samples.push_back(data.samples[i]);
  }
  if (!data.windows.empty()) {
    const auto& w0 = data.windows.front();
    const std::size_t per = w0.targets.size() * (w0.targets.empty() ? 1 : w0.targets.front().size());
    const std::size_t keep = std::max<std::size_t>(1, max_rows / std::max<std::size_t>(per, 1));
    for (std::size_t i : pick(data.windows.size(), std::min(keep, data.windows.size()), seed))
      out.windows.push_back(data.windows[i]);
  }
  return out;
}

TrainResult train(const NetworkSpec& spec, const TrainingSet& data, const LmConfig& config,
                  const ProgressFn& progress) {
  return train_from(init_params(spec, config.seed), data, config, progress);
}

TrainResult train_from(const NetworkParams& initial, const TrainingSet& data,
                       const LmConfig& config, const ProgressFn& progress) {
  config.validate();
  const NetworkSpec& spec = initial.spec;
  if (spec.recurrent ? data.windows.empty() : data.samples.empty())
    throw DataError("train: empty training set");

  const TrainingSet used = cap_rows(data, config.max_rows, config.seed);
  const Problem problem{spec, used, config.exec};

  LmState state;
  state.weights = flatten_params(initial);
  state.mu = config.mu0;

  JacobianResult je = problem.jacobian(state.weights);
  double loss = sse_loss(je.residuals);
  if (!std::isfinite(loss)) throw Error("train: non-finite loss at initialization");
  state.loss_history.push_back(loss);

  TrainReport report;
  report.stop_reason = StopReason::MaxEpochs;
  while (true) {
    if (loss <= config.loss_tolerance) {
      report.stop_reason = StopReason::LossTolerance;
      break;
    }
    if (state.epoch >= config.max_epochs) {
      report.stop_reason = StopReason::MaxEpochs;
      break;
    }
    const Matrix jtj = kernels::gram(je.jacobian, config.exec);
    const Vector g = kernels::gradient(je.jacobian, je.residuals, config.exec);
    if (norm_inf(g) < config.gradient_tolerance) {
      report.stop_reason = StopReason::GradientTolerance;
      break;
    }

    // Trial steps at increasing damping until one lowers the loss.
    bool accepted = false;
    while (!accepted) {
      Vector candidate;
      double trial = std::numeric_limits<double>::infinity();
      try {
        const Vector delta = solve_damped(jtj, state.mu, g);
        candidate = state.weights;
        for (std::size_t i = 0; i < candidate.size(); ++i) candidate[i] -= delta[i];
        trial = sse_loss(problem.residuals(candidate));
      } catch (const FactorizationError&) {
      }
      accepted = std::isfinite(trial) && trial < loss;
      if (progress) progress({state.epoch + 1, accepted ? trial : loss, state.mu, accepted});
      if (accepted) {
        state.weights = std::move(candidate);
        state.mu = std::max(state.mu / config.mu_decrease, config.mu_min);
      } else {
        state.mu *= config.mu_increase;
        if (state.mu > config.mu_max) break;
      }
    }
    if (!accepted) {
      report.stop_reason = StopReason::MuExhausted;
      break;
    }
    ++state.epoch;
    je = problem.jacobian(state.weights);
    loss = sse_loss(je.residuals);
    state.loss_history.push_back(loss);
  }

  report.final_loss = loss;
  report.epochs_run = state.epoch;
  report.loss_history = std::move(state.loss_history);
  return {unflatten_params(spec, state.weights), std::move(report)};
}

}  // namespace stlf
