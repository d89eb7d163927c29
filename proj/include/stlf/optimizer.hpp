#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "stlf/network.hpp"
#include "stlf/numerics.hpp"

namespace stlf {

struct LmConfig {
  double mu0 = 1e-3;
  double mu_increase = 10.0;
  double mu_decrease = 10.0;
  double mu_max = 1e10;
  // Lower clamp applied after a decrease so mu stays strictly positive.
  double mu_min = 1e-20;
  std::size_t max_epochs = 10000;
  double gradient_tolerance = 1e-7;
  double loss_tolerance = 0.0;
  // Residual rows used per Jacobian; larger training sets are subsampled
  // deterministically from `seed`. 0 disables the cap.
  std::size_t max_rows = 4096;
  std::uint64_t seed = 1;
  Execution exec = Execution::Parallel;

  void validate() const;
};

struct LmState {
  Vector weights;
  double mu = 0.0;
  std::size_t epoch = 0;
  std::vector<double> loss_history;  // initial loss, then every accepted loss
};

enum class StopReason { MaxEpochs, GradientTolerance, MuExhausted, LossTolerance };
std::string_view to_string(StopReason reason);

struct TrainReport {
  double final_loss = 0.0;
  std::size_t epochs_run = 0;  // completed epochs, i.e. accepted steps
  StopReason stop_reason = StopReason::MaxEpochs;
  std::vector<double> loss_history;
};

// One line of training progress: every trial step, accepted or not.
struct EpochEvent {
  std::size_t epoch;
  double loss;
  double mu;
  bool accepted;
};
using ProgressFn = std::function<void(const EpochEvent&)>;

// Feedforward networks train on `samples`, recurrent ones on `windows`.
struct TrainingSet {
  std::vector<Sample> samples;
  std::vector<Window> windows;

  std::size_t rows() const;
};

double sse_loss(std::span<const double> residuals);

// w - (J^T J + mu I)^{-1} J^T e
Vector lm_step(std::span<const double> weights, const Matrix& jacobian,
               std::span<const double> residuals, double mu,
               Execution exec = Execution::Parallel);

// Applies the row cap: keeps a seeded random subset of samples, or of whole
// windows for recurrent training, preserving the original order.
TrainingSet cap_rows(const TrainingSet& data, std::size_t max_rows, std::uint64_t seed);

struct TrainResult {
  NetworkParams params;
  TrainReport report;
};

TrainResult train(const NetworkSpec& spec, const TrainingSet& data, const LmConfig& config,
                  const ProgressFn& progress = {});
// Starts from the given parameters instead of a seeded initialization.
TrainResult train_from(const NetworkParams& initial, const TrainingSet& data,
                       const LmConfig& config, const ProgressFn& progress = {});

}  // namespace stlf
