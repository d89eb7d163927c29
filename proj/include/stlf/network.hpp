#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stlf/activation.hpp"
#include "stlf/numerics.hpp"

namespace stlf {

enum class RecurrenceForm { Diagonal, FullMatrix };

std::string_view to_string(RecurrenceForm form);
RecurrenceForm parse_recurrence_form(std::string_view name);

struct HiddenLayer {
  std::size_t neurons = 10;
  ActivationKind activation = ActivationKind::Tanh;
  bool operator==(const HiddenLayer&) const = default;
};

// Layered network shape. The output layer is always linear.
struct NetworkSpec {
  std::size_t input_dim = 8;
  std::vector<HiddenLayer> hidden_layers{{10, ActivationKind::Tanh},
                                         {10, ActivationKind::Tanh}};
  std::size_t output_dim = 1;
  bool recurrent = false;
  RecurrenceForm recurrence_form = RecurrenceForm::Diagonal;

  void validate() const;
  std::size_t parameter_count() const;
  bool operator==(const NetworkSpec&) const = default;
};

// One layer: weights (out x in), bias, and, for recurrent hidden layers,
// the time-delay weights. Diagonal form keeps one self-feedback weight per
// neuron in `recurrent_diag`; FullMatrix form keeps `recurrent_full` (out x out).
struct LayerParams {
  ActivationKind activation = ActivationKind::Linear;
  Matrix weights;
  Vector bias;
  Vector recurrent_diag;
  Matrix recurrent_full;
  bool operator==(const LayerParams&) const = default;
};

struct NetworkParams {
  NetworkSpec spec;
  std::vector<LayerParams> layers;  // hidden layers followed by the output layer
  bool operator==(const NetworkParams&) const = default;
};

// Previous-step outputs of every hidden layer.
using RnnState = std::vector<Vector>;

struct Sample {
  Vector input;
  Vector target;
};

// A contiguous training sequence for the recurrent network; the state at
// its first step is zero.
struct Window {
  std::vector<Vector> inputs;
  std::vector<Vector> targets;
};

struct JacobianResult {
  Matrix jacobian;   // one row per residual, columns in flatten_params order
  Vector residuals;  // forecast - target
};

enum class Execution { Serial, Parallel };

// Glorot-uniform weights, zero biases and zero recurrent weights.
NetworkParams init_params(const NetworkSpec& spec, std::uint64_t seed);
NetworkParams zero_params(const NetworkSpec& spec);

RnnState zero_state(const NetworkSpec& spec);

Vector fnn_forward(const NetworkParams& params, std::span<const double> input);

// Advances the recurrent network one step, updating `state` in place.
Vector rnn_step(const NetworkParams& params, std::span<const double> input, RnnState& state);

std::pair<std::vector<Vector>, RnnState> rnn_forward(const NetworkParams& params,
                                                     std::span<const Vector> sequence,
                                                     const RnnState& initial_state);

// Flattened layout, layer by layer (hidden layers first, output last):
// weights row-major, then biases, then recurrent weights (hidden layers of
// recurrent networks only; n values for Diagonal, n*n row-major for FullMatrix).
Vector flatten_params(const NetworkParams& params);
NetworkParams unflatten_params(const NetworkSpec& spec, std::span<const double> values);

JacobianResult fnn_jacobian(const NetworkParams& params, std::span<const Sample> batch,
                            Execution exec = Execution::Parallel);
// Full backpropagation through time; one residual row per (window, step, output).
JacobianResult rnn_jacobian(const NetworkParams& params, std::span<const Window> windows,
                            Execution exec = Execution::Parallel);

// Residuals only, in the same row order as the Jacobians above.
Vector fnn_residuals(const NetworkParams& params, std::span<const Sample> batch,
                     Execution exec = Execution::Parallel);
Vector rnn_residuals(const NetworkParams& params, std::span<const Window> windows,
                     Execution exec = Execution::Parallel);

}  // namespace stlf
