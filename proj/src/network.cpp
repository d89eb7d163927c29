#include "stlf/network.hpp"

#include <cmath>
#include <string>

#include "stlf/error.hpp"
#include "stlf/kernels.hpp"
#include "stlf/random.hpp"

namespace stlf {

std::string_view to_string(RecurrenceForm form) {
  return form == RecurrenceForm::Diagonal ? "diagonal" : "full";
}

RecurrenceForm parse_recurrence_form(std::string_view name) {
  if (name == "diagonal") return RecurrenceForm::Diagonal;
  if (name == "full") return RecurrenceForm::FullMatrix;
  throw Error("unknown recurrence form '" + std::string(name) + "'");
}

void NetworkSpec::validate() const {
  if (input_dim < 1) throw Error("network spec: input_dim must be >= 1");
  if (output_dim < 1) throw Error("network spec: output_dim must be >= 1");
  for (const auto& h : hidden_layers) {
    if (h.neurons < 1) throw Error("network spec: hidden layers need at least one neuron");
  }
  if (recurrent && hidden_layers.empty())
    throw Error("network spec: a recurrent network needs a hidden layer");
}

std::size_t NetworkSpec::parameter_count() const {
  std::size_t count = 0;
  std::size_t in = input_dim;
  for (const auto& h : hidden_layers) {
    count += h.neurons * in + h.neurons;
    if (recurrent)
      count += recurrence_form == RecurrenceForm::Diagonal ? h.neurons : h.neurons * h.neurons;
    in = h.neurons;
  }
  return count + output_dim * in + output_dim;
}

namespace {

bool is_recurrent_layer(const NetworkParams& p, std::size_t l) {
  return p.spec.recurrent && l + 1 < p.layers.size();
}

void check_input(const NetworkParams& p, std::span<const double> input) {
  if (input.size() != p.spec.input_dim)
    throw DimensionError("network input has length " + std::to_string(input.size()) +
                         ", expected " + std::to_string(p.spec.input_dim));
}

// net = W x + b
void affine(const LayerParams& layer, std::span<const double> x, Vector& net) {
  const std::size_t n = layer.weights.rows();
  net.resize(n);
  for (std::size_t j = 0; j < n; ++j) net[j] = dot(layer.weights.row(j), x) + layer.bias[j];
}

void add_recurrence(const LayerParams& layer, RecurrenceForm form,
                    std::span<const double> prev, Vector& net) {
  if (form == RecurrenceForm::Diagonal) {
    for (std::size_t j = 0; j < net.size(); ++j) net[j] += prev[j] * layer.recurrent_diag[j];
  } else {
    for (std::size_t j = 0; j < net.size(); ++j) net[j] += dot(layer.recurrent_full.row(j), prev);
  }
}

// Start offsets of each layer's blocks inside the flattened vector.
struct LayerOffsets {
  std::size_t weights, bias, recurrent;
};

std::vector<LayerOffsets> offsets(const NetworkParams& p) {
  std::vector<LayerOffsets> out;
  std::size_t at = 0;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& layer = p.layers[l];
    LayerOffsets o{};
    o.weights = at;
    at += layer.weights.rows() * layer.weights.cols();
    o.bias = at;
    at += layer.bias.size();
    o.recurrent = at;
    if (is_recurrent_layer(p, l))
      at += p.spec.recurrence_form == RecurrenceForm::Diagonal
                ? layer.recurrent_diag.size()
                : layer.recurrent_full.rows() * layer.recurrent_full.cols();
    out.push_back(o);
  }
  return out;
}

// Forward trace of one sequence: pre-activations and outputs per step and layer.
struct Trace {
  std::vector<std::vector<Vector>> net;  // [step][layer]
  std::vector<std::vector<Vector>> out;  // [step][layer]
};

Trace trace_sequence(const NetworkParams& p, std::span<const Vector> inputs) {
  const std::size_t layers = p.layers.size();
  Trace tr;
  tr.net.assign(inputs.size(), std::vector<Vector>(layers));
  tr.out.assign(inputs.size(), std::vector<Vector>(layers));
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    check_input(p, inputs[t]);
    for (std::size_t l = 0; l < layers; ++l) {
      const auto& layer = p.layers[l];
      std::span<const double> x = l == 0 ? std::span<const double>(inputs[t]) : tr.out[t][l - 1];
      Vector& net = tr.net[t][l];
      affine(layer, x, net);
      if (is_recurrent_layer(p, l) && t > 0)
        add_recurrence(layer, p.spec.recurrence_form, tr.out[t - 1][l], net);
      Vector& y = tr.out[t][l];
      y.resize(net.size());
      for (std::size_t j = 0; j < net.size(); ++j) y[j] = activate(layer.activation, net[j]);
    }
  }
  return tr;
}

// Writes d(output k at step t)/d(params) into `row` by backpropagating from
// step t to step 0. `row` must be zeroed.
void backprop_row(const NetworkParams& p, const std::vector<LayerOffsets>& off,
                  std::span<const Vector> inputs, const Trace& tr, std::size_t t,
                  std::size_t k, std::span<double> row) {
  const std::size_t L = p.layers.size() - 1;  // output layer index
  const bool diag = p.spec.recurrence_form == RecurrenceForm::Diagonal;
  std::vector<Vector> delta(L + 1), delta_later(L);
  for (std::size_t l = 0; l < L; ++l) delta_later[l].assign(p.layers[l].bias.size(), 0.0);

  auto accumulate = [&](std::size_t l, std::size_t s, const Vector& d) {
    std::span<const double> x = l == 0 ? std::span<const double>(inputs[s]) : tr.out[s][l - 1];
    const std::size_t in = x.size();
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d[j] == 0.0) continue;
      double* w = row.data() + off[l].weights + j * in;
      for (std::size_t i = 0; i < in; ++i) w[i] += d[j] * x[i];
      row[off[l].bias + j] += d[j];
    }
    if (is_recurrent_layer(p, l) && s > 0) {
      const Vector& prev = tr.out[s - 1][l];
      const std::size_t n = d.size();
      for (std::size_t j = 0; j < n; ++j) {
        if (diag) {
          row[off[l].recurrent + j] += d[j] * prev[j];
        } else {
          for (std::size_t m = 0; m < n; ++m) row[off[l].recurrent + j * n + m] += d[j] * prev[m];
        }
      }
    }
  };

  for (std::size_t s = t + 1; s-- > 0;) {
    const bool at_output = s == t;
    if (at_output) {
      delta[L].assign(p.spec.output_dim, 0.0);
      delta[L][k] = 1.0;  // linear output
      accumulate(L, s, delta[L]);
    }
    for (std::size_t l = L; l-- > 0;) {
      const auto& layer = p.layers[l];
      const std::size_t n = layer.bias.size();
      Vector g(n, 0.0);
      if (l + 1 < L || at_output) {
        const auto& above = p.layers[l + 1];
        const Vector& d_above = delta[l + 1];
        for (std::size_t r = 0; r < above.weights.rows(); ++r) {
          if (d_above[r] == 0.0) continue;
          auto wr = above.weights.row(r);
          for (std::size_t j = 0; j < n; ++j) g[j] += wr[j] * d_above[r];
        }
      }
      if (is_recurrent_layer(p, l) && s < t) {
        const Vector& dl = delta_later[l];
        if (diag) {
          for (std::size_t j = 0; j < n; ++j) g[j] += layer.recurrent_diag[j] * dl[j];
        } else {
          for (std::size_t r = 0; r < n; ++r) {
            if (dl[r] == 0.0) continue;
            auto rr = layer.recurrent_full.row(r);
            for (std::size_t j = 0; j < n; ++j) g[j] += rr[j] * dl[r];
          }
        }
      }
      Vector d(n);
      for (std::size_t j = 0; j < n; ++j) d[j] = g[j] * derivative(layer.activation, tr.net[s][l][j]);
      accumulate(l, s, d);
      delta[l] = std::move(d);
    }
    for (std::size_t l = 0; l < L; ++l) delta_later[l] = delta[l];
    if (!p.spec.recurrent) break;
  }
}

void check_target(const NetworkParams& p, std::span<const double> target) {
  if (target.size() != p.spec.output_dim)
    throw DimensionError("target has length " + std::to_string(target.size()) + ", expected " +
                         std::to_string(p.spec.output_dim));
}

void check_window(const NetworkParams& p, const Window& w) {
  if (w.inputs.empty()) throw DimensionError("empty training window");
  if (w.inputs.size() != w.targets.size())
    throw DimensionError("window has " + std::to_string(w.inputs.size()) + " inputs but " +
                         std::to_string(w.targets.size()) + " targets");
  for (const auto& t : w.targets) check_target(p, t);
}

std::vector<std::size_t> window_row_starts(const NetworkParams& p, std::span<const Window> ws) {
  std::vector<std::size_t> starts(ws.size() + 1, 0);
  for (std::size_t i = 0; i < ws.size(); ++i)
    starts[i + 1] = starts[i] + ws[i].inputs.size() * p.spec.output_dim;
  return starts;
}

}  // namespace

NetworkParams zero_params(const NetworkSpec& spec) {
  spec.validate();
  NetworkParams p;
  p.spec = spec;
  std::size_t in = spec.input_dim;
  for (const auto& h : spec.hidden_layers) {
    LayerParams layer;
    layer.activation = h.activation;
    layer.weights = Matrix(h.neurons, in);
    layer.bias.assign(h.neurons, 0.0);
    if (spec.recurrent) {
      if (spec.recurrence_form == RecurrenceForm::Diagonal)
        layer.recurrent_diag.assign(h.neurons, 0.0);
      else
        layer.recurrent_full = Matrix(h.neurons, h.neurons);
    }
    p.layers.push_back(std::move(layer));
    in = h.neurons;
  }
  LayerParams out;
  out.activation = ActivationKind::Linear;
  out.weights = Matrix(spec.output_dim, in);
  out.bias.assign(spec.output_dim, 0.0);
  p.layers.push_back(std::move(out));
  return p;
}

NetworkParams init_params(const NetworkSpec& spec, std::uint64_t seed) {
  NetworkParams p = zero_params(spec);
  Rng rng(seed);
  for (auto& layer : p.layers) {
    const double fan = static_cast<double>(layer.weights.rows() + layer.weights.cols());
    const double r = std::sqrt(6.0 / fan);
    for (double& w : layer.weights.data()) w = rng.uniform(-r, r);
  }
  return p;
}

RnnState zero_state(const NetworkSpec& spec) {
  RnnState s;
  for (const auto& h : spec.hidden_layers) s.emplace_back(h.neurons, 0.0);
  return s;
}

Vector fnn_forward(const NetworkParams& params, std::span<const double> input) {
  check_input(params, input);
  Vector x(input.begin(), input.end()), net;
  for (const auto& layer : params.layers) {
    affine(layer, x, net);
    x.resize(net.size());
    for (std::size_t j = 0; j < net.size(); ++j) x[j] = activate(layer.activation, net[j]);
  }
  return x;
}

Vector rnn_step(const NetworkParams& params, std::span<const double> input, RnnState& state) {
  check_input(params, input);
  const std::size_t hidden = params.layers.size() - 1;
  if (state.size() != hidden) throw DimensionError("recurrent state has wrong layer count");
  Vector x(input.begin(), input.end()), net;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    affine(layer, x, net);
    if (is_recurrent_layer(params, l)) {
      if (state[l].size() != net.size())
        throw DimensionError("recurrent state for layer " + std::to_string(l) +
                             " has wrong length");
      add_recurrence(layer, params.spec.recurrence_form, state[l], net);
    }
    x.resize(net.size());
    for (std::size_t j = 0; j < net.size(); ++j) x[j] = activate(layer.activation, net[j]);
    if (is_recurrent_layer(params, l)) state[l] = x;
  }
  return x;
}

std::pair<std::vector<Vector>, RnnState> rnn_forward(const NetworkParams& params,
                                                     std::span<const Vector> sequence,
                                                     const RnnState& initial_state) {
  if (!params.spec.recurrent) throw Error("rnn_forward called on a feedforward network");
  RnnState state = initial_state;
  std::vector<Vector> outputs;
  outputs.reserve(sequence.size());
  for (const auto& x : sequence) outputs.push_back(rnn_step(params, x, state));
  return {std::move(outputs), std::move(state)};
}

Vector flatten_params(const NetworkParams& params) {
  Vector v;
  v.reserve(params.spec.parameter_count());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    v.insert(v.end(), layer.weights.data().begin(), layer.weights.data().end());
    v.insert(v.end(), layer.bias.begin(), layer.bias.end());
    if (is_recurrent_layer(params, l)) {
      if (params.spec.recurrence_form == RecurrenceForm::Diagonal)
        v.insert(v.end(), layer.recurrent_diag.begin(), layer.recurrent_diag.end());
      else
        v.insert(v.end(), layer.recurrent_full.data().begin(), layer.recurrent_full.data().end());
    }
  }
  return v;
}

NetworkParams unflatten_params(const NetworkSpec& spec, std::span<const double> values) {
  if (values.size() != spec.parameter_count())
    throw DimensionError("parameter vector has length " + std::to_string(values.size()) +
                         ", spec needs " + std::to_string(spec.parameter_count()));
  NetworkParams p = zero_params(spec);
  std::size_t at = 0;
  auto take = [&](std::span<double> dst) {
    for (double& d : dst) d = values[at++];
  };
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& layer = p.layers[l];
    take(layer.weights.data());
    take(layer.bias);
    if (is_recurrent_layer(p, l)) {
      if (spec.recurrence_form == RecurrenceForm::Diagonal)
        take(layer.recurrent_diag);
      else
        take(layer.recurrent_full.data());
    }
  }
  return p;
}

JacobianResult fnn_jacobian(const NetworkParams& params, std::span<const Sample> batch,
                            Execution exec) {
  if (params.spec.recurrent) throw Error("fnn_jacobian called on a recurrent network");
  if (batch.empty()) throw DimensionError("fnn_jacobian: empty batch");
  const std::size_t outs = params.spec.output_dim;
  const std::size_t cols = params.spec.parameter_count();
  JacobianResult res{Matrix(batch.size() * outs, cols), Vector(batch.size() * outs)};
  const auto off = offsets(params);
  kernels::for_each_index(batch.size(), exec, [&](std::size_t i) {
    const Sample& s = batch[i];
    check_target(params, s.target);
    std::span<const Vector> one(&s.input, 1);
    const Trace tr = trace_sequence(params, one);
    for (std::size_t k = 0; k < outs; ++k) {
      const std::size_t r = i * outs + k;
      res.residuals[r] = tr.out[0].back()[k] - s.target[k];
      backprop_row(params, off, one, tr, 0, k, res.jacobian.row(r));
    }
  });
  return res;
}

JacobianResult rnn_jacobian(const NetworkParams& params, std::span<const Window> windows,
                            Execution exec) {
  if (!params.spec.recurrent) throw Error("rnn_jacobian called on a feedforward network");
  if (windows.empty()) throw DimensionError("rnn_jacobian: no windows");
  for (const auto& w : windows) check_window(params, w);
  const std::size_t outs = params.spec.output_dim;
  const auto starts = window_row_starts(params, windows);
  JacobianResult res{Matrix(starts.back(), params.spec.parameter_count()), Vector(starts.back())};
  const auto off = offsets(params);
  kernels::for_each_index(windows.size(), exec, [&](std::size_t i) {
    const Window& w = windows[i];
    const Trace tr = trace_sequence(params, w.inputs);
    for (std::size_t t = 0; t < w.inputs.size(); ++t) {
      for (std::size_t k = 0; k < outs; ++k) {
        const std::size_t r = starts[i] + t * outs + k;
        res.residuals[r] = tr.out[t].back()[k] - w.targets[t][k];
        backprop_row(params, off, w.inputs, tr, t, k, res.jacobian.row(r));
      }
    }
  });
  return res;
}

Vector fnn_residuals(const NetworkParams& params, std::span<const Sample> batch,
                     Execution exec) {
  const std::size_t outs = params.spec.output_dim;
  Vector e(batch.size() * outs);
  kernels::for_each_index(batch.size(), exec, [&](std::size_t i) {
    check_target(params, batch[i].target);
    const Vector y = fnn_forward(params, batch[i].input);
    for (std::size_t k = 0; k < outs; ++k) e[i * outs + k] = y[k] - batch[i].target[k];
  });
  return e;
}

Vector rnn_residuals(const NetworkParams& params, std::span<const Window> windows,
                     Execution exec) {
  if (!params.spec.recurrent) throw Error("rnn_residuals called on a feedforward network");
  for (const auto& w : windows) check_window(params, w);
  const std::size_t outs = params.spec.output_dim;
  const auto starts = window_row_starts(params, windows);
  Vector e(starts.back());
  kernels::for_each_index(windows.size(), exec, [&](std::size_t i) {
    const Window& w = windows[i];
    const auto [ys, state] = rnn_forward(params, w.inputs, zero_state(params.spec));
    for (std::size_t t = 0; t < ys.size(); ++t)
      for (std::size_t k = 0; k < outs; ++k) e[starts[i] + t * outs + k] = ys[t][k] - w.targets[t][k];
  });
  return e;
}

}  // namespace stlf
