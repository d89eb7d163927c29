#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "stlf/network.hpp"
#include "stlf/random.hpp"

namespace stlf::testing {

inline Vector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (double& x : m.data()) x = rng.uniform(-1.0, 1.0);
  return m;
}

// Params with every entry (including biases and recurrent weights) random.
inline NetworkParams random_params(const NetworkSpec& spec, Rng& rng, double scale = 0.8) {
  Vector flat(spec.parameter_count());
  for (double& x : flat) x = rng.uniform(-scale, scale);
  return unflatten_params(spec, flat);
}

// Residuals computed from forward passes only, in Jacobian row order.
inline Vector forward_residuals(const NetworkParams& p, const std::vector<Sample>& batch,
                                const std::vector<Window>& windows) {
  Vector e;
  if (p.spec.recurrent) {
    for (const auto& w : windows) {
      const auto [ys, st] = rnn_forward(p, w.inputs, zero_state(p.spec));
      for (std::size_t t = 0; t < ys.size(); ++t)
        for (std::size_t k = 0; k < ys[t].size(); ++k) e.push_back(ys[t][k] - w.targets[t][k]);
    }
  } else {
    for (const auto& s : batch) {
      const Vector y = fnn_forward(p, s.input);
      for (std::size_t k = 0; k < y.size(); ++k) e.push_back(y[k] - s.target[k]);
    }
  }
  return e;
}

// Central-difference Jacobian of the residuals with respect to the flattened
// parameters.
inline Matrix finite_difference_jacobian(const NetworkParams& p, const std::vector<Sample>& batch,
                                         const std::vector<Window>& windows, double h = 1e-6) {
  const Vector w = flatten_params(p);
  const std::size_t rows = forward_residuals(p, batch, windows).size();
  Matrix j(rows, w.size());
  for (std::size_t c = 0; c < w.size(); ++c) {
    Vector plus = w, minus = w;
    plus[c] += h;
    minus[c] -= h;
    const Vector ep = forward_residuals(unflatten_params(p.spec, plus), batch, windows);
    const Vector em = forward_residuals(unflatten_params(p.spec, minus), batch, windows);
    for (std::size_t r = 0; r < rows; ++r) j(r, c) = (ep[r] - em[r]) / (2.0 * h);
  }
  return j;
}

// |a - b| <= rel * max(|a|, |b|) + abs_floor for every entry.
inline bool matrices_close(const Matrix& a, const Matrix& b, double rel, double abs_floor,
                           double* worst = nullptr) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  bool ok = true;
  double w = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double x = a.data()[i], y = b.data()[i];
    const double err = std::abs(x - y);
    const double allowed = rel * std::max(std::abs(x), std::abs(y)) + abs_floor;
    w = std::max(w, err / allowed);
    if (err > allowed) ok = false;
  }
  if (worst) *worst = w;
  return ok;
}

}  // namespace stlf::testing
