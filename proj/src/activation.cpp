#include "stlf/activation.hpp"

#include <cmath>

#include "stlf/error.hpp"

namespace stlf {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

}  // namespace

double activate(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::Sigmoid:
      return sigmoid(x);
    case ActivationKind::Tanh:
      return std::tanh(x);
    case ActivationKind::ReLU:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::Linear:
      return x;
  }
  return x;
}

double derivative(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::Sigmoid: {
      const double s = sigmoid(x);
      return s * (1.0 - s);
    }
    case ActivationKind::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case ActivationKind::ReLU:
      return x < 0.0 ? 0.0 : 1.0;
    case ActivationKind::Linear:
      return 1.0;
  }
  return 1.0;
}

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Sigmoid:
      return "sigmoid";
    case ActivationKind::Tanh:
      return "tanh";
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::Linear:
      return "linear";
  }
  return "linear";
}

ActivationKind parse_activation(std::string_view name) {
  if (name == "sigmoid") return ActivationKind::Sigmoid;
  if (name == "tanh") return ActivationKind::Tanh;
  if (name == "relu") return ActivationKind::ReLU;
  if (name == "linear") return ActivationKind::Linear;
  throw Error("unknown activation '" + std::string(name) + "'");
}

}  // namespace stlf
