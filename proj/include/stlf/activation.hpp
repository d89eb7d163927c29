#pragma once

#include <string>
#include <string_view>

namespace stlf {

enum class ActivationKind { Sigmoid, Tanh, ReLU, Linear };

double activate(ActivationKind kind, double x);
// ReLU'(0) is taken as 1.
double derivative(ActivationKind kind, double x);

// Lowercase names used in model files and on the command line.
std::string_view to_string(ActivationKind kind);
ActivationKind parse_activation(std::string_view name);

}  // namespace stlf
