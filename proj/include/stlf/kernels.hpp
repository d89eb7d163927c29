#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "stlf/network.hpp"
#include "stlf/numerics.hpp"

// Data-parallel kernels behind the training loop. Each parallel kernel has
// a serial counterpart that computes the same quantity the plain way; tests
// compare the two and the benchmark target times them.
//
// Every parallel kernel assigns each output element to exactly one worker
// and sums in a fixed order, so results do not depend on the thread count.
namespace stlf::kernels {

int max_threads();
// Caps the worker count for subsequent parallel kernels; n < 1 is ignored.
void set_threads(int n);

// J^T J.
Matrix gram(const Matrix& j, Execution exec = Execution::Parallel);
Matrix gram_serial(const Matrix& j);

// J^T e.
Vector gradient(const Matrix& j, std::span<const double> e,
                Execution exec = Execution::Parallel);
Vector gradient_serial(const Matrix& j, std::span<const double> e);

// Runs body(i) for i in [0, count), in parallel when requested.
void for_each_index(std::size_t count, Execution exec,
                    const std::function<void(std::size_t)>& body);

}  // namespace stlf::kernels
