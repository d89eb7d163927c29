#include "stlf/kernels.hpp"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stlf/error.hpp"

namespace stlf::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n >= 1) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

Matrix gram(const Matrix& j, Execution exec) {
  if (exec == Execution::Serial) return gram_serial(j);
  // Columns of J become contiguous rows of jt.
  const Matrix jt = transpose(j);
  const auto n = static_cast<std::ptrdiff_t>(jt.rows());
  Matrix g(jt.rows(), jt.rows());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t a = 0; a < n; ++a) {
    const auto ra = jt.row(static_cast<std::size_t>(a));
    for (std::ptrdiff_t b = a; b < n; ++b) {
      const double v = dot(ra, jt.row(static_cast<std::size_t>(b)));
      g(a, b) = v;
      g(b, a) = v;
    }
  }
  return g;
}

Matrix gram_serial(const Matrix& j) { return matmul(transpose(j), j); }

Vector gradient(const Matrix& j, std::span<const double> e, Execution exec) {
  if (exec == Execution::Serial) return gradient_serial(j, e);
  if (j.rows() != e.size()) throw DimensionError("gradient: residual length mismatch");
  const auto cols = static_cast<std::ptrdiff_t>(j.cols());
  const std::size_t rows = j.rows();
  Vector g(j.cols(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += j(r, c) * e[r];
    g[c] = s;
  }
  return g;
}

Vector gradient_serial(const Matrix& j, std::span<const double> e) {
  return matvec_transposed(j, e);
}

void for_each_index(std::size_t count, Execution exec,
                    const std::function<void(std::size_t)>& body) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  // Exceptions may not escape an OpenMP region; keep the first and rethrow.
  std::exception_ptr failure;
  std::mutex guard;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace stlf::kernels
