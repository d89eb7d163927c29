#include <stdexcept>

#include "doctest.h"
#include "stlf/kernels.hpp"
#include "test_support.hpp"

using namespace stlf;

TEST_CASE("parallel gram and gradient match the serial references") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix j = testing::random_matrix(rng, 50 + rng.below(200), 1 + rng.below(40));
    const Vector e = testing::random_vector(rng, j.rows());
    CHECK(kernels::gram(j, Execution::Parallel) == kernels::gram_serial(j));
    CHECK(kernels::gradient(j, e, Execution::Parallel) == kernels::gradient_serial(j, e));
  }
}

TEST_CASE("parallel and serial Jacobian assembly agree row for row") {
  NetworkSpec s;
  s.recurrent = true;
  Rng rng(4);
  const auto p = testing::random_params(s, rng, 0.3);
  std::vector<Window> ws(20);
  for (auto& w : ws)
    for (int t = 0; t < 6; ++t) {
      w.inputs.push_back(testing::random_vector(rng, 8));
      w.targets.push_back({rng.uniform()});
    }
  const auto a = rnn_jacobian(p, ws, Execution::Parallel);
  const auto b = rnn_jacobian(p, ws, Execution::Serial);
  CHECK(a.jacobian == b.jacobian);
  CHECK(a.residuals == b.residuals);
  CHECK(rnn_residuals(p, ws, Execution::Parallel) == rnn_residuals(p, ws, Execution::Serial));

  s.recurrent = false;
  const auto fp = testing::random_params(s, rng, 0.3);
  std::vector<Sample> batch;
  for (int i = 0; i < 64; ++i) batch.push_back({testing::random_vector(rng, 8), {rng.uniform()}});
  CHECK(fnn_jacobian(fp, batch, Execution::Parallel).jacobian ==
        fnn_jacobian(fp, batch, Execution::Serial).jacobian);
}

TEST_CASE("errors raised inside parallel loops propagate") {
  CHECK_THROWS_WITH(kernels::for_each_index(100, Execution::Parallel,
                                            [](std::size_t i) {
                                              if (i == 37) throw std::runtime_error("boom");
                                            }),
                    "boom");
}
