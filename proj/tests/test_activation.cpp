#include <cmath>

#include "doctest.h"
#include "stlf/activation.hpp"
#include "stlf/error.hpp"
#include "stlf/random.hpp"

using namespace stlf;

TEST_CASE("activation values") {
  CHECK(activate(ActivationKind::Sigmoid, 0.0) == 0.5);
  CHECK(activate(ActivationKind::Tanh, 0.0) == 0.0);
  CHECK(activate(ActivationKind::ReLU, -3.2) == 0.0);
  CHECK(activate(ActivationKind::ReLU, 3.2) == 3.2);
  CHECK(activate(ActivationKind::Linear, -7.5) == -7.5);
  CHECK(std::abs(activate(ActivationKind::Sigmoid, 1.0) - 0.7310585786) < 1e-9);
  // Stable branch: no overflow far in the negative tail.
  CHECK(activate(ActivationKind::Sigmoid, -800.0) >= 0.0);
  CHECK(std::isfinite(activate(ActivationKind::Sigmoid, -800.0)));
}

TEST_CASE("activation derivatives") {
  CHECK(derivative(ActivationKind::Sigmoid, 0.0) == 0.25);
  CHECK(derivative(ActivationKind::Tanh, 0.0) == 1.0);
  CHECK(derivative(ActivationKind::ReLU, -1.0) == 0.0);
  CHECK(derivative(ActivationKind::ReLU, 2.0) == 1.0);
  CHECK(derivative(ActivationKind::ReLU, 0.0) == 1.0);
  CHECK(derivative(ActivationKind::Linear, 3.0) == 1.0);
}

TEST_CASE("derivatives agree with central differences") {
  Rng rng(2024);
  const double h = 1e-6;
  for (auto kind : {ActivationKind::Sigmoid, ActivationKind::Tanh, ActivationKind::ReLU,
                    ActivationKind::Linear}) {
    int checked = 0;
    while (checked < 1000) {
      const double x = rng.uniform(-10.0, 10.0);
      if (kind == ActivationKind::ReLU && std::abs(x) < 1e-4) continue;
      const double fd = (activate(kind, x + h) - activate(kind, x - h)) / (2 * h);
      CHECK(std::abs(fd - derivative(kind, x)) <= 1e-5);
      ++checked;
    }
  }
}

TEST_CASE("activation ranges and the tanh/sigmoid identity") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-30.0, 30.0);
    const double s = activate(ActivationKind::Sigmoid, x);
    const double t = activate(ActivationKind::Tanh, x);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(t >= -1.0);
    CHECK(t <= 1.0);
    CHECK(activate(ActivationKind::ReLU, x) >= 0.0);
    const double y = rng.uniform(-10.0, 10.0);
    CHECK(std::abs(activate(ActivationKind::Tanh, y) -
                   (2.0 * activate(ActivationKind::Sigmoid, 2.0 * y) - 1.0)) <= 1e-12);
  }
  // Strict bounds away from floating-point saturation.
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-15.0, 15.0);
    const double s = activate(ActivationKind::Sigmoid, x);
    const double t = activate(ActivationKind::Tanh, x / 10.0);
    CHECK((s > 0.0 && s < 1.0));
    CHECK((t > -1.0 && t < 1.0));
  }
}

TEST_CASE("activation names") {
  for (auto kind : {ActivationKind::Sigmoid, ActivationKind::Tanh, ActivationKind::ReLU,
                    ActivationKind::Linear})
    CHECK(parse_activation(to_string(kind)) == kind);
  CHECK(to_string(ActivationKind::ReLU) == "relu");
  CHECK_THROWS_AS(parse_activation("softplus"), Error);
}
