#include <doctest.h>

#include <cmath>

#include "gclab/activation.hpp"
#include "oracles.hpp"

using namespace gclab;

TEST_SUITE("activation") {

TEST_CASE("hermite rule integrates Gaussian moments exactly") {
  const HermiteRule rule = HermiteRule::make(200);
  CHECK(rule.gaussian_mean([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rule.gaussian_mean([](double x) { return x; }) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(rule.gaussian_mean([](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rule.gaussian_mean([](double x) { return x * x * x * x; }) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("identity base is already standardized") {
  const ActivationSpec id = normalize_activation(ActivationSpec::Base::Identity);
  CHECK(id.scale == 1.0);
  CHECK(id.shift == 0.0);
  CHECK(id.b_sigma == 1.0);
  CHECK(id(2.5) == 2.5);
}

TEST_CASE("erf base: closed-form scale and b_sigma") {
  // Var[erf(xi)] = (2/pi) asin(2/3); E[erf'(xi)] = (2/sqrt(pi)) / sqrt(3)
  const double var = (2.0 / M_PI) * std::asin(2.0 / 3.0);
  const double a = 1.0 / std::sqrt(var);
  const double b_sigma = a * 2.0 / std::sqrt(3.0 * M_PI);
  const ActivationSpec erf = normalize_activation(ActivationSpec::Base::Erf);
  CHECK(erf.scale == doctest::Approx(a).epsilon(1e-12));
  CHECK(std::abs(erf.shift) < 1e-12);
  CHECK(erf.b_sigma == doctest::Approx(b_sigma).epsilon(1e-12));
}

TEST_CASE("shifted relu base: closed-form half-normal moments") {
  // E[max(xi,0)] = 1/sqrt(2 pi), E[max(xi,0)^2] = 1/2:
  // a = 1/sqrt(1/2 - 1/(2 pi)), b = -a/sqrt(2 pi), b_sigma = a/2
  const double a = 1.0 / std::sqrt(0.5 - 0.5 / M_PI);
  const double b = -a / std::sqrt(2.0 * M_PI);
  const ActivationSpec relu = normalize_activation(ActivationSpec::Base::ShiftedRelu);
  CHECK(relu.scale == doctest::Approx(a).epsilon(1e-4));
  CHECK(relu.shift == doctest::Approx(b).epsilon(1e-4));
  CHECK(relu.b_sigma == doctest::Approx(a / 2.0).epsilon(1e-4));
}

TEST_CASE("normalized activations satisfy the moment constraints (independent oracle)") {
  for (auto base : {ActivationSpec::Base::Erf, ActivationSpec::Base::ShiftedRelu}) {
    const ActivationSpec spec = normalize_activation(base);
    const double mean = oracle::simpson_gaussian_mean([&](double x) { return spec(x); });
    const double second =
        oracle::simpson_gaussian_mean([&](double x) { return spec(x) * spec(x); });
    CHECK(std::abs(mean) < 1e-6);
    CHECK(std::abs(second - 1.0) < 1e-5);
  }
}

TEST_CASE("monte carlo method agrees within its own standard errors") {
  const ActivationSpec mc = normalize_activation(
      ActivationSpec::Base::ShiftedRelu, ActivationSpec::Method::MonteCarlo, 1'000'000);
  const double a = 1.0 / std::sqrt(0.5 - 0.5 / M_PI);
  // moment estimates have relative error ~1e-3 at 1e6 samples
  CHECK(mc.scale == doctest::Approx(a).epsilon(5e-3));
  CHECK(mc.b_sigma == doctest::Approx(a / 2.0).epsilon(5e-3));
}

TEST_CASE("custom base via the function overload") {
  const ActivationSpec cube = normalize_activation(
      [](double t) { return t * t * t; }, [](double t) { return 3.0 * t * t; });
  // Var[xi^3] = E[xi^6] = 15; b_sigma = 3 E[xi^2] / sqrt(15)
  CHECK(cube.scale == doctest::Approx(1.0 / std::sqrt(15.0)).epsilon(1e-10));
  CHECK(cube.b_sigma == doctest::Approx(3.0 / std::sqrt(15.0)).epsilon(1e-10));
}

TEST_CASE("constant base is rejected") {
  CHECK_THROWS_AS(normalize_activation([](double) { return 2.0; },
                                       [](double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("apply is entrywise") {
  const ActivationSpec erf = normalize_activation(ActivationSpec::Base::Erf);
  Matrix m(2, 2);
  m << 0.0, 1.0, -1.0, 2.0;
  const Matrix out = erf.apply(m);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(out(i, j) == erf(m(i, j)));
}

}  // TEST_SUITE
