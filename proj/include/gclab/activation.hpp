#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "gclab/types.hpp"

namespace gclab {

/// Gauss-Hermite rule for the weight e^{-x^2}; expectations against N(0,1)
/// are sum_i w_i f(sqrt(2) x_i) / sqrt(pi).
struct HermiteRule {
  Vector nodes;
  Vector weights;
  static HermiteRule make(int points);
  double gaussian_mean(const std::function<double(double)>& f) const;
};

/// Activation sigma(t) = scale * base(t) + shift, with (scale, shift) solving
/// E[sigma(xi)] = 0 and E[sigma^2(xi)] = 1 for xi ~ N(0,1).
struct ActivationSpec {
  enum class Base { Identity, Erf, ShiftedRelu, Custom };
  enum class Method { Quadrature, MonteCarlo };

  Base base = Base::Erf;
  Method method = Method::Quadrature;
  std::size_t mc_samples = 1'000'000;
  double scale = 1.0;
  double shift = 0.0;
  double b_sigma = 1.0;    // E[sigma'(xi)]
  double lipschitz = 1.0;  // lambda_sigma metadata (Assumption on growth rates)
  // Base function and derivative, pre-normalization.
  std::function<double(double)> f;
  std::function<double(double)> df;

  double operator()(double t) const { return scale * f(t) + shift; }
  Matrix apply(const Matrix& m) const;
  std::string name() const;
};

/// Solves the two moment constraints by 200-point Gauss-Hermite quadrature or
/// Monte Carlo, and computes b_sigma = scale * E[base'(xi)].
ActivationSpec normalize_activation(ActivationSpec::Base base,
                                    ActivationSpec::Method method =
                                        ActivationSpec::Method::Quadrature,
                                    std::size_t mc_samples = 1'000'000);

/// Custom base: caller supplies the pointwise function and its derivative.
ActivationSpec normalize_activation(std::function<double(double)> base_f,
                                    std::function<double(double)> base_df,
                                    ActivationSpec::Method method =
                                        ActivationSpec::Method::Quadrature,
                                    std::size_t mc_samples = 1'000'000);

}  // namespace gclab
