// Test-only oracles, kept independent of the implementation paths they check.
#pragma once

#include <cmath>
#include <functional>

#include "gclab/types.hpp"

namespace gclab::oracle {

/// E[f(xi)] for xi ~ N(0,1) by composite Simpson on [-12, 12]. Slow and
/// simple; shares nothing with the Gauss-Hermite path under test.
inline double simpson_gaussian_mean(const std::function<double(double)>& f,
                                    int intervals = 40000) {
  const double lo = -12.0, hi = 12.0;
  const double h = (hi - lo) / intervals;
  auto g = [&](double x) {
    return f(x) * std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  };
  double acc = g(lo) + g(hi);
  for (int k = 1; k < intervals; ++k) acc += (k % 2 ? 4.0 : 2.0) * g(lo + k * h);
  return acc * h / 3.0;
}

/// Entry (i,j) of D^{-1/2} A D^{-1/2} by explicit loops.
inline Matrix brute_gcn_normalize(const Matrix& a) {
  const Index n = a.rows();
  Vector deg = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) deg[i] += a(i, j);
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      out(i, j) = a(i, j) / std::sqrt(deg[i] * deg[j]);
  return out;
}

/// Ridge weights by plain gradient descent on the training rows, run to a
/// tight tolerance.
inline Vector gradient_descent_ridge(const Matrix& x, const Vector& y, double lambda,
                                     int max_steps = 2'000'000, double tol = 1e-12) {
  const Index d = x.cols();
  Vector w = Vector::Zero(d);
  // Loss: ||Xw - y||^2 + lambda ||w||^2; step from the Lipschitz bound.
  const double lip = 2.0 * (x.squaredNorm() + lambda);
  const double step = 1.0 / lip;
  for (int k = 0; k < max_steps; ++k) {
    const Vector grad = 2.0 * (x.transpose() * (x * w - y)) + 2.0 * lambda * w;
    w -= step * grad;
    if (grad.norm() < tol) break;
  }
  return w;
}

/// (1/n) tr (M - s I)^{-1} by dense complex inversion.
inline Complex brute_resolvent_trace(const Matrix& m, Complex s) {
  const Index n = m.rows();
  ComplexMatrix shifted = m.cast<Complex>();
  shifted.diagonal().array() -= s;
  return shifted.inverse().trace() / static_cast<double>(n);
}

}  // namespace gclab::oracle
