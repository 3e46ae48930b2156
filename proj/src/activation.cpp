#include "gclab/activation.hpp"

#include <cmath>
#include <stdexcept>

#include "gclab/rng.hpp"

namespace gclab {

HermiteRule HermiteRule::make(int points) {
  if (points < 1) throw std::invalid_argument("points: must be >= 1");
  // Golub-Welsch: eigenvalues of the Jacobi matrix with off-diagonals
  // sqrt(k/2); weights from the first eigenvector components, mu_0 = sqrt(pi).
  Matrix jacobi = Matrix::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  HermiteRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(points);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < points; ++i) {
    const double v = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

double HermiteRule::gaussian_mean(const std::function<double(double)>& f) const {
  const double sq2 = std::sqrt(2.0);
  double acc = 0.0;
  for (Index i = 0; i < nodes.size(); ++i) acc += weights[i] * f(sq2 * nodes[i]);
  return acc / std::sqrt(M_PI);
}

Matrix ActivationSpec::apply(const Matrix& m) const {
  return m.unaryExpr([this](double t) { return scale * f(t) + shift; });
}

std::string ActivationSpec::name() const {
  switch (base) {
    case Base::Identity: return "identity";
    case Base::Erf: return "erf";
    case Base::ShiftedRelu: return "shifted-relu";
    case Base::Custom: return "custom";
  }
  return "unknown";
}

namespace {

struct Moments {
  double mean, second, dmean;  // E[f], E[f^2], E[f']
};

Moments quadrature_moments(const std::function<double(double)>& f,
                           const std::function<double(double)>& df) {
  static const HermiteRule rule = HermiteRule::make(200);
  return {rule.gaussian_mean(f),
          rule.gaussian_mean([&](double t) { return f(t) * f(t); }),
          rule.gaussian_mean(df)};
}

Moments monte_carlo_moments(const std::function<double(double)>& f,
                            const std::function<double(double)>& df,
                            std::size_t samples) {
  auto rng = RngStream::keyed(0x6d6f6d656e747321ULL, "activation-mc");
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = rng.normal();
    const double v = f(x);
    s1 += v;
    s2 += v * v;
    s3 += df(x);
  }
  const double inv = 1.0 / static_cast<double>(samples);
  return {s1 * inv, s2 * inv, s3 * inv};
}

ActivationSpec finish(ActivationSpec spec) {
  const Moments m = spec.method == ActivationSpec::Method::Quadrature
                        ? quadrature_moments(spec.f, spec.df)
                        : monte_carlo_moments(spec.f, spec.df, spec.mc_samples);
  const double var = m.second - m.mean * m.mean;
  if (!(var > 1e-14))
    throw std::invalid_argument("activation base has zero variance under N(0,1)");
  spec.scale = 1.0 / std::sqrt(var);
  spec.shift = -spec.scale * m.mean;
  spec.b_sigma = spec.scale * m.dmean;
  if (!std::isfinite(spec.b_sigma))
    throw std::invalid_argument("activation: b_sigma is not finite");
  return spec;
}

}  // namespace

ActivationSpec normalize_activation(ActivationSpec::Base base,
                                    ActivationSpec::Method method,
                                    std::size_t mc_samples) {
  ActivationSpec spec;
  spec.base = base;
  spec.method = method;
  spec.mc_samples = mc_samples;
  switch (base) {
    case ActivationSpec::Base::Identity:
      spec.f = [](double t) { return t; };
      spec.df = [](double) { return 1.0; };
      spec.scale = 1.0;
      spec.shift = 0.0;
      spec.b_sigma = 1.0;
      spec.lipschitz = 1.0;
      return spec;  // already standardized
    case ActivationSpec::Base::Erf:
      spec.f = [](double t) { return std::erf(t); };
      spec.df = [](double t) { return 2.0 / std::sqrt(M_PI) * std::exp(-t * t); };
      spec = finish(std::move(spec));
      spec.lipschitz = spec.scale * 2.0 / std::sqrt(M_PI);  // erf' peaks at 0
      return spec;
    case ActivationSpec::Base::ShiftedRelu:
      spec.f = [](double t) { return t > 0.0 ? t : 0.0; };
      spec.df = [](double t) { return t > 0.0 ? 1.0 : 0.0; };
      spec = finish(std::move(spec));
      spec.lipschitz = spec.scale;
      return spec;
    case ActivationSpec::Base::Custom:
      throw std::invalid_argument("custom base requires the function overload");
  }
  throw std::invalid_argument("unknown activation base");
}

ActivationSpec normalize_activation(std::function<double(double)> base_f,
                                    std::function<double(double)> base_df,
                                    ActivationSpec::Method method,
                                    std::size_t mc_samples) {
  ActivationSpec spec;
  spec.base = ActivationSpec::Base::Custom;
  spec.method = method;
  spec.mc_samples = mc_samples;
  spec.f = std::move(base_f);
  spec.df = std::move(base_df);
  spec = finish(std::move(spec));
  spec.lipschitz = spec.scale;  // caller may refine
  return spec;
}

}  // namespace gclab
