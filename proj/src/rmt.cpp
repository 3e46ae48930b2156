#include "gclab/rmt.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gclab {

namespace {

double rel_step(Complex next, Complex prev) {
  const double scale = std::max(std::abs(next), 1e-300);
  return std::abs(next - prev) / scale;
}

[[noreturn]] void throw_no_convergence(const char* what, int iterations, double residual) {
  std::ostringstream msg;
  msg << what << ": no convergence after " << iterations
      << " iterations, residual " << residual;
  throw std::runtime_error(msg.str());
}

}  // namespace

void RmtParams::validate() const {
  if (!(nu > 0.0 && nu <= 0.25)) throw std::invalid_argument("nu: must lie in (0, 1/4]");
  if (!(c > 0.0)) throw std::invalid_argument("c: must be > 0");
  if (!(gamma_f >= 0.0)) throw std::invalid_argument("gamma_f: must be >= 0");
}

FixedPointSolution solve_fixed_point(Complex z, const RmtParams& params,
                                     const SolverOptions& opts) {
  params.validate();
  const double nu = params.nu, c = params.c;
  Complex d1{0.0, 0.0}, d2{0.0, 0.0};
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= opts.max_iterations; ++it) {
    const Complex denom = nu + z * (1.0 + d1) * (1.0 + d2);
    if (std::abs(denom) < 1e-30)
      throw std::runtime_error("solve_fixed_point: denominator blow-up");
    const Complex f1 = (nu / c) * (1.0 + d1) / denom;
    const Complex f2 = nu * (1.0 + d2) / denom;
    const Complex n1 = opts.damping * f1 + (1.0 - opts.damping) * d1;
    const Complex n2 = opts.damping * f2 + (1.0 - opts.damping) * d2;
    residual = std::max(rel_step(n1, d1), rel_step(n2, d2));
    d1 = n1;
    d2 = n2;
    if (residual < opts.tolerance) break;
  }
  if (residual >= opts.tolerance)
    throw_no_convergence("solve_fixed_point", opts.max_iterations, residual);
  FixedPointSolution sol;
  sol.z = z;
  sol.delta1 = d1;
  sol.delta2 = d2;
  sol.zeta = (1.0 + d2) / (nu + z * (1.0 + d1) * (1.0 + d2));
  sol.iterations = it;
  sol.residual = residual;
  return sol;
}

Complex stieltjes(Complex s, const RmtParams& params, const SolverOptions& opts) {
  const FixedPointSolution sol = solve_fixed_point(-s, params, opts);
  return sol.zeta * (1.0 + sol.delta1);
}

Vector theoretical_density(const Vector& x_grid, double epsilon,
                           const RmtParams& params, const SolverOptions& opts) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon: must be > 0");
  for (Index i = 1; i < x_grid.size(); ++i)
    if (x_grid[i] < x_grid[i - 1]) throw std::invalid_argument("x_grid: must be sorted");
  Vector f(x_grid.size());
  for (Index i = 0; i < x_grid.size(); ++i)
    f[i] = stieltjes(Complex(x_grid[i], epsilon), params, opts).imag() / M_PI;
  return f;
}

CorollaryCoefficients corollary_equivalent(Complex z, const RmtParams& params,
                                           const SolverOptions& opts) {
  if (params.gamma_g != 0.0)
    throw std::invalid_argument("corollary_equivalent: requires gamma_g = 0 (eta = 0)");
  const FixedPointSolution sol = solve_fixed_point(z, params, opts);
  CorollaryCoefficients coeffs;
  coeffs.bulk = sol.zeta * (1.0 + sol.delta1);
  // eta -> 0 limit of the rank-2 term: the phi phi^T coefficient inside the
  // parentheses is zeta gamma_f / (c + zeta nu gamma_f).
  coeffs.spike = coeffs.bulk * sol.zeta * params.gamma_f /
                 (params.c + sol.zeta * params.nu * params.gamma_f);
  return coeffs;
}

Vector empirical_phi(const Matrix& a_tilde, const Vector& ybar, double gamma_g) {
  if (a_tilde.rows() != ybar.size())
    throw std::invalid_argument("empirical_phi: shape mismatch");
  return a_tilde * ybar - gamma_g * ybar;
}

RankTwoEquivalent make_rank_two(const Vector& ybar, const Vector& phi,
                                const RmtParams& params,
                                RankTwoEquivalent::PhiSource source) {
  if (ybar.size() != phi.size())
    throw std::invalid_argument("make_rank_two: ybar/phi length mismatch");
  RankTwoEquivalent rt;
  rt.U.resize(ybar.size(), 2);
  rt.U.col(0) = ybar;
  rt.U.col(1) = phi;
  const double gf_c = params.gamma_f / params.c;
  rt.B << params.gamma_g * params.gamma_g * (gf_c + 1.0), params.gamma_g * (gf_c + 1.0),
          params.gamma_g * (gf_c + 1.0), gf_c;
  rt.T << 1.0, 0.0, 0.0, params.nu;
  rt.phi_source = source;
  return rt;
}

ComplexMatrix theorem_equivalent_matrix(Complex z, const RmtParams& params,
                                        const RankTwoEquivalent& rank_two,
                                        const SolverOptions& opts) {
  const FixedPointSolution sol = solve_fixed_point(z, params, opts);
  const Complex lead = sol.zeta * (1.0 + sol.delta1);
  Eigen::Matrix2cd inner = rank_two.B.cast<Complex>().inverse() +
                           sol.zeta * rank_two.T.cast<Complex>();
  const ComplexMatrix u = rank_two.U.cast<Complex>();
  ComplexMatrix out = -lead * sol.zeta * (u * inner.inverse() * u.transpose());
  out.diagonal().array() += lead;
  return out;
}

GramResolvent gram_resolvent_fixed_point(const Vector& gram_eigenvalues, Complex z,
                                         const SolverOptions& opts) {
  if (gram_eigenvalues.size() == 0)
    throw std::invalid_argument("gram_eigenvalues: empty");
  for (Index i = 0; i < gram_eigenvalues.size(); ++i)
    if (gram_eigenvalues[i] < -1e-10)
      throw std::invalid_argument("gram_eigenvalues: must be nonnegative");
  const double inv_n = 1.0 / static_cast<double>(gram_eigenvalues.size());
  Complex dg{0.0, 0.0};
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= opts.max_iterations; ++it) {
    Complex acc{0.0, 0.0};
    for (Index i = 0; i < gram_eigenvalues.size(); ++i) {
      const double lam = std::max(gram_eigenvalues[i], 0.0);
      const Complex denom = lam / (1.0 + dg) + z;
      if (std::abs(denom) < 1e-30)
        throw std::runtime_error("gram_resolvent_fixed_point: denominator blow-up");
      acc += lam / denom;
    }
    const Complex next = opts.damping * (inv_n * acc) + (1.0 - opts.damping) * dg;
    residual = rel_step(next, dg);
    dg = next;
    if (residual < opts.tolerance) break;
  }
  if (residual >= opts.tolerance)
    throw_no_convergence("gram_resolvent_fixed_point", opts.max_iterations, residual);
  GramResolvent gr;
  gr.delta_g = dg;
  Complex acc{0.0, 0.0};
  for (Index i = 0; i < gram_eigenvalues.size(); ++i)
    acc += 1.0 / (std::max(gram_eigenvalues[i], 0.0) / (1.0 + dg) + z);
  gr.trace = inv_n * acc;
  gr.iterations = it;
  gr.residual = residual;
  return gr;
}

KappaSpec KappaSpec::exponential() {
  return {1.0, 1.0, 1.0, std::exp(1.0)};
}

KappaSpec KappaSpec::from_function(const std::function<double(double)>& kappa, double h) {
  KappaSpec spec;
  spec.at_zero = kappa(0.0);
  spec.at_one = kappa(1.0);
  spec.deriv1 = (kappa(h) - kappa(-h)) / (2.0 * h);
  spec.deriv2 = (kappa(h) - 2.0 * kappa(0.0) + kappa(-h)) / (h * h);
  if (!std::isfinite(spec.deriv1) || !std::isfinite(spec.deriv2))
    throw std::invalid_argument("kappa: derivatives are not finite");
  return spec;
}

Matrix KernelExpansion::instantiate(const Vector& ybar, const Matrix& z_noise) const {
  const Index n = ybar.size();
  if (z_noise.rows() != n) throw std::invalid_argument("z_noise: row count must match ybar");
  Matrix out = Matrix::Constant(n, n, coeff_ones);
  out += coeff_linear * (gamma_f_over_c * (ybar * ybar.transpose()) +
                         z_noise * z_noise.transpose());
  out.diagonal().array() += coeff_identity;
  return out;
}

KernelExpansion kernel_expansion(double gamma_f, double c, Index p, const KappaSpec& kappa) {
  if (!(c > 0.0)) throw std::invalid_argument("c: must be > 0");
  if (p < 1) throw std::invalid_argument("p: must be >= 1");
  if (!std::isfinite(kappa.deriv1) || !std::isfinite(kappa.deriv2))
    throw std::invalid_argument("kappa: derivatives are not finite");
  KernelExpansion e;
  e.gamma_f_over_c = gamma_f / c;
  e.coeff_ones = kappa.at_zero + kappa.deriv2 / (2.0 * static_cast<double>(p));
  e.coeff_linear = kappa.deriv1;
  e.coeff_identity = kappa.at_one - kappa.at_zero - e.gamma_f_over_c * kappa.deriv1;
  return e;
}

}  // namespace gclab
