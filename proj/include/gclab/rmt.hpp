#pragma once

#include <functional>

#include "gclab/synthgen.hpp"
#include "gclab/types.hpp"

namespace gclab {

struct RmtParams {
  double gamma_f = 0.0;  // ||mu||^2
  double gamma_g = 0.0;  // q^2 eta
  double nu = 0.1875;    // q^2 (1 - q^2)
  double c = 1.0;        // p / n

  static RmtParams from_model(const ModelParams& m) {
    return {m.gamma_f(), m.gamma_g(), m.nu(), m.c()};
  }
  void validate() const;
};

struct SolverOptions {
  double damping = 0.5;
  double tolerance = 1e-12;
  int max_iterations = 10'000;
};

/// Solution of the coupled fixed-point system at a resolvent argument z
/// (resolvent convention (M + z I)^{-1}):
///   delta1 = (1/c) nu (1+delta1) / (nu + z (1+delta1)(1+delta2))
///   delta2 =       nu (1+delta2) / (nu + z (1+delta1)(1+delta2))
/// with zeta = (1+delta2) / (nu + z (1+delta1)(1+delta2)).
struct FixedPointSolution {
  Complex z;
  Complex delta1, delta2, zeta;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped Picard iteration from (0,0). Throws std::runtime_error on
/// non-convergence (message carries the last residual) or denominator blow-up.
FixedPointSolution solve_fixed_point(Complex z, const RmtParams& params,
                                     const SolverOptions& opts = {});

/// Stieltjes transform of the limiting spectral measure of X~ X~^T at the
/// spectral coordinate s: m(s) ~ (1/n) tr (X~ X~^T - s I)^{-1}. Internally the
/// resolvent convention above is evaluated at z = -s, and the rank-2 spike
/// correction (O(1/n) in trace) is excluded.
Complex stieltjes(Complex s, const RmtParams& params, const SolverOptions& opts = {});

/// f(x) = (1/pi) Im m(x + i eps) on the given grid.
Vector theoretical_density(const Vector& x_grid, double epsilon,
                           const RmtParams& params, const SolverOptions& opts = {});

/// Coefficients of the eta = 0 deterministic equivalent
///   Q_bar(z) = bulk * I - spike * phi phi^T,
/// with bulk = zeta (1+delta1) and spike = bulk * zeta gamma_f / (c + zeta nu gamma_f).
/// z is a resolvent argument. Requires gamma_g = 0.
struct CorollaryCoefficients {
  Complex bulk;
  Complex spike;
};
CorollaryCoefficients corollary_equivalent(Complex z, const RmtParams& params,
                                           const SolverOptions& opts = {});

/// Rank-2 structure of the full deterministic equivalent:
///   Q_bar(z) = zeta (1+delta1) (I - zeta U [B^{-1} + zeta T]^{-1} U^T).
struct RankTwoEquivalent {
  enum class PhiSource { Empirical, Resampled };
  Matrix U;            // n x 2 : [ybar, phi]
  Eigen::Matrix2d B;
  Eigen::Matrix2d T;   // diag(1, nu)
  PhiSource phi_source = PhiSource::Empirical;
};

/// phi estimator A~ ybar - gamma_g ybar (plumbing; from the random equivalent
/// of A~).
Vector empirical_phi(const Matrix& a_tilde, const Vector& ybar, double gamma_g);

RankTwoEquivalent make_rank_two(const Vector& ybar, const Vector& phi,
                                const RmtParams& params,
                                RankTwoEquivalent::PhiSource source =
                                    RankTwoEquivalent::PhiSource::Empirical);

/// Instantiates the n x n deterministic equivalent at z.
ComplexMatrix theorem_equivalent_matrix(Complex z, const RmtParams& params,
                                        const RankTwoEquivalent& rank_two,
                                        const SolverOptions& opts = {});

/// Solution of delta_g(z) = (1/n) sum_i lambda_i / (lambda_i/(1+delta_g) + z)
/// together with the equivalent trace (1/n) sum_i 1 / (lambda_i/(1+delta_g) + z).
struct GramResolvent {
  Complex delta_g;
  Complex trace;
  int iterations = 0;
  double residual = 0.0;
};
GramResolvent gram_resolvent_fixed_point(const Vector& gram_eigenvalues, Complex z,
                                         const SolverOptions& opts = {});

/// Kernel function data needed by the expansion: kappa(0), kappa'(0),
/// kappa''(0), kappa(1).
struct KappaSpec {
  double at_zero = 0.0;
  double deriv1 = 1.0;
  double deriv2 = 0.0;
  double at_one = 1.0;
  static KappaSpec linear() { return {0.0, 1.0, 0.0, 1.0}; }
  static KappaSpec exponential();
  /// Central differences at 0 with step h.
  static KappaSpec from_function(const std::function<double(double)>& kappa, double h = 1e-5);
};

/// Structured components of
///   K~ = coeff_ones 1 1^T + coeff_linear ((gamma_f/c) ybar ybar^T + Z Z^T)
///        + coeff_identity I,
/// where coeff_ones collects kappa(0) + kappa''(0)/(2p).
struct KernelExpansion {
  double coeff_ones = 0.0;
  double coeff_linear = 0.0;
  double coeff_identity = 0.0;
  double gamma_f_over_c = 0.0;
  Matrix instantiate(const Vector& ybar, const Matrix& z_noise) const;
};
KernelExpansion kernel_expansion(double gamma_f, double c, Index p, const KappaSpec& kappa);

}  // namespace gclab
