#include <doctest.h>

#include <cmath>

#include "gclab/operators.hpp"
#include "gclab/rmt.hpp"
#include "gclab/rng.hpp"
#include "gclab/spectral.hpp"
#include "gclab/synthgen.hpp"
#include "oracles.hpp"

using namespace gclab;

namespace {

const RmtParams kFig1a{4.0, 1.0, 0.1875, 5.0};  // q=0.5, eta=4, ||mu||=2, c=5

Matrix xtilde_for(const ModelParams& m) {
  const AttributedGraph g = make_graph(m);
  const Vector qv = Vector::Constant(m.n, m.q);
  return normalize_adjacency(g.adjacency, qv).matrix * g.features;
}

}  // namespace

TEST_SUITE("rmt") {

TEST_CASE("fixed point: large |z| leading order") {
  const Complex z{1e6, 0.0};
  const FixedPointSolution sol = solve_fixed_point(z, kFig1a);
  CHECK(std::abs(sol.delta1 - 0.1875 / (5.0 * 1e6)) / std::abs(sol.delta1) < 0.01);
  CHECK(std::abs(sol.delta2 - 0.1875 / 1e6) / std::abs(sol.delta2) < 0.01);
  CHECK(std::abs(sol.zeta - 1e-6) / 1e-6 < 0.01);
}

TEST_CASE("fixed point: c -> infinity decouples delta2") {
  RmtParams params = kFig1a;
  params.c = 1e9;
  const Complex z{1.0, 0.5};
  const FixedPointSolution sol = solve_fixed_point(z, params);
  CHECK(std::abs(sol.delta1) < 1e-8);
  // delta2 solves the single equation nu (1+delta2) / (nu + z (1+delta2))
  const Complex res = params.nu * (1.0 + sol.delta2) /
                      (params.nu + z * (1.0 + sol.delta2)) - sol.delta2;
  CHECK(std::abs(res) < 1e-8);
}

TEST_CASE("fixed point: determinism, ratio identity, conjugate symmetry") {
  auto rng = RngStream::keyed(3, "z-draws");
  for (int rep = 0; rep < 20; ++rep) {
    const Complex z{4.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() + 0.05};
    const FixedPointSolution a = solve_fixed_point(z, kFig1a);
    const FixedPointSolution b = solve_fixed_point(z, kFig1a);
    CHECK(a.delta1 == b.delta1);
    CHECK(a.delta2 == b.delta2);

    // delta1 c (1+delta2) = delta2 (1+delta1)
    const Complex lhs = a.delta1 * kFig1a.c * (1.0 + a.delta2);
    const Complex rhs = a.delta2 * (1.0 + a.delta1);
    CHECK(std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-30) < 1e-10);

    const FixedPointSolution conj = solve_fixed_point(std::conj(z), kFig1a);
    CHECK(std::abs(conj.delta1 - std::conj(a.delta1)) < 1e-12 * (1.0 + std::abs(a.delta1)));
    CHECK(std::abs(conj.zeta - std::conj(a.zeta)) < 1e-12 * (1.0 + std::abs(a.zeta)));
  }
}

TEST_CASE("fixed point: zeta consistency and convergence metadata") {
  const FixedPointSolution sol = solve_fixed_point(Complex{0.5, 0.1}, kFig1a);
  const Complex zeta_check = (1.0 + sol.delta2) /
      (kFig1a.nu + sol.z * (1.0 + sol.delta1) * (1.0 + sol.delta2));
  CHECK(sol.zeta == zeta_check);
  CHECK(sol.residual < 1e-12);
  CHECK(sol.iterations <= 10000);
  // plugging the solution back reproduces it within 10x tolerance
  const Complex denom = kFig1a.nu + sol.z * (1.0 + sol.delta1) * (1.0 + sol.delta2);
  CHECK(std::abs((kFig1a.nu / kFig1a.c) * (1.0 + sol.delta1) / denom - sol.delta1) < 1e-11);
  CHECK(std::abs(kFig1a.nu * (1.0 + sol.delta2) / denom - sol.delta2) < 1e-11);
}

TEST_CASE("fixed point: non-convergence carries the residual") {
  SolverOptions opts;
  opts.max_iterations = 3;
  CHECK_THROWS_WITH_AS(solve_fixed_point(Complex{0.2, 1e-4}, kFig1a, opts),
                       doctest::Contains("residual"), std::runtime_error);
}

TEST_CASE("density: normalization including the smeared left tail") {
  // The limiting law has an integrable edge at 0; with eps = 1e-3 about 3.5%
  // of mass smears below x = 0, so the grid starts at -0.5.
  const Index pts = 4001;
  Vector xs(pts);
  for (Index i = 0; i < pts; ++i) {
    const double u = -0.5 + 4.5 * static_cast<double>(i) / (pts - 1);
    xs[i] = u;
  }
  const Vector f = theoretical_density(xs, 1e-3, kFig1a);
  double integral = 0.0;
  for (Index i = 0; i + 1 < pts; ++i)
    integral += 0.5 * (f[i] + f[i + 1]) * (xs[i + 1] - xs[i]);
  CHECK(std::abs(integral - 1.0) < 0.02);
  CHECK(f.minCoeff() > -1e-6);
}

TEST_CASE("density: halving epsilon barely moves the bulk values") {
  Vector xs(3);
  xs << 0.1, 0.2, 0.3;  // inside the bulk, away from edges
  const Vector f1 = theoretical_density(xs, 4e-3, kFig1a);
  const Vector f2 = theoretical_density(xs, 2e-3, kFig1a);
  for (Index i = 0; i < 3; ++i)
    CHECK(std::abs(f2[i] - f1[i]) / f1[i] < 0.01);
}

TEST_CASE("density: vanishes beyond the matched empirical spectrum") {
  ModelParams m;
  m.n = 300;
  m.p = 1500;
  m.q = 0.5;
  m.eta = 4.0;
  m.mu_norm = 2.0;
  m.seed = 5;
  const Matrix xt = xtilde_for(m);
  const Vector ev = symmetric_eigs(Matrix(xt * xt.transpose())).values;
  Vector xs(4);
  const double edge = ev.maxCoeff() + 0.5;
  xs << edge, edge + 0.5, edge + 1.0, edge + 2.0;
  const Vector f = theoretical_density(xs, 1e-3, RmtParams::from_model(m));
  CHECK(f.maxCoeff() < 1e-3);
}

TEST_CASE("stieltjes: matches the empirical resolvent trace at n = 1000") {
  ModelParams m;
  m.n = 1000;
  m.p = 1000;
  m.q = 0.5;
  m.eta = 4.0;
  m.mu_norm = 2.0;
  m.seed = 6;
  const Matrix xt = xtilde_for(m);
  const Vector ev = symmetric_eigs(Matrix(xt * xt.transpose())).values;
  // spectral argument s = -(1+i): empirical (1/n) sum 1/(lambda + 1 + i)
  const Complex s{-1.0, -1.0};
  const Complex emp = empirical_stieltjes(ev, s);
  const Complex th = stieltjes(s, RmtParams::from_model(m));
  CHECK(std::abs(th - emp) / std::abs(emp) < 0.03);
}

TEST_CASE("stieltjes: real positive at negative real spectral arguments") {
  RmtParams null_params{0.0, 0.0, 0.1875, 5.0};
  for (double s : {-0.5, -1.0, -3.0}) {
    const Complex v = stieltjes(Complex{s, 0.0}, null_params);
    CHECK(v.imag() == 0.0);
    CHECK(v.real() > 0.0);
  }
}

TEST_CASE("stieltjes: positive imaginary part on the density grid") {
  for (double x : {0.05, 0.2, 0.5, 1.0}) {
    const Complex v = stieltjes(Complex{x, 1e-3}, kFig1a);
    CHECK(v.imag() >= 0.0);
  }
}

TEST_CASE("corollary: gamma_f = 0 kills the spike for all z") {
  RmtParams params{0.0, 0.0, 0.2, 2.0};
  for (double re : {0.5, 1.0, 5.0}) {
    const CorollaryCoefficients co = corollary_equivalent(Complex{re, 0.3}, params);
    CHECK(std::abs(co.spike) == 0.0);
  }
}

TEST_CASE("corollary: eta -> 0 limit of the Theorem equivalent") {
  // 50x50 instantiation with a shared phi; gamma_g = 1e-9 on the theorem side
  const Index n = 50;
  ModelParams mp;
  mp.n = n;
  mp.p = 100;
  mp.seed = 9;
  const Vector y = gen_labels(mp);
  const Vector ybar = y / std::sqrt(static_cast<double>(n));
  auto rng = RngStream::keyed(8, "phi");
  Vector phi(n);
  const double nu = 0.1875;
  for (Index i = 0; i < n; ++i)
    phi[i] = rng.normal() * std::sqrt(nu / static_cast<double>(n));

  RmtParams limit{4.0, 0.0, nu, 5.0};
  RmtParams nearby = limit;
  nearby.gamma_g = 1e-9;
  const Complex z{1.0, 0.5};
  const CorollaryCoefficients co = corollary_equivalent(z, limit);
  ComplexMatrix direct = -co.spike * (phi * phi.transpose()).cast<Complex>();
  direct.diagonal().array() += co.bulk;
  const ComplexMatrix thm =
      theorem_equivalent_matrix(z, nearby, make_rank_two(ybar, phi, nearby));
  CHECK((thm - direct).norm() < 1e-8);
}

TEST_CASE("corollary: rejects informative graphs") {
  RmtParams params{1.0, 0.5, 0.2, 2.0};
  CHECK_THROWS_AS(corollary_equivalent(Complex{1.0, 0.0}, params), std::invalid_argument);
}

TEST_CASE("empirical alignment decays at eta = 0 despite informative features") {
  const int seeds = 50;
  double means[3];
  int k = 0;
  for (Index n : {Index{100}, Index{200}, Index{400}}) {
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
      ModelParams m;
      m.n = n;
      m.p = 5 * n;
      m.q = 0.5;
      m.eta = 0.0;
      m.mu_norm = 2.0;
      m.seed = 7000 + 13 * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(n);
      const Matrix xt = xtilde_for(m);
      acc += top_alignment(symmetric_eigs(Matrix(xt * xt.transpose())), make_graph(m).labels);
    }
    means[k++] = acc / seeds;
  }
  CHECK(means[0] > means[1]);
  CHECK(means[1] > means[2]);
  CHECK(means[2] < 0.05);
}

TEST_CASE("rank-two structure: B entries and empirical phi") {
  RmtParams params{4.0, 1.0, 0.1875, 5.0};
  const Vector ybar = Vector::Constant(4, 0.5);
  const Vector phi = Vector::Zero(4);
  const RankTwoEquivalent rt = make_rank_two(ybar, phi, params);
  const double gf_c = 4.0 / 5.0;
  CHECK(rt.B(0, 0) == doctest::Approx(1.0 * (gf_c + 1.0)));
  CHECK(rt.B(0, 1) == doctest::Approx(1.0 * (gf_c + 1.0)));
  CHECK(rt.B(1, 0) == rt.B(0, 1));
  CHECK(rt.B(1, 1) == doctest::Approx(gf_c));
  CHECK(rt.T(0, 0) == 1.0);
  CHECK(rt.T(1, 1) == doctest::Approx(0.1875));

  // phi estimator: A~ ybar - gamma_g ybar; on the exact-mean input this is 0
  Matrix a_tilde = Matrix::Zero(4, 4);
  a_tilde = 1.0 * (ybar * ybar.transpose());
  const Vector phi_hat = empirical_phi(a_tilde, ybar, 1.0);
  CHECK(phi_hat.norm() < 1e-14);
}

TEST_CASE("empirical phi concentrates near nu in squared norm") {
  ModelParams m;
  m.n = 2000;
  m.p = 2;
  m.q = 0.5;
  m.eta = 4.0;
  m.mu_norm = 0.0;
  m.seed = 10;
  const Vector y = gen_labels(m);
  const Matrix a = gen_sbm_adjacency(y, m);
  const Matrix at = normalize_adjacency(a, Vector::Constant(m.n, m.q)).matrix;
  const Vector ybar = y / std::sqrt(static_cast<double>(m.n));
  const Vector phi = empirical_phi(at, ybar, m.gamma_g());
  CHECK(phi.squaredNorm() == doctest::Approx(m.nu()).epsilon(0.1));
}

TEST_CASE("gram resolvent: zero spectrum, scalar quadratic, MC oracle") {
  const Vector zeros = Vector::Zero(50);
  const GramResolvent flat = gram_resolvent_fixed_point(zeros, Complex{2.0, 0.0});
  CHECK(std::abs(flat.delta_g) < 1e-14);
  CHECK(std::abs(flat.trace - 0.5) < 1e-14);

  // all lambda equal: z dg^2 + z dg - lambda = 0
  const double lam = 3.0, z = 1.5;
  const Vector equal = Vector::Constant(40, lam);
  const GramResolvent eq = gram_resolvent_fixed_point(equal, Complex{z, 0.0});
  const double closed = (-z + std::sqrt(z * z + 4.0 * z * lam)) / (2.0 * z);
  CHECK(std::abs(eq.delta_g - closed) < 1e-10);

  CHECK_THROWS_AS(gram_resolvent_fixed_point(Vector::Constant(3, -1.0), Complex{1.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("gram resolvent: equivalent trace matches a sampled Gram at z = 1") {
  ModelParams m;
  m.n = 1000;
  m.p = 2000;
  m.d = 5000;
  m.q = 0.5;
  m.eta = 4.0;
  m.mu_norm = 2.0;
  m.seed = 12;
  const Matrix xt = xtilde_for(m);
  // b_sigma = 1 path: G_bar = X~ X~^T exactly
  const Vector bar_eigs = symmetric_eigs(Matrix(xt * xt.transpose())).values;
  const GramResolvent gr = gram_resolvent_fixed_point(bar_eigs, Complex{1.0, 0.0});

  auto rngw = RngStream::keyed(14, "w");
  Matrix w(m.p, m.d);
  for (Index i = 0; i < m.p; ++i)
    for (Index j = 0; j < m.d; ++j) w(i, j) = rngw.normal();
  const Matrix phi = xt * w;
  const Matrix gmat = phi * phi.transpose() / static_cast<double>(m.d);
  const Vector gev = symmetric_eigs(gmat).values;
  double emp = 0.0;
  for (Index i = 0; i < gev.size(); ++i) emp += 1.0 / (gev[i] + 1.0);
  emp /= static_cast<double>(m.n);
  CHECK(std::abs(gr.trace.real() - emp) / emp < 0.03);
  CHECK(std::abs(gr.trace.imag()) < 1e-12);
}

TEST_CASE("kernel expansion: linear kappa is a forced substitution") {
  const KernelExpansion e = kernel_expansion(4.0, 2.0, 1000, KappaSpec::linear());
  CHECK(e.coeff_ones == 0.0);
  CHECK(e.coeff_linear == 1.0);
  CHECK(e.coeff_identity == doctest::Approx(1.0 - 2.0));
  CHECK(e.gamma_f_over_c == doctest::Approx(2.0));
}

TEST_CASE("kernel expansion: exponential kernel approximates the true kernel") {
  ModelParams m;
  m.n = 1000;
  m.p = 2000;
  m.q = 0.5;
  m.eta = 0.0;
  m.mu_norm = 2.0;
  m.seed = 15;
  const Vector y = gen_labels(m);
  const Matrix x = gen_gmm_features(y, m);
  const Vector ybar = y / std::sqrt(static_cast<double>(m.n));
  const Matrix z_noise = x - (y / std::sqrt(static_cast<double>(m.p))) * m.mu().transpose();

  Matrix k(m.n, m.n);
  const Matrix inner = x * x.transpose();
  for (Index i = 0; i < m.n; ++i)
    for (Index j = 0; j < m.n; ++j) k(i, j) = std::exp(inner(i, j));

  const KernelExpansion e =
      kernel_expansion(m.gamma_f(), m.c(), m.p, KappaSpec::exponential());
  const Matrix kt = e.instantiate(ybar, z_noise);
  const auto norm2 = [](const Matrix& mm) {
    const Vector ev = symmetric_eigs(Matrix(0.5 * (mm + mm.transpose()))).values;
    return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  };
  CHECK(norm2(k - kt) / norm2(kt) < 0.1);
}

TEST_CASE("kernel expansion: centering annihilates the ones component") {
  const Index n = 60;
  ModelParams m;
  m.n = n;
  m.p = 120;
  m.mu_norm = 1.5;
  m.seed = 16;
  const Vector y = gen_labels(m);
  const Matrix x = gen_gmm_features(y, m);
  const Vector ybar = y / std::sqrt(static_cast<double>(n));
  const Matrix z_noise = x - (y / std::sqrt(120.0)) * m.mu().transpose();
  const KernelExpansion e = kernel_expansion(m.gamma_f(), m.c(), m.p,
                                             KappaSpec::exponential());
  const Matrix kt = e.instantiate(ybar, z_noise);
  const Matrix p_mat = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
  const Matrix lhs = p_mat * kt * p_mat;
  const Matrix rhs = e.coeff_linear * (p_mat * (e.gamma_f_over_c * (ybar * ybar.transpose()) +
                                                z_noise * z_noise.transpose()) * p_mat) +
                     e.coeff_identity * p_mat;
  CHECK((lhs - rhs).norm() < 1e-8 * std::max(1.0, kt.norm()));
}

TEST_CASE("kappa spec: central differences recover exp derivatives") {
  const KappaSpec spec = KappaSpec::from_function([](double t) { return std::exp(t); });
  CHECK(spec.at_zero == 1.0);
  CHECK(spec.at_one == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(spec.deriv1 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(spec.deriv2 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("params validation") {
  RmtParams bad = kFig1a;
  bad.nu = 0.3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = kFig1a;
  bad.c = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE
