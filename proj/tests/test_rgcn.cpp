#include <doctest.h>

#include <cmath>

#include "gclab/rgcn.hpp"
#include "gclab/rng.hpp"
#include "gclab/spectral.hpp"
#include "gclab/synthgen.hpp"
#include "oracles.hpp"

using namespace gclab;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  auto rng = RngStream::keyed(seed, "test-matrix");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

/// Two separable clusters around +-2 in the first coordinate.
Matrix cluster_embeddings(const Vector& labels, Index d, std::uint64_t seed) {
  auto rng = RngStream::keyed(seed, "clusters");
  Matrix e(labels.size(), d);
  for (Index i = 0; i < labels.size(); ++i) {
    for (Index j = 0; j < d; ++j) e(i, j) = 0.1 * rng.normal();
    e(i, 0) += 2.0 * labels[i];
  }
  return e;
}

}  // namespace

TEST_SUITE("rgcn") {

TEST_CASE("forward: identity chain reproduces the features") {
  const ActivationSpec id = normalize_activation(ActivationSpec::Base::Identity);
  const Matrix x = random_matrix(6, 4, 1);
  const EmbeddingMatrix e = forward_with_weights(Matrix::Identity(6, 6), x, id,
                                                 Matrix::Identity(4, 4));
  CHECK(e.values == x);
}

TEST_CASE("forward: zero features give a constant matrix") {
  const ActivationSpec relu = normalize_activation(ActivationSpec::Base::ShiftedRelu);
  const EmbeddingMatrix e = forward(Matrix::Identity(5, 5), Matrix::Zero(5, 3), relu, 7, 2);
  CHECK((e.values.array() == relu.shift).all());
}

TEST_CASE("forward: 3x3 toy case matches a hand loop") {
  const ActivationSpec erf = normalize_activation(ActivationSpec::Base::Erf);
  const Matrix s = random_matrix(3, 3, 3);
  const Matrix x = random_matrix(3, 3, 4);
  const Matrix w = random_matrix(3, 3, 5);
  const EmbeddingMatrix e = forward_with_weights(s, x, erf, w);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      double pre = 0.0;
      for (Index a = 0; a < 3; ++a)
        for (Index b = 0; b < 3; ++b) pre += s(i, a) * x(a, b) * w(b, j);
      CHECK(e.values(i, j) == doctest::Approx(erf(pre)).epsilon(1e-12));
    }
}

TEST_CASE("forward: deterministic given the weight seed, shape checks") {
  const ActivationSpec id = normalize_activation(ActivationSpec::Base::Identity);
  const Matrix x = random_matrix(8, 5, 6);
  const Matrix op = Matrix::Identity(8, 8);
  CHECK(forward(op, x, id, 16, 42).values == forward(op, x, id, 16, 42).values);
  CHECK(forward(op, x, id, 16, 42).values != forward(op, x, id, 16, 43).values);
  CHECK_THROWS_AS(forward(Matrix::Identity(7, 7), x, id, 16, 1), std::invalid_argument);
}

TEST_CASE("gram: scaled orthonormal rows, PSD, element oracle") {
  EmbeddingMatrix e;
  e.values = std::sqrt(3.0) * Matrix::Identity(3, 3);
  CHECK(gram(e).isApprox(Matrix::Identity(3, 3), 1e-14));

  EmbeddingMatrix f;
  f.values = random_matrix(20, 50, 7);
  const Matrix g = gram(f);
  CHECK(symmetric_eigs(g).values.minCoeff() >= -1e-10);

  EmbeddingMatrix toy;
  toy.values = random_matrix(4, 6, 8);
  const Matrix gt = gram(toy);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (Index l = 0; l < 6; ++l) acc += toy.values(i, l) * toy.values(j, l);
      CHECK(gt(i, j) == doctest::Approx(acc / 6.0).epsilon(1e-12));
    }
}

TEST_CASE("gram_equivalent: b_sigma endpoints") {
  const Matrix xt = random_matrix(5, 9, 9);
  CHECK(gram_equivalent(xt, 1.0).isApprox(Matrix(xt * xt.transpose()), 1e-14));
  CHECK(gram_equivalent(xt, 0.0) == Matrix::Identity(5, 5));
}

TEST_CASE("gram converges to the equivalent as d grows") {
  ModelParams m;
  m.n = 120;
  m.p = 240;
  m.q = 0.5;
  m.eta = 4.0;
  m.mu_norm = 2.0;
  m.seed = 11;
  const AttributedGraph g = make_graph(m);
  const Matrix at = (g.adjacency - 0.25 * Matrix::Ones(m.n, m.n)) / std::sqrt(double(m.n));
  const Matrix xt = at * g.features;
  const ActivationSpec id = normalize_activation(ActivationSpec::Base::Identity);
  const Matrix target = gram_equivalent(xt, 1.0);
  double prev = 1e300;
  for (Index d : {Index{64}, Index{256}, Index{1024}}) {
    const EmbeddingMatrix e = forward(Matrix::Identity(m.n, m.n), xt, id, d, 21);
    const double err = (gram(e) - target).squaredNorm() / static_cast<double>(m.n);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("gram spectrum is insensitive to the weight seed") {
  ModelParams m;
  m.n = 100;
  m.p = 200;
  m.q = 0.5;
  m.eta = 4.0;
  m.mu_norm = 2.0;
  m.seed = 13;
  const AttributedGraph g = make_graph(m);
  const Matrix at = (g.adjacency - 0.25 * Matrix::Ones(m.n, m.n)) / std::sqrt(double(m.n));
  const Matrix xt = at * g.features;
  const ActivationSpec erf = normalize_activation(ActivationSpec::Base::Erf);
  const Vector ev1 = symmetric_eigs(gram(forward(Matrix::Identity(m.n, m.n), xt, erf,
                                                 1000, 100))).values;
  const Vector ev2 = symmetric_eigs(gram(forward(Matrix::Identity(m.n, m.n), xt, erf,
                                                 1000, 200))).values;
  const double lo = std::min(ev1.minCoeff(), ev2.minCoeff());
  const double hi = std::max(ev1.maxCoeff(), ev2.maxCoeff());
  Vector edges(41);
  for (Index b = 0; b <= 40; ++b) edges[b] = lo + (hi - lo) * b / 40.0;
  const Histogram h1 = spectral_histogram(ev1, edges);
  const Histogram h2 = spectral_histogram(ev2, edges);
  CHECK(total_variation(h1, h2.mass) < 0.15);
}

TEST_CASE("forward is Lipschitz in the features") {
  const ActivationSpec erf = normalize_activation(ActivationSpec::Base::Erf);
  const Matrix s = random_matrix(10, 10, 14);
  const Matrix x = random_matrix(10, 6, 15);
  const Matrix w = random_matrix(6, 8, 16);
  const Matrix pert = 1e-3 * random_matrix(10, 6, 17);
  const Matrix phi0 = forward_with_weights(s, x, erf, w).values;
  const Matrix phi1 = forward_with_weights(s, x + pert, erf, w).values;
  const auto opnorm = [](const Matrix& m2) {
    return std::sqrt(symmetric_eigs(Matrix(m2 * m2.transpose())).values.maxCoeff());
  };
  const double bound = erf.lipschitz * opnorm(s) * opnorm(w.transpose()) * pert.norm();
  CHECK((phi1 - phi0).norm() <= bound * (1.0 + 1e-9));
}

TEST_CASE("ridge: separable clusters are classified perfectly") {
  Vector labels(60);
  for (Index i = 0; i < 60; ++i) labels[i] = i < 30 ? -1.0 : 1.0;
  const Matrix e = cluster_embeddings(labels, 5, 18);
  const std::vector<Index> train = sample_train_rows(labels, 10, 19);
  const RidgeResult r = ridge_readout(e, labels, train, 1e-4);
  CHECK(r.accuracy == 1.0);
  CHECK(r.predictions.size() == 40);
}

TEST_CASE("ridge: permuted labels give chance accuracy") {
  auto rng = RngStream::keyed(20, "perm");
  double acc = 0.0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    Vector labels(100);
    for (Index i = 0; i < 100; ++i) labels[i] = i < 50 ? -1.0 : 1.0;
    const Matrix e = cluster_embeddings(labels, 4, 30 + rep);
    std::vector<double> shuffled(labels.data(), labels.data() + 100);
    rng.shuffle(shuffled);
    const Vector ys = Eigen::Map<Vector>(shuffled.data(), 100);
    const std::vector<Index> train = sample_train_rows(ys, 10, 40 + rep);
    acc += ridge_readout(e, ys, train, 1e-2).accuracy;
  }
  acc /= reps;
  CHECK(acc > 0.4);
  CHECK(acc < 0.6);
}

TEST_CASE("ridge: closed form matches gradient descent") {
  Vector labels(20);
  for (Index i = 0; i < 20; ++i) labels[i] = i % 2 ? 1.0 : -1.0;
  const Matrix e = random_matrix(20, 5, 22);
  std::vector<Index> train;
  for (Index i = 0; i < 14; ++i) train.push_back(i);
  const RidgeResult r = ridge_readout(e, labels, train, 1e-2);
  Matrix xtr(14, 5);
  Vector ytr(14);
  for (Index i = 0; i < 14; ++i) {
    xtr.row(i) = e.row(i);
    ytr[i] = labels[i];
  }
  const Vector w_gd = oracle::gradient_descent_ridge(xtr, ytr, 1e-2);
  CHECK((r.weights - w_gd).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("ridge: error paths") {
  Vector labels = Vector::Ones(10);
  labels[0] = -1.0;
  const Matrix e = random_matrix(10, 3, 23);
  CHECK_THROWS_AS(ridge_readout(e, labels, {1, 2, 3}, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(ridge_readout(e, labels, {0, 1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ridge_readout(e, labels, {}, 1e-2), std::invalid_argument);
}

TEST_CASE("mlp baseline: separable features and pure-noise features") {
  Vector labels(80);
  for (Index i = 0; i < 80; ++i) labels[i] = i < 40 ? -1.0 : 1.0;
  const Matrix feats = cluster_embeddings(labels, 6, 24);
  const ActivationSpec erf = normalize_activation(ActivationSpec::Base::Erf);
  const std::vector<Index> train = sample_train_rows(labels, 15, 25);
  CHECK(mlp_baseline(feats, erf, 64, 26, train, labels, 1e-4) == 1.0);

  double acc = 0.0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    ModelParams m;
    m.n = 100;
    m.p = 50;
    m.mu_norm = 0.0;
    m.seed = 500 + rep;
    const AttributedGraph g = make_graph(m);
    const std::vector<Index> tr = sample_train_rows(g.labels, 10, 600 + rep);
    acc += mlp_baseline(g.features, erf, 64, 700 + rep, tr, g.labels, 1e-2);
  }
  acc /= reps;
  CHECK(acc > 0.35);
  CHECK(acc < 0.65);
}

TEST_CASE("train mask sampling: per-class counts and determinism") {
  Vector labels(50);
  for (Index i = 0; i < 50; ++i) labels[i] = i < 20 ? -1.0 : 1.0;
  const std::vector<Index> rows = sample_train_rows(labels, 8, 27);
  CHECK(rows.size() == 16);
  Index minus = 0;
  for (Index i : rows)
    if (labels[i] < 0) ++minus;
  CHECK(minus == 8);
  CHECK(rows == sample_train_rows(labels, 8, 27));
  CHECK_THROWS_AS(sample_train_rows(labels, 30, 1), std::invalid_argument);
}

}  // TEST_SUITE
