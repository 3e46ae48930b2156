#include "gclab/rgcn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gclab/rng.hpp"

namespace gclab {

Matrix sample_weights(Index p, Index d, std::uint64_t weight_seed) {
  auto rng = RngStream::keyed(weight_seed, "gcn-weights");
  Matrix w(p, d);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < d; ++j) w(i, j) = rng.normal();
  return w;
}

EmbeddingMatrix forward_with_weights(const Matrix& op, const Matrix& features,
                                     const ActivationSpec& activation,
                                     const Matrix& weights) {
  if (op.rows() != op.cols() || op.cols() != features.rows())
    throw std::invalid_argument("forward: operator/features shape mismatch");
  if (weights.rows() != features.cols())
    throw std::invalid_argument("forward: weights must be p x d");
  EmbeddingMatrix e;
  e.values = activation.apply(op * features * weights);
  e.activation = activation.name();
  return e;
}

EmbeddingMatrix forward(const Matrix& op, const Matrix& features,
                        const ActivationSpec& activation, Index d,
                        std::uint64_t weight_seed) {
  EmbeddingMatrix e = forward_with_weights(op, features, activation,
                                           sample_weights(features.cols(), d, weight_seed));
  e.weight_seed = weight_seed;
  return e;
}

Matrix gram(const EmbeddingMatrix& embedding) {
  if (!embedding.values.allFinite())
    throw std::invalid_argument("gram: non-finite embedding entries");
  const double d = static_cast<double>(embedding.values.cols());
  Matrix g = embedding.values * embedding.values.transpose() / d;
  return 0.5 * (g + g.transpose()).eval();
}

Matrix gram_equivalent(const Matrix& x_tilde, double b_sigma) {
  const Index n = x_tilde.rows();
  const double b2 = b_sigma * b_sigma;
  return b2 * (x_tilde * x_tilde.transpose()) + (1.0 - b2) * Matrix::Identity(n, n);
}

std::vector<Index> sample_train_rows(const Vector& labels, Index per_class,
                                     std::uint64_t seed) {
  std::vector<Index> minus, plus;
  for (Index i = 0; i < labels.size(); ++i)
    (labels[i] < 0 ? minus : plus).push_back(i);
  if (static_cast<Index>(minus.size()) < per_class ||
      static_cast<Index>(plus.size()) < per_class)
    throw std::invalid_argument("sample_train_rows: class smaller than per_class");
  auto rng = RngStream::keyed(seed, "train-mask");
  rng.shuffle(minus);
  rng.shuffle(plus);
  std::vector<Index> rows(minus.begin(), minus.begin() + per_class);
  rows.insert(rows.end(), plus.begin(), plus.begin() + per_class);
  std::sort(rows.begin(), rows.end());
  return rows;
}

RidgeResult ridge_readout(const Matrix& embeddings, const Vector& labels,
                          const std::vector<Index>& train_rows, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda: must be > 0");
  if (train_rows.empty()) throw std::invalid_argument("train_rows: empty");
  const Index n = embeddings.rows(), d = embeddings.cols();
  bool has_minus = false, has_plus = false;
  Matrix xtr(static_cast<Index>(train_rows.size()), d);
  Vector ytr(static_cast<Index>(train_rows.size()));
  std::vector<bool> in_train(static_cast<std::size_t>(n), false);
  for (std::size_t k = 0; k < train_rows.size(); ++k) {
    const Index i = train_rows[k];
    if (i < 0 || i >= n) throw std::invalid_argument("train_rows: index out of range");
    xtr.row(static_cast<Index>(k)) = embeddings.row(i);
    ytr[static_cast<Index>(k)] = labels[i];
    (labels[i] < 0 ? has_minus : has_plus) = true;
    in_train[static_cast<std::size_t>(i)] = true;
  }
  if (!has_minus || !has_plus)
    throw std::invalid_argument("train_rows: must contain both classes");

  Matrix normal = xtr.transpose() * xtr;
  normal.diagonal().array() += lambda;
  RidgeResult result;
  result.weights = Eigen::LLT<Matrix>(normal).solve(xtr.transpose() * ytr);

  const Index held_out = n - static_cast<Index>(train_rows.size());
  if (held_out <= 0) throw std::invalid_argument("train_rows: no held-out rows left");
  result.predictions.resize(held_out);
  result.test_rows.reserve(static_cast<std::size_t>(held_out));
  Index correct = 0, k = 0;
  for (Index i = 0; i < n; ++i) {
    if (in_train[static_cast<std::size_t>(i)]) continue;
    const double score = embeddings.row(i).dot(result.weights);
    const double pred = score >= 0.0 ? 1.0 : -1.0;
    result.test_rows.push_back(i);
    result.predictions[k++] = pred;
    if (pred == labels[i]) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(held_out);
  return result;
}

double mlp_baseline(const Matrix& features, const ActivationSpec& activation,
                    Index d, std::uint64_t weight_seed,
                    const std::vector<Index>& train_rows, const Vector& labels,
                    double lambda) {
  const Matrix identity = Matrix::Identity(features.rows(), features.rows());
  EmbeddingMatrix e = forward(identity, features, activation, d, weight_seed);
  return ridge_readout(e.values, labels, train_rows, lambda).accuracy;
}

}  // namespace gclab
