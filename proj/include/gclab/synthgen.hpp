#pragma once

#include <cstdint>
#include <string>

#include "gclab/types.hpp"

namespace gclab {

/// Generative constants of the synthetic model: two-class stochastic block
/// model adjacency with edge base probability q and community contrast eta,
/// Gaussian-mixture node features with mean +-mu/sqrt(p).
struct ModelParams {
  Index n = 200;
  Index p = 1000;
  Index d = 512;
  double q = 0.5;
  double eta = 4.0;
  double mu_norm = 2.0;
  Vector mu_direction;  // unit vector in R^p; empty means first basis vector
  double class_balance = 0.5;
  bool directed = false;
  std::uint64_t seed = 1;

  // Derived ratios and the Theorem quantities; recomputed on access.
  double c() const { return static_cast<double>(p) / static_cast<double>(n); }
  double r() const { return static_cast<double>(d) / static_cast<double>(n); }
  double gamma_f() const { return mu_norm * mu_norm; }
  double gamma_g() const { return q * q * eta; }
  double nu() const { return q * q * (1.0 - q * q); }

  Vector mu() const;  // mu_norm * mu_direction (length p)

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct Provenance {
  enum class Kind { Clean, TheoreticalNoise, EdgeDeleted, EdgeInserted, FeatureNoise };
  Kind kind = Kind::Clean;
  double alpha = 1.0;   // TheoreticalNoise
  double ratio = 1.0;   // TheoreticalNoise / EdgeDeleted / EdgeInserted
  double gamma = 0.0;   // FeatureNoise
  std::string describe() const;
};

struct AttributedGraph {
  Matrix adjacency;  // n x n binary, unit diagonal
  Matrix features;   // n x p
  Vector labels;     // entries in {-1, +1}
  Provenance provenance;

  Index n() const { return adjacency.rows(); }
  Vector normalized_labels() const { return labels / std::sqrt(static_cast<double>(labels.size())); }
};

/// Exactly round(class_balance * n) entries are -1 (class 1), the rest +1;
/// positions are a seeded permutation.
Vector gen_labels(const ModelParams& params);

/// Row i = label_i * mu/sqrt(p) + z_i with z_i ~ N(0, I_p/p).
Matrix gen_gmm_features(const Vector& labels, const ModelParams& params);

/// SBM adjacency with A_ii = 1 and off-diagonal edge probability
/// q^2 (1 + eta * y_i y_j / sqrt(n)), matching the random equivalent
/// E[A_tilde] = q^2 eta ybar ybar^T that the deterministic-equivalent
/// theory is built on. Undirected graphs mirror the upper triangle.
Matrix gen_sbm_adjacency(const Vector& labels, const ModelParams& params);

/// Symmetric Erdos-Renyi noise graph: zero diagonal, iid Bernoulli(density)
/// upper triangle.
Matrix gen_er_noise(Index n, double density, std::uint64_t seed);

/// Number of undirected off-diagonal edges (i < j with A_ij = 1).
Index edge_count(const Matrix& adjacency);

/// Density such that an ER graph has, in expectation, ratio * edge_count(adj)
/// edges. Throws if that exceeds density 1.
double er_density_for_ratio(const Matrix& adjacency, double ratio);

/// Uniform edge deletion (ratio < 1) or insertion (ratio > 1) to reach
/// |E_hat| = round(ratio * |E|), rounding half away from zero. The diagonal
/// is untouched; ratio = 1 returns the graph unchanged.
AttributedGraph perturb_edges(const AttributedGraph& graph, double target_ratio,
                              std::uint64_t seed);

/// Adds independent N(0, gamma * var_j) noise to feature column j, where
/// var_j is the unbiased empirical variance of that column.
AttributedGraph perturb_features(const AttributedGraph& graph, double gamma,
                                 std::uint64_t seed);

/// Samples labels, features and adjacency from independent streams keyed by
/// params.seed.
AttributedGraph make_graph(const ModelParams& params);

}  // namespace gclab
