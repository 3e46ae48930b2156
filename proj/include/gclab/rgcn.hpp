#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gclab/activation.hpp"
#include "gclab/types.hpp"

namespace gclab {

struct EmbeddingMatrix {
  Matrix values;  // n x d
  std::string operator_recipe;
  std::string activation;
  std::uint64_t weight_seed = 0;
};

/// p x d iid N(0,1) weights from a dedicated stream.
Matrix sample_weights(Index p, Index d, std::uint64_t weight_seed);

/// Phi = sigma(S X W), W sampled from weight_seed.
EmbeddingMatrix forward(const Matrix& op, const Matrix& features,
                        const ActivationSpec& activation, Index d,
                        std::uint64_t weight_seed);

/// Test hook: Phi = sigma(S X W) with caller-supplied W.
EmbeddingMatrix forward_with_weights(const Matrix& op, const Matrix& features,
                                     const ActivationSpec& activation,
                                     const Matrix& weights);

/// G = (1/d) Phi Phi^T.
Matrix gram(const EmbeddingMatrix& embedding);

/// G_tilde = b_sigma^2 X~ X~^T + (1 - b_sigma^2) I.
Matrix gram_equivalent(const Matrix& x_tilde, double b_sigma);

struct RidgeResult {
  Vector weights;       // d readout weights
  Vector predictions;   // +-1 on held-out rows, ordered by row index
  std::vector<Index> test_rows;
  double accuracy = 0.0;
};

/// Closed-form ridge readout on the training rows; sign predictions and
/// accuracy on the complement.
RidgeResult ridge_readout(const Matrix& embeddings, const Vector& labels,
                          const std::vector<Index>& train_rows, double lambda);

/// Uniformly samples `per_class` training rows from each label class.
std::vector<Index> sample_train_rows(const Vector& labels, Index per_class,
                                     std::uint64_t seed);

/// forward + ridge_readout with the identity operator (no message passing).
double mlp_baseline(const Matrix& features, const ActivationSpec& activation,
                    Index d, std::uint64_t weight_seed,
                    const std::vector<Index>& train_rows, const Vector& labels,
                    double lambda);

}  // namespace gclab
