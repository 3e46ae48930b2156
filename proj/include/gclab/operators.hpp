#pragma once

#include <string>

#include "gclab/types.hpp"

namespace gclab {

struct OperatorRecipe {
  enum class Kind {
    Adjacency,                    // A_tilde = (A - q q^T)/sqrt(n)
    AdjacencyPlusIdentity,        // A_tilde + I
    AdjacencyPlusCenteredKernel,  // A_tilde + P K P
    GcnNormalized,                // D^{-1/2} A D^{-1/2}
    RawPlusIdentity,              // R + I (theoretical noise part)
    NormalizedKernel,             // N(K) or N(K o A_hat)
    AlphaMix,                     // alpha * A_bar + (1-alpha) * (R + I)
    BetaMix,                      // beta * A_hat + (1-beta) * N(K[ o A_hat])
  };
  Kind kind = Kind::Adjacency;
  double alpha = 1.0;
  double beta = 1.0;
  double ratio = 1.0;
  bool sparsified = false;
  std::string describe() const;
};

struct PropagationOperator {
  Matrix matrix;
  OperatorRecipe recipe;
  bool symmetric = true;
};

struct KernelMatrix {
  enum class Kind { Linear, Smooth };
  Matrix matrix;
  Kind kind = Kind::Linear;
  bool centered = false;
  bool normalized = false;
  bool sparsified = false;
};

/// Degree-based estimate q_hat = d / sqrt(d^T 1) with d = A 1.
Vector estimate_q_vector(const Matrix& adjacency);

/// A_tilde = (A - q q^T) / sqrt(n). q_vector is either the exact q * 1_n or
/// the degree estimate.
PropagationOperator normalize_adjacency(const Matrix& adjacency, const Vector& q_vector);

/// D^{-1/2} A D^{-1/2}; assumes self-loops are already present.
PropagationOperator gcn_normalize(const Matrix& adjacency);

/// K = X X^T.
KernelMatrix linear_kernel(const Matrix& features);

/// P K P with the centring matrix P = I - (1/n) 1 1^T.
KernelMatrix center_kernel(const KernelMatrix& kernel);

/// D_K^{-1/2} K D_K^{-1/2} with D_K = diag(K 1). Rows whose degree is <= 0
/// are zeroed; throws if no row is normalizable.
KernelMatrix normalize_kernel(const KernelMatrix& kernel);

/// Entrywise product K o A_hat.
KernelMatrix sparsify_kernel(const KernelMatrix& kernel, const Matrix& adjacency);

/// Sparsified linear kernel computed edge by edge, O(|E| p): only inner
/// products x_i^T x_j with A_hat_ij = 1 are formed.
KernelMatrix sparsified_linear_kernel(const Matrix& features, const Matrix& adjacency);

/// weight * a + (1 - weight) * b, weight in [0, 1].
PropagationOperator mix_operators(const PropagationOperator& a,
                                  const PropagationOperator& b, double weight);

/// alpha * gcn_normalize(clean_adj) + (1 - alpha) * (R + I): the theoretical
/// noise-mixing operator. R enters raw, as written.
PropagationOperator alpha_mix_operator(const Matrix& clean_adjacency,
                                       const Matrix& er_noise, double alpha);

/// beta * gcn_normalize(perturbed_adj) + (1 - beta) * N(K) with K the linear
/// feature kernel, Hadamard-sparsified by the perturbed adjacency if requested.
PropagationOperator beta_mix_operator(const Matrix& perturbed_adjacency,
                                      const Matrix& features, double beta,
                                      bool sparsified);

}  // namespace gclab
