#include "gclab/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace gclab {

namespace {

bool is_symmetric(const Matrix& m) { return m.isApprox(m.transpose()); }

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": must be square");
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace

std::string OperatorRecipe::describe() const {
  switch (kind) {
    case Kind::Adjacency: return "A~";
    case Kind::AdjacencyPlusIdentity: return "A~+I";
    case Kind::AdjacencyPlusCenteredKernel: return "A~+PKP";
    case Kind::GcnNormalized: return "gcn(A)";
    case Kind::RawPlusIdentity: return "R+I";
    case Kind::NormalizedKernel: return sparsified ? "N(KoA)" : "N(K)";
    case Kind::AlphaMix:
      return "alpha-mix(alpha=" + std::to_string(alpha) + ",ratio=" + std::to_string(ratio) + ")";
    case Kind::BetaMix:
      return std::string("beta-mix(beta=") + std::to_string(beta) +
             (sparsified ? ",sparsified)" : ")");
  }
  return "unknown";
}

Vector estimate_q_vector(const Matrix& adjacency) {
  check_square(adjacency, "adjacency");
  const Vector degrees = adjacency.rowwise().sum();
  const double total = degrees.sum();
  if (total <= 0.0) throw std::invalid_argument("adjacency: empty graph, d^T 1 = 0");
  return degrees / std::sqrt(total);
}

PropagationOperator normalize_adjacency(const Matrix& adjacency, const Vector& q_vector) {
  check_square(adjacency, "adjacency");
  if (q_vector.size() != adjacency.rows())
    throw std::invalid_argument("q_vector: length must equal adjacency dimension");
  const double sqn = std::sqrt(static_cast<double>(adjacency.rows()));
  PropagationOperator op;
  op.matrix = (adjacency - q_vector * q_vector.transpose()) / sqn;
  op.recipe.kind = OperatorRecipe::Kind::Adjacency;
  op.symmetric = is_symmetric(op.matrix);
  return op;
}

PropagationOperator gcn_normalize(const Matrix& adjacency) {
  check_square(adjacency, "adjacency");
  Vector degrees = adjacency.rowwise().sum();
  Vector scale(degrees.size());
  for (Index i = 0; i < degrees.size(); ++i) {
    if (degrees[i] <= 0.0) throw std::invalid_argument("adjacency: zero-degree node " + std::to_string(i));
    scale[i] = 1.0 / std::sqrt(degrees[i]);
  }
  PropagationOperator op;
  // scale_i * scale_j computed once per pair keeps symmetric inputs exactly
  // symmetric in floating point.
  op.matrix = adjacency.cwiseProduct(scale * scale.transpose());
  op.recipe.kind = OperatorRecipe::Kind::GcnNormalized;
  op.symmetric = is_symmetric(op.matrix);
  return op;
}

KernelMatrix linear_kernel(const Matrix& features) {
  if (!features.allFinite()) throw std::invalid_argument("features: non-finite entries");
  KernelMatrix k;
  k.matrix = features * features.transpose();
  k.matrix = 0.5 * (k.matrix + k.matrix.transpose()).eval();  // exact symmetry
  k.kind = KernelMatrix::Kind::Linear;
  return k;
}

KernelMatrix center_kernel(const KernelMatrix& kernel) {
  check_square(kernel.matrix, "kernel");
  const Index n = kernel.matrix.rows();
  const Vector row_means = kernel.matrix.rowwise().mean();
  const double grand_mean = row_means.mean();
  KernelMatrix out = kernel;
  // (row_means_i + row_means_j) formed as one symmetric matrix so symmetric
  // kernels stay exactly symmetric.
  const Matrix pair_means = row_means.replicate(1, n) + row_means.transpose().replicate(n, 1);
  out.matrix = kernel.matrix - pair_means + Matrix::Constant(n, n, grand_mean);
  out.centered = true;
  return out;
}

KernelMatrix normalize_kernel(const KernelMatrix& kernel) {
  check_square(kernel.matrix, "kernel");
  const Vector row_sums = kernel.matrix.rowwise().sum();
  Vector scale = Vector::Zero(row_sums.size());
  bool any = false;
  for (Index i = 0; i < row_sums.size(); ++i) {
    if (row_sums[i] > 0.0) {
      scale[i] = 1.0 / std::sqrt(row_sums[i]);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("kernel not normalizable: all row sums <= 0");
  KernelMatrix out = kernel;
  out.matrix = kernel.matrix.cwiseProduct(scale * scale.transpose());
  out.normalized = true;
  return out;
}

KernelMatrix sparsify_kernel(const KernelMatrix& kernel, const Matrix& adjacency) {
  check_square(kernel.matrix, "kernel");
  if (adjacency.rows() != kernel.matrix.rows() || adjacency.cols() != kernel.matrix.cols())
    throw std::invalid_argument("adjacency: shape mismatch with kernel");
  KernelMatrix out = kernel;
  out.matrix = kernel.matrix.cwiseProduct(adjacency);
  out.sparsified = true;
  return out;
}

KernelMatrix sparsified_linear_kernel(const Matrix& features, const Matrix& adjacency) {
  if (adjacency.rows() != features.rows())
    throw std::invalid_argument("adjacency: shape mismatch with features");
  const Index n = features.rows();
  KernelMatrix out;
  out.kind = KernelMatrix::Kind::Linear;
  out.sparsified = true;
  out.matrix = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      if (adjacency(i, j) != 0.0) {
        const double v = features.row(i).dot(features.row(j));
        out.matrix(i, j) = v;
        out.matrix(j, i) = v;
      }
    }
  }
  return out;
}

PropagationOperator mix_operators(const PropagationOperator& a,
                                  const PropagationOperator& b, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0))
    throw std::invalid_argument("weight: must lie in [0,1]");
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
    throw std::invalid_argument("mix_operators: shape mismatch");
  PropagationOperator op;
  op.matrix = weight * a.matrix + (1.0 - weight) * b.matrix;
  op.recipe = a.recipe;
  op.symmetric = a.symmetric && b.symmetric;
  return op;
}

PropagationOperator alpha_mix_operator(const Matrix& clean_adjacency,
                                       const Matrix& er_noise, double alpha) {
  PropagationOperator clean = gcn_normalize(clean_adjacency);
  PropagationOperator noise;
  noise.matrix = er_noise + Matrix::Identity(er_noise.rows(), er_noise.cols());
  noise.recipe.kind = OperatorRecipe::Kind::RawPlusIdentity;
  noise.symmetric = is_symmetric(noise.matrix);
  PropagationOperator op = mix_operators(clean, noise, alpha);
  op.recipe.kind = OperatorRecipe::Kind::AlphaMix;
  op.recipe.alpha = alpha;
  return op;
}

PropagationOperator beta_mix_operator(const Matrix& perturbed_adjacency,
                                      const Matrix& features, double beta,
                                      bool sparsified) {
  PropagationOperator graph_part = gcn_normalize(perturbed_adjacency);
  KernelMatrix k = sparsified ? sparsified_linear_kernel(features, perturbed_adjacency)
                              : linear_kernel(features);
  KernelMatrix nk = normalize_kernel(k);
  PropagationOperator kernel_part;
  kernel_part.matrix = std::move(nk.matrix);
  kernel_part.recipe.kind = OperatorRecipe::Kind::NormalizedKernel;
  kernel_part.recipe.sparsified = sparsified;
  kernel_part.symmetric = true;
  PropagationOperator op = mix_operators(graph_part, kernel_part, beta);
  op.recipe.kind = OperatorRecipe::Kind::BetaMix;
  op.recipe.beta = beta;
  op.recipe.sparsified = sparsified;
  return op;
}

}  // namespace gclab
