#include "gclab/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "gclab/operators.hpp"

namespace gclab {

Vector Histogram::density() const {
  Vector d(mass.size());
  for (Index b = 0; b < mass.size(); ++b) {
    const double w = width(b);
    d[b] = w > 0.0 ? mass[b] / w : 0.0;
  }
  return d;
}

EigenDecomposition symmetric_eigs(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("symmetric_eigs: matrix must be square");
  if (!matrix.allFinite())
    throw std::invalid_argument("symmetric_eigs: non-finite entries");
  const double scale = std::max(matrix.norm(), 1e-300);
  const double asym = (matrix - matrix.transpose()).norm() / scale;
  if (asym > 1e-8)
    throw std::invalid_argument("symmetric_eigs: relative asymmetry " +
                                std::to_string(asym) + " exceeds 1e-8");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (matrix + matrix.transpose()));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigs: eigensolver failed");
  EigenDecomposition eig{solver.eigenvalues(), solver.eigenvectors()};
  const Matrix rec = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  if ((matrix - rec).norm() / scale > 1e-8)
    throw std::runtime_error("symmetric_eigs: reconstruction error exceeds 1e-8");
  return eig;
}

double alignment(const Vector& v, const Vector& labels) {
  const double vn = v.norm();
  if (vn == 0.0) throw std::invalid_argument("alignment: zero vector");
  const Vector ybar = labels / std::sqrt(static_cast<double>(labels.size()));
  const double dot = ybar.dot(v) / vn;
  return dot * dot;
}

double top_alignment(const EigenDecomposition& eig, const Vector& labels) {
  const Index n = eig.values.size();
  if (n == 0) throw std::invalid_argument("top_alignment: empty decomposition");
  const double top = eig.values[n - 1];
  const double tol = 1e-10 * std::max(1.0, std::abs(top));
  Index first = n - 1;
  while (first > 0 && top - eig.values[first - 1] <= tol) --first;
  const Vector ybar = labels / std::sqrt(static_cast<double>(labels.size()));
  double acc = 0.0;
  for (Index k = first; k < n; ++k) {
    const double d = ybar.dot(eig.vectors.col(k));
    acc += d * d;
  }
  return acc;
}

Complex empirical_stieltjes(const Vector& eigenvalues, Complex s) {
  if (eigenvalues.size() == 0)
    throw std::invalid_argument("empirical_stieltjes: empty spectrum");
  Complex acc{0.0, 0.0};
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const Complex denom = eigenvalues[i] - s;
    if (std::abs(denom) == 0.0)
      throw std::invalid_argument("empirical_stieltjes: s equals an eigenvalue");
    acc += 1.0 / denom;
  }
  return acc / static_cast<double>(eigenvalues.size());
}

Histogram spectral_histogram(const Vector& eigenvalues, Index bins) {
  if (bins < 1) throw std::invalid_argument("bins: must be >= 1");
  if (eigenvalues.size() == 0)
    throw std::invalid_argument("spectral_histogram: empty eigenvalue list");
  const double lo = eigenvalues.minCoeff();
  const double hi = eigenvalues.maxCoeff();
  Vector edges(bins + 1);
  if (hi == lo) {
    // Degenerate spectrum: a unit-width window around the common value.
    for (Index b = 0; b <= bins; ++b)
      edges[b] = lo - 0.5 + static_cast<double>(b) / static_cast<double>(bins);
  } else {
    for (Index b = 0; b <= bins; ++b)
      edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  return spectral_histogram(eigenvalues, edges);
}

Histogram spectral_histogram(const Vector& eigenvalues, const Vector& edges) {
  if (edges.size() < 2) throw std::invalid_argument("edges: need at least two");
  for (Index b = 1; b < edges.size(); ++b)
    if (!(edges[b] > edges[b - 1]))
      throw std::invalid_argument("edges: must be strictly ascending");
  if (eigenvalues.size() == 0)
    throw std::invalid_argument("spectral_histogram: empty eigenvalue list");
  Histogram h;
  h.edges = edges;
  h.mass = Vector::Zero(edges.size() - 1);
  const Index bins = h.mass.size();
  Index counted = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double x = eigenvalues[i];
    if (x < edges[0] || x > edges[bins]) continue;
    Index b = static_cast<Index>((x - edges[0]) / (edges[bins] - edges[0]) *
                                 static_cast<double>(bins));
    if (b >= bins) b = bins - 1;
    while (b > 0 && x < edges[b]) --b;
    while (b < bins - 1 && x >= edges[b + 1]) ++b;
    h.mass[b] += 1.0;
    ++counted;
  }
  if (counted > 0) h.mass /= static_cast<double>(counted);
  return h;
}

double total_variation(const Histogram& hist, const Vector& reference_mass) {
  if (reference_mass.size() != hist.mass.size())
    throw std::invalid_argument("total_variation: bin count mismatch");
  double acc = 0.0;
  for (Index b = 0; b < hist.mass.size(); ++b)
    acc += std::abs(hist.mass[b] - reference_mass[b]);
  acc += std::max(0.0, 1.0 - reference_mass.sum());
  return 0.5 * acc;
}

SpectralReport spectral_report(const Matrix& matrix, const Vector& labels,
                               Index bins, std::string source_recipe) {
  SpectralReport report;
  const EigenDecomposition eig = symmetric_eigs(matrix);
  report.eigenvalues = eig.values;
  report.top_eigenvector = eig.vectors.col(eig.values.size() - 1);
  report.alignment = top_alignment(eig, labels);
  report.histogram = spectral_histogram(eig.values, bins);
  report.source_recipe = std::move(source_recipe);
  return report;
}

SpectralReport spectral_cluster_baseline(const AttributedGraph& graph,
                                         std::optional<double> exact_q) {
  const Index n = graph.n();
  Vector qvec;
  if (exact_q.has_value()) {
    qvec = Vector::Constant(n, *exact_q);
  } else {
    qvec = estimate_q_vector(graph.adjacency);
  }
  PropagationOperator at = normalize_adjacency(graph.adjacency, qvec);
  Matrix m = at.matrix;
  bool symmetrized = false;
  if (!at.symmetric) {
    m = 0.5 * (at.matrix + at.matrix.transpose()).eval();
    symmetrized = true;
  }
  SpectralReport report = spectral_report(m, graph.labels, 40,
                                          symmetrized ? "sym(A~)" : "A~");
  report.symmetrized = symmetrized;
  return report;
}

}  // namespace gclab
