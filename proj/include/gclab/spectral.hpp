#pragma once

#include <optional>
#include <string>

#include "gclab/synthgen.hpp"
#include "gclab/types.hpp"

namespace gclab {

struct Histogram {
  Vector edges;  // B+1 ascending
  Vector mass;   // B, sums to 1
  Index bins() const { return mass.size(); }
  double width(Index b) const { return edges[b + 1] - edges[b]; }
  /// Height per bin; height * width = mass, so the histogram integrates to 1.
  Vector density() const;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // columns match values
};

/// Full symmetric eigendecomposition. Rejects matrices whose relative
/// asymmetry exceeds 1e-8 and verifies the reconstruction to 1e-8.
EigenDecomposition symmetric_eigs(const Matrix& matrix);

/// (ybar^T v_hat)^2 with ybar = y/sqrt(n), v_hat = v/||v||.
double alignment(const Vector& v, const Vector& labels);

/// Alignment of the projection of ybar onto the span of the top eigenvectors;
/// handles degenerate top eigenvalues (multiplicity within 1e-10).
double top_alignment(const EigenDecomposition& eig, const Vector& labels);

/// (1/n) sum_i 1/(lambda_i - s).
Complex empirical_stieltjes(const Vector& eigenvalues, Complex s);

Histogram spectral_histogram(const Vector& eigenvalues, Index bins);
Histogram spectral_histogram(const Vector& eigenvalues, const Vector& edges);

/// 0.5 * (sum_b |p_b - q_b| + max(0, 1 - sum_b q_b)): total variation between
/// the histogram and reference per-bin masses, charging reference mass that
/// falls outside the binned range.
double total_variation(const Histogram& hist, const Vector& reference_mass);

struct SpectralReport {
  Vector eigenvalues;      // ascending
  Vector top_eigenvector;  // unit norm
  double alignment = 0.0;  // |ybar^T u|^2
  Histogram histogram;
  std::string source_recipe;
  bool symmetrized = false;  // directed input decomposed as (M + M^T)/2
};

SpectralReport spectral_report(const Matrix& matrix, const Vector& labels,
                               Index bins, std::string source_recipe);

/// Alignment of the top eigenvector of A~ with ybar. Uses the exact q when
/// given, otherwise the degree estimate; directed graphs are symmetrized and
/// flagged in the report.
SpectralReport spectral_cluster_baseline(const AttributedGraph& graph,
                                         std::optional<double> exact_q);

}  // namespace gclab
