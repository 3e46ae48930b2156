#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gclab/activation.hpp"
#include "gclab/spectral.hpp"
#include "gclab/synthgen.hpp"
#include "gclab/types.hpp"

namespace gclab {

enum class StudyKind { Spectrum, AlignmentSweep, GramConvergence, NoiseSweep };

enum class Strategy {
  Adjacency,                    // X~ = A~ X
  AdjacencyPlusIdentity,        // X~ = (A~ + I) X
  AdjacencyPlusCenteredKernel,  // X~ = (A~ + PKP) X
  RandomMlp,                    // (1/d) sigma(XW) sigma(XW)^T
  SpectralClustering,           // top eigenvector of A~ itself
};
Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy s);

enum class NoiseScheme { Theoretical, EdgeRatio, FeatureNoise };
NoiseScheme noise_scheme_from_name(const std::string& name);
std::string noise_scheme_name(NoiseScheme s);

struct ExperimentConfig {
  ModelParams model;
  StudyKind study = StudyKind::Spectrum;
  int trials = 10;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: hardware concurrency
  // Spectrum
  Index bins = 40;
  Index density_points = 512;
  // AlignmentSweep
  std::vector<double> eta_grid;
  std::vector<Strategy> strategies;
  // GramConvergence
  std::vector<Index> d_grid;
  ActivationSpec::Base gram_activation = ActivationSpec::Base::Identity;
  // NoiseSweep
  NoiseScheme scheme = NoiseScheme::EdgeRatio;
  std::vector<double> ratio_grid;   // EdgeRatio / FeatureNoise
  std::vector<double> beta_grid;    // EdgeRatio / FeatureNoise
  std::vector<double> alpha_grid;   // Theoretical
  double theoretical_ratio = 1.0;   // Theoretical: |E_R| / |E|
  double feature_gamma = 0.0;       // FeatureNoise
  bool sparsified = true;
  ActivationSpec::Base sweep_activation = ActivationSpec::Base::Erf;
  double ridge_lambda = 1e-2;
  Index train_per_class = 20;

  void validate() const;
};

struct SweepRow {
  double grid_value = 0.0;
  double second_value = 0.0;  // beta or alpha where applicable
  std::string strategy;
  double mean = 0.0;
  double stddev = 0.0;
  int trials = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::uint64_t master_seed = 0;
};

struct SpectrumResult {
  std::vector<double> alignments;          // per trial
  std::vector<double> tv_distances;        // per trial
  double mean_alignment = 0.0;
  double mean_tv = 0.0;
  Histogram pooled_histogram;              // all trials' eigenvalues
  Vector density_x;
  Vector density_f;
  std::uint64_t master_seed = 0;
};

SpectrumResult run_spectrum_study(const ExperimentConfig& config);
SweepResult run_alignment_sweep(const ExperimentConfig& config);
SweepResult run_gram_convergence(const ExperimentConfig& config);
SweepResult run_noise_sweep(const ExperimentConfig& config);

/// Per-bin masses of the theoretical density, integrated by trapezoid on a
/// 32-point subgrid per bin at smoothing eps = 1e-4 * (edge span).
Vector theory_bin_masses(const Vector& edges, const struct RmtParams& params);

}  // namespace gclab
