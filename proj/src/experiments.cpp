#include "gclab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "gclab/operators.hpp"
#include "gclab/rgcn.hpp"
#include "gclab/rmt.hpp"
#include "gclab/rng.hpp"

namespace gclab {

namespace {

std::uint64_t cell_key(std::size_t grid_index, std::size_t trial) {
  return (static_cast<std::uint64_t>(grid_index) << 32) |
         (static_cast<std::uint64_t>(trial) & 0xffffffffULL);
}

/// Deterministic parallel map: task i writes only slot i.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  std::atomic<std::size_t> next{0};
  auto body = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd ms;
  if (values.empty()) return ms;
  double acc = 0.0;
  for (double v : values) acc += v;
  ms.mean = acc / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - ms.mean) * (v - ms.mean);
  ms.stddev = values.size() > 1
                  ? std::sqrt(sq / static_cast<double>(values.size() - 1))
                  : 0.0;
  return ms;
}

AttributedGraph trial_graph(const ModelParams& base, std::uint64_t labels_seed,
                            std::uint64_t adjacency_seed) {
  ModelParams p = base;
  p.seed = labels_seed;
  AttributedGraph g;
  g.labels = gen_labels(p);
  g.features = gen_gmm_features(g.labels, p);
  ModelParams pa = base;
  pa.seed = adjacency_seed;
  g.adjacency = gen_sbm_adjacency(g.labels, pa);
  return g;
}

Matrix centered_linear_kernel(const Matrix& features) {
  return center_kernel(linear_kernel(features)).matrix;
}

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Adjacency: return "adjacency";
    case Strategy::AdjacencyPlusIdentity: return "adjacency+identity";
    case Strategy::AdjacencyPlusCenteredKernel: return "adjacency+kernel";
    case Strategy::RandomMlp: return "random-mlp";
    case Strategy::SpectralClustering: return "spectral-clustering";
  }
  return "unknown";
}

Strategy strategy_from_name(const std::string& name) {
  for (Strategy s : {Strategy::Adjacency, Strategy::AdjacencyPlusIdentity,
                     Strategy::AdjacencyPlusCenteredKernel, Strategy::RandomMlp,
                     Strategy::SpectralClustering}) {
    if (strategy_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string noise_scheme_name(NoiseScheme s) {
  switch (s) {
    case NoiseScheme::Theoretical: return "theoretical";
    case NoiseScheme::EdgeRatio: return "edge-ratio";
    case NoiseScheme::FeatureNoise: return "feature-noise";
  }
  return "unknown";
}

NoiseScheme noise_scheme_from_name(const std::string& name) {
  for (NoiseScheme s : {NoiseScheme::Theoretical, NoiseScheme::EdgeRatio,
                        NoiseScheme::FeatureNoise}) {
    if (noise_scheme_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown noise scheme: " + name);
}

void ExperimentConfig::validate() const {
  model.validate();
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads: must be >= 0");
  auto check_sorted = [](const std::vector<double>& g, const char* what) {
    if (!std::is_sorted(g.begin(), g.end()))
      throw std::invalid_argument(std::string(what) + ": grid must be sorted");
  };
  switch (study) {
    case StudyKind::Spectrum:
      if (bins < 1) throw std::invalid_argument("bins: must be >= 1");
      if (density_points < 2) throw std::invalid_argument("density_points: must be >= 2");
      break;
    case StudyKind::AlignmentSweep:
      if (eta_grid.empty()) throw std::invalid_argument("eta_grid: must be nonempty");
      check_sorted(eta_grid, "eta_grid");
      if (strategies.empty()) throw std::invalid_argument("strategies: must be nonempty");
      break;
    case StudyKind::GramConvergence:
      if (d_grid.empty()) throw std::invalid_argument("d_grid: must be nonempty");
      if (!std::is_sorted(d_grid.begin(), d_grid.end()))
        throw std::invalid_argument("d_grid: must be ascending");
      break;
    case StudyKind::NoiseSweep:
      if (scheme == NoiseScheme::Theoretical) {
        if (alpha_grid.empty()) throw std::invalid_argument("alpha_grid: must be nonempty");
        check_sorted(alpha_grid, "alpha_grid");
        if (theoretical_ratio < 0.0)
          throw std::invalid_argument("theoretical_ratio: must be >= 0");
      } else {
        if (ratio_grid.empty()) throw std::invalid_argument("ratio_grid: must be nonempty");
        check_sorted(ratio_grid, "ratio_grid");
        if (beta_grid.empty()) throw std::invalid_argument("beta_grid: must be nonempty");
      }
      if (scheme == NoiseScheme::FeatureNoise && feature_gamma < 0.0)
        throw std::invalid_argument("feature_gamma: must be >= 0");
      if (!(ridge_lambda > 0.0)) throw std::invalid_argument("ridge_lambda: must be > 0");
      if (train_per_class < 1) throw std::invalid_argument("train_per_class: must be >= 1");
      break;
  }
}

Vector theory_bin_masses(const Vector& edges, const RmtParams& params) {
  const Index bins = edges.size() - 1;
  const double span = edges[bins] - edges[0];
  // Tighter smoothing than the plotted-curve default: bin masses near the
  // left support edge otherwise lose an O(sqrt(eps)) tail below the range.
  const double eps = 1e-4 * span;
  Vector masses(bins);
  constexpr int kSub = 32;
  for (Index b = 0; b < bins; ++b) {
    Vector xs(kSub + 1);
    for (int k = 0; k <= kSub; ++k)
      xs[k] = edges[b] + (edges[b + 1] - edges[b]) * static_cast<double>(k) / kSub;
    const Vector f = theoretical_density(xs, eps, params);
    double acc = 0.0;
    for (int k = 0; k < kSub; ++k) acc += 0.5 * (f[k] + f[k + 1]) * (xs[k + 1] - xs[k]);
    masses[b] = acc;
  }
  return masses;
}

SpectrumResult run_spectrum_study(const ExperimentConfig& config) {
  config.validate();
  if (config.study != StudyKind::Spectrum)
    throw std::invalid_argument("run_spectrum_study: study kind mismatch");
  const RmtParams rmt = RmtParams::from_model(config.model);
  const int trials = config.trials;

  struct TrialOut {
    Vector eigenvalues;
    double alignment = 0.0;
    double tv = 0.0;
  };
  std::vector<TrialOut> outs(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), config.threads, [&](std::size_t t) {
    const std::uint64_t seed = RngStream::derive(config.master_seed, "spectrum-trial", t);
    ModelParams p = config.model;
    p.seed = seed;
    const AttributedGraph g = make_graph(p);
    const Vector qvec = Vector::Constant(p.n, p.q);
    const Matrix x_tilde = normalize_adjacency(g.adjacency, qvec).matrix * g.features;
    SpectralReport report = spectral_report(x_tilde * x_tilde.transpose(), g.labels,
                                            config.bins, "X~X~^T");
    TrialOut out;
    out.eigenvalues = report.eigenvalues;
    out.alignment = report.alignment;
    out.tv = total_variation(report.histogram,
                             theory_bin_masses(report.histogram.edges, rmt));
    outs[t] = std::move(out);
  });

  SpectrumResult result;
  result.master_seed = config.master_seed;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> pooled;
  for (const auto& out : outs) {
    result.alignments.push_back(out.alignment);
    result.tv_distances.push_back(out.tv);
    lo = std::min(lo, out.eigenvalues.minCoeff());
    hi = std::max(hi, out.eigenvalues.maxCoeff());
    pooled.insert(pooled.end(), out.eigenvalues.data(),
                  out.eigenvalues.data() + out.eigenvalues.size());
  }
  result.mean_alignment = mean_std(result.alignments).mean;
  result.mean_tv = mean_std(result.tv_distances).mean;
  result.pooled_histogram = spectral_histogram(
      Eigen::Map<Vector>(pooled.data(), static_cast<Index>(pooled.size())), config.bins);
  result.density_x.resize(config.density_points);
  for (Index i = 0; i < config.density_points; ++i)
    result.density_x[i] = lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(config.density_points - 1);
  result.density_f = theoretical_density(result.density_x, 1e-3 * (hi - lo), rmt);
  return result;
}

SweepResult run_alignment_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.study != StudyKind::AlignmentSweep)
    throw std::invalid_argument("run_alignment_sweep: study kind mismatch");
  const std::size_t n_eta = config.eta_grid.size();
  const std::size_t n_strat = config.strategies.size();
  const std::size_t trials = static_cast<std::size_t>(config.trials);
  const ActivationSpec activation = normalize_activation(ActivationSpec::Base::Erf);

  // alignments[(g * trials + t) * n_strat + s]
  std::vector<double> alignments(n_eta * trials * n_strat, 0.0);
  parallel_for(n_eta * trials, config.threads, [&](std::size_t task) {
    const std::size_t g = task / trials;
    const std::size_t t = task % trials;
    ModelParams p = config.model;
    p.eta = config.eta_grid[g];
    // Labels, features and weights depend on the trial only, so the
    // graph-free strategies are exactly constant across the eta grid.
    const std::uint64_t trial_seed = RngStream::derive(config.master_seed, "alignment-trial", t);
    const std::uint64_t cell_seed =
        RngStream::derive(config.master_seed, "alignment-cell", cell_key(g, t));
    const AttributedGraph graph = trial_graph(p, trial_seed, cell_seed);
    const Vector qvec = Vector::Constant(p.n, p.q);
    const Matrix a_tilde = normalize_adjacency(graph.adjacency, qvec).matrix;

    for (std::size_t s = 0; s < n_strat; ++s) {
      double value = 0.0;
      switch (config.strategies[s]) {
        case Strategy::Adjacency: {
          const Matrix xt = a_tilde * graph.features;
          value = top_alignment(symmetric_eigs(xt * xt.transpose()), graph.labels);
          break;
        }
        case Strategy::AdjacencyPlusIdentity: {
          Matrix op = a_tilde;
          op.diagonal().array() += 1.0;
          const Matrix xt = op * graph.features;
          value = top_alignment(symmetric_eigs(xt * xt.transpose()), graph.labels);
          break;
        }
        case Strategy::AdjacencyPlusCenteredKernel: {
          const Matrix op = a_tilde + centered_linear_kernel(graph.features);
          const Matrix xt = op * graph.features;
          value = top_alignment(symmetric_eigs(xt * xt.transpose()), graph.labels);
          break;
        }
        case Strategy::RandomMlp: {
          const EmbeddingMatrix e =
              forward(Matrix::Identity(p.n, p.n), graph.features, activation, p.d, trial_seed);
          value = top_alignment(symmetric_eigs(gram(e)), graph.labels);
          break;
        }
        case Strategy::SpectralClustering: {
          value = spectral_cluster_baseline(graph, p.q).alignment;
          break;
        }
      }
      alignments[(g * trials + t) * n_strat + s] = value;
    }
  });

  SweepResult result;
  result.master_seed = config.master_seed;
  for (std::size_t g = 0; g < n_eta; ++g) {
    for (std::size_t s = 0; s < n_strat; ++s) {
      std::vector<double> vals(trials);
      for (std::size_t t = 0; t < trials; ++t)
        vals[t] = alignments[(g * trials + t) * n_strat + s];
      const MeanStd ms = mean_std(vals);
      result.rows.push_back({config.eta_grid[g], 0.0,
                             strategy_name(config.strategies[s]), ms.mean, ms.stddev,
                             config.trials});
    }
  }
  return result;
}

SweepResult run_gram_convergence(const ExperimentConfig& config) {
  config.validate();
  if (config.study != StudyKind::GramConvergence)
    throw std::invalid_argument("run_gram_convergence: study kind mismatch");
  const ActivationSpec activation = normalize_activation(config.gram_activation);
  const std::size_t n_d = config.d_grid.size();
  const std::size_t trials = static_cast<std::size_t>(config.trials);

  std::vector<double> errors(n_d * trials, 0.0);
  parallel_for(n_d * trials, config.threads, [&](std::size_t task) {
    const std::size_t g = task / trials;
    const std::size_t t = task % trials;
    ModelParams p = config.model;
    p.d = config.d_grid[g];
    const std::uint64_t trial_seed = RngStream::derive(config.master_seed, "gram-trial", t);
    const std::uint64_t weight_seed =
        RngStream::derive(config.master_seed, "gram-weights", cell_key(g, t));
    p.seed = trial_seed;
    const AttributedGraph graph = make_graph(p);
    const Vector qvec = Vector::Constant(p.n, p.q);
    const Matrix x_tilde = normalize_adjacency(graph.adjacency, qvec).matrix * graph.features;
    if (x_tilde.norm() == 0.0)
      throw std::invalid_argument("gram convergence: zero operator output");
    const EmbeddingMatrix e = forward(Matrix::Identity(p.n, p.n), x_tilde, activation,
                                      p.d, weight_seed);
    const Matrix g_mat = gram(e);
    const Matrix g_tilde = gram_equivalent(x_tilde, activation.b_sigma);
    errors[g * trials + t] =
        (g_mat - g_tilde).squaredNorm() / static_cast<double>(p.n);
  });

  SweepResult result;
  result.master_seed = config.master_seed;
  for (std::size_t g = 0; g < n_d; ++g) {
    std::vector<double> vals(trials);
    for (std::size_t t = 0; t < trials; ++t) vals[t] = errors[g * trials + t];
    const MeanStd ms = mean_std(vals);
    result.rows.push_back({static_cast<double>(config.d_grid[g]), 0.0, "gcn",
                           ms.mean, ms.stddev, config.trials});
  }
  return result;
}

SweepResult run_noise_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.study != StudyKind::NoiseSweep)
    throw std::invalid_argument("run_noise_sweep: study kind mismatch");
  const ActivationSpec activation = normalize_activation(config.sweep_activation);

  const bool theoretical = config.scheme == NoiseScheme::Theoretical;
  const std::vector<double>& grid = theoretical ? config.alpha_grid : config.ratio_grid;
  const std::size_t n_grid = grid.size();
  const std::size_t n_mix = theoretical ? 1 : config.beta_grid.size();
  const std::size_t trials = static_cast<std::size_t>(config.trials);

  // accuracies[((g * n_mix + m) * trials + t)]; MLP is per trial only.
  std::vector<double> gcn_acc(n_grid * n_mix * trials, 0.0);
  std::vector<double> mlp_acc(trials, 0.0);

  parallel_for(trials, config.threads, [&](std::size_t t) {
    ModelParams p = config.model;
    p.seed = RngStream::derive(config.master_seed, "noise-trial", t);
    AttributedGraph graph = make_graph(p);
    if (config.scheme == NoiseScheme::FeatureNoise)
      graph = perturb_features(graph, config.feature_gamma,
                               RngStream::derive(config.master_seed, "noise-gamma", t));
    const std::uint64_t weight_seed = RngStream::derive(config.master_seed, "noise-weights", t);
    const std::uint64_t mask_seed = RngStream::derive(config.master_seed, "noise-mask", t);
    const std::vector<Index> train_rows =
        sample_train_rows(graph.labels, config.train_per_class, mask_seed);

    mlp_acc[t] = mlp_baseline(graph.features, activation, p.d, weight_seed, train_rows,
                              graph.labels, config.ridge_lambda);

    if (theoretical) {
      const double density = er_density_for_ratio(graph.adjacency, config.theoretical_ratio);
      const Matrix noise = gen_er_noise(p.n, density,
                                        RngStream::derive(config.master_seed, "noise-er", t));
      for (std::size_t g = 0; g < n_grid; ++g) {
        const PropagationOperator op = alpha_mix_operator(graph.adjacency, noise, grid[g]);
        const EmbeddingMatrix e = forward(op.matrix, graph.features, activation,
                                          p.d, weight_seed);
        gcn_acc[(g * n_mix + 0) * trials + t] =
            ridge_readout(e.values, graph.labels, train_rows, config.ridge_lambda).accuracy;
      }
    } else {
      for (std::size_t g = 0; g < n_grid; ++g) {
        const AttributedGraph perturbed = perturb_edges(
            graph, grid[g],
            RngStream::derive(config.master_seed, "noise-perturb", cell_key(g, t)));
        for (std::size_t m = 0; m < n_mix; ++m) {
          const PropagationOperator op =
              beta_mix_operator(perturbed.adjacency, graph.features,
                                config.beta_grid[m], config.sparsified);
          const EmbeddingMatrix e = forward(op.matrix, graph.features, activation,
                                            p.d, weight_seed);
          gcn_acc[(g * n_mix + m) * trials + t] =
              ridge_readout(e.values, graph.labels, train_rows, config.ridge_lambda).accuracy;
        }
      }
    }
  });

  SweepResult result;
  result.master_seed = config.master_seed;
  const MeanStd mlp_ms = mean_std(mlp_acc);
  for (std::size_t g = 0; g < n_grid; ++g) {
    const double grid_value = theoretical ? config.theoretical_ratio : grid[g];
    for (std::size_t m = 0; m < n_mix; ++m) {
      const double mix_value = theoretical ? grid[g] : config.beta_grid[m];
      std::vector<double> vals(trials);
      for (std::size_t t = 0; t < trials; ++t)
        vals[t] = gcn_acc[(g * n_mix + m) * trials + t];
      const MeanStd ms = mean_std(vals);
      result.rows.push_back({grid_value, mix_value, "gcn", ms.mean, ms.stddev,
                             config.trials});
    }
    // The MLP ignores the graph, so its row repeats across the grid.
    result.rows.push_back({grid_value, -1.0, "mlp", mlp_ms.mean, mlp_ms.stddev,
                           config.trials});
  }
  return result;
}

}  // namespace gclab
