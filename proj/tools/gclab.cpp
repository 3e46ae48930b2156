// gclab: spectral laboratory for random graph convolutions on synthetic
// block-model graphs. Subcommands map one-to-one onto the studies in
// gclab/experiments.hpp plus two theory probes (fixed-point, density).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gclab/experiments.hpp"
#include "gclab/io.hpp"
#include "gclab/rmt.hpp"
#include "gclab/runner.hpp"

namespace {

using namespace gclab;

struct CommonArgs {
  std::string out_dir = "gclab-out";
  std::uint64_t master_seed = 1;
  int threads = 0;
};

void add_model_options(CLI::App* cmd, ModelParams* model) {
  cmd->add_option("--n,--model.n", model->n, "node count")->capture_default_str();
  cmd->add_option("--p,--model.p", model->p, "feature dimension")->capture_default_str();
  cmd->add_option("--d,--model.d", model->d, "hidden width")->capture_default_str();
  cmd->add_option("--q,--model.q", model->q, "edge base probability, in (0,1)")
      ->capture_default_str();
  cmd->add_option("--eta,--model.eta", model->eta, "community separation")
      ->capture_default_str();
  cmd->add_option("--mu-norm,--model.mu_norm", model->mu_norm, "||mu||")
      ->capture_default_str();
  cmd->add_option("--class-balance,--model.class_balance", model->class_balance,
                  "share of class 1 (label -1), in (0,1)")
      ->capture_default_str();
  cmd->add_flag("--directed,--model.directed", model->directed,
                "sample a directed adjacency");
}

void add_common_options(CLI::App* cmd, CommonArgs* common, ExperimentConfig* config) {
  cmd->add_option("--out,--output.dir", common->out_dir,
                  "output directory (env GCLAB_OUTPUT_DIR)")
      ->envname("GCLAB_OUTPUT_DIR")
      ->capture_default_str();
  cmd->add_option("--master-seed,--study.master_seed", common->master_seed,
                  "master seed; all streams derive from it")
      ->capture_default_str();
  cmd->add_option("--trials,--study.trials", config->trials, "trials per grid point")
      ->capture_default_str();
  cmd->add_option("--threads,--study.threads", common->threads,
                  "worker cap, 0 = available cores")
      ->capture_default_str();
  cmd->set_config("--config", "", "key=value config file; flags override file values");
  cmd->allow_config_extras(false);
}

int finish_run(const ExperimentConfig& config, const CommonArgs& common) {
  ExperimentConfig cfg = config;
  cfg.master_seed = common.master_seed;
  cfg.threads = common.threads;
  const RunOutcome outcome = run_study(cfg, common.out_dir);
  for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gclab: random-GCN spectral laboratory"};
  app.require_subcommand(1);

  // ----- spectrum -----
  ExperimentConfig spectrum_cfg;
  spectrum_cfg.study = StudyKind::Spectrum;
  spectrum_cfg.model = ModelParams{};  // n=200, p=1000, q=0.5, eta=4, ||mu||=2
  spectrum_cfg.trials = 10;
  CommonArgs spectrum_common;
  auto* spectrum = app.add_subcommand(
      "spectrum", "eigenvalue histogram of X~X~^T vs the theoretical density");
  add_model_options(spectrum, &spectrum_cfg.model);
  add_common_options(spectrum, &spectrum_common, &spectrum_cfg);
  spectrum->add_option("--bins,--study.bins", spectrum_cfg.bins, "histogram bins")
      ->capture_default_str();
  spectrum->add_option("--density-points,--study.density_points",
                       spectrum_cfg.density_points, "density grid resolution")
      ->capture_default_str();

  // ----- alignment-sweep -----
  ExperimentConfig align_cfg;
  align_cfg.study = StudyKind::AlignmentSweep;
  align_cfg.model.n = 250;
  align_cfg.model.p = 500;
  align_cfg.model.q = 0.4;
  align_cfg.model.mu_norm = 1.7;
  align_cfg.model.d = 512;
  align_cfg.trials = 100;
  for (double eta = 0.0; eta <= 8.0 + 1e-9; eta += 0.5) align_cfg.eta_grid.push_back(eta);
  align_cfg.strategies = {Strategy::Adjacency, Strategy::AdjacencyPlusIdentity,
                          Strategy::AdjacencyPlusCenteredKernel, Strategy::RandomMlp,
                          Strategy::SpectralClustering};
  CommonArgs align_common;
  std::vector<std::string> strategy_names;
  auto* align = app.add_subcommand(
      "alignment-sweep", "top-eigenvector/label alignment per strategy across eta");
  add_model_options(align, &align_cfg.model);
  add_common_options(align, &align_common, &align_cfg);
  align->add_option("--eta-grid,--study.eta_grid", align_cfg.eta_grid,
                    "eta grid (sorted)");
  align->add_option("--strategies,--study.strategies", strategy_names,
                    "subset of: adjacency adjacency+identity adjacency+kernel "
                    "random-mlp spectral-clustering");

  // ----- gram-convergence -----
  ExperimentConfig gram_cfg;
  gram_cfg.study = StudyKind::GramConvergence;
  gram_cfg.model.n = 500;
  gram_cfg.model.p = 1000;
  gram_cfg.trials = 20;
  gram_cfg.d_grid = {256, 1024, 4096};
  CommonArgs gram_common;
  std::string gram_activation = "identity";
  auto* gramc = app.add_subcommand(
      "gram-convergence", "(1/n)||G - G~||_F^2 across the hidden width grid");
  add_model_options(gramc, &gram_cfg.model);
  add_common_options(gramc, &gram_common, &gram_cfg);
  gramc->add_option("--d-grid,--study.d_grid", gram_cfg.d_grid, "hidden widths, ascending");
  gramc->add_option("--activation,--study.activation", gram_activation,
                    "identity | erf (identity keeps the equivalent exact)")
      ->capture_default_str();

  // ----- noise-sweep -----
  ExperimentConfig noise_cfg;
  noise_cfg.study = StudyKind::NoiseSweep;
  noise_cfg.model.n = 1000;
  noise_cfg.model.p = 500;
  noise_cfg.model.q = 0.2;
  noise_cfg.model.eta = 4.0;
  noise_cfg.model.mu_norm = 1.7;
  noise_cfg.model.d = 128;
  noise_cfg.trials = 10;
  noise_cfg.ratio_grid = {0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 3.0, 5.0};
  noise_cfg.beta_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  noise_cfg.alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  CommonArgs noise_common;
  std::string scheme_name = "edge-ratio";
  auto* noise = app.add_subcommand(
      "noise-sweep", "accuracy of the random GCN + ridge readout under perturbation");
  add_model_options(noise, &noise_cfg.model);
  add_common_options(noise, &noise_common, &noise_cfg);
  noise->add_option("--scheme,--study.scheme", scheme_name,
                    "theoretical | edge-ratio | feature-noise")
      ->capture_default_str();
  noise->add_option("--ratio-grid,--study.ratio_grid", noise_cfg.ratio_grid,
                    "perturbation ratios |E_hat|/|E| (counts rounded half away from zero)");
  noise->add_option("--beta-grid,--study.beta_grid", noise_cfg.beta_grid,
                    "weights on the perturbed-graph propagation");
  noise->add_option("--alpha-grid,--study.alpha_grid", noise_cfg.alpha_grid,
                    "weights on the clean-graph propagation (theoretical scheme)");
  noise->add_option("--ratio,--study.ratio", noise_cfg.theoretical_ratio,
                    "|E_R|/|E| for the theoretical scheme")
      ->capture_default_str();
  noise->add_option("--gamma,--study.gamma", noise_cfg.feature_gamma,
                    "feature noise scale (feature-noise scheme)")
      ->capture_default_str();
  bool no_sparsify = false;
  noise->add_flag("--no-sparsify,--study.no_sparsify", no_sparsify,
                  "use the full kernel N(K) instead of N(K o A_hat)");
  noise->add_option("--lambda,--study.ridge_lambda", noise_cfg.ridge_lambda,
                    "ridge regularization")
      ->capture_default_str();
  noise->add_option("--train-per-class,--study.train_per_class",
                    noise_cfg.train_per_class, "training nodes per class")
      ->capture_default_str();

  // ----- fixed-point -----
  std::string z_text = "1+0i";
  RmtParams fp_params{4.0, 1.0, 0.1875, 5.0};
  auto* fixed_point = app.add_subcommand(
      "fixed-point", "solve the coupled (delta1, delta2) system at a resolvent argument z");
  fixed_point->add_option("--z", z_text, "complex z, strict a+bi form")->required();
  fixed_point->add_option("--nu", fp_params.nu, "q^2(1-q^2)")->capture_default_str();
  fixed_point->add_option("--c", fp_params.c, "p/n")->capture_default_str();

  // ----- density -----
  RmtParams density_params{4.0, 1.0, 0.1875, 5.0};
  double density_xmin = 0.0, density_xmax = 4.0, density_eps = 0.0;
  Index density_points = 512;
  CommonArgs density_common;
  auto* density = app.add_subcommand(
      "density", "theoretical limiting spectral density on a grid");
  density->add_option("--nu", density_params.nu, "q^2(1-q^2)")->capture_default_str();
  density->add_option("--c", density_params.c, "p/n")->capture_default_str();
  density->add_option("--xmin", density_xmin, "grid start")->capture_default_str();
  density->add_option("--xmax", density_xmax, "grid end")->capture_default_str();
  density->add_option("--points", density_points, "grid points")->capture_default_str();
  density->add_option("--epsilon", density_eps,
                      "smoothing; 0 = 1e-3 * (grid span)")
      ->capture_default_str();
  density->add_option("--out", density_common.out_dir, "output directory")
      ->envname("GCLAB_OUTPUT_DIR")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return finish_run(spectrum_cfg, spectrum_common);
    if (align->parsed()) {
      if (!strategy_names.empty()) {
        align_cfg.strategies.clear();
        for (const auto& name : strategy_names)
          align_cfg.strategies.push_back(strategy_from_name(name));
      }
      return finish_run(align_cfg, align_common);
    }
    if (gramc->parsed()) {
      if (gram_activation == "identity")
        gram_cfg.gram_activation = ActivationSpec::Base::Identity;
      else if (gram_activation == "erf")
        gram_cfg.gram_activation = ActivationSpec::Base::Erf;
      else
        throw std::invalid_argument("activation: expected identity or erf");
      return finish_run(gram_cfg, gram_common);
    }
    if (noise->parsed()) {
      noise_cfg.scheme = noise_scheme_from_name(scheme_name);
      noise_cfg.sparsified = !no_sparsify;
      return finish_run(noise_cfg, noise_common);
    }
    if (fixed_point->parsed()) {
      const Complex z = parse_complex(z_text);
      const FixedPointSolution sol = solve_fixed_point(z, fp_params);
      nlohmann::ordered_json j;
      j["z"] = format_complex(sol.z);
      j["delta1"] = format_complex(sol.delta1);
      j["delta2"] = format_complex(sol.delta2);
      j["zeta"] = format_complex(sol.zeta);
      j["residual"] = sol.residual;
      j["iterations"] = sol.iterations;
      std::cout << j.dump(2) << std::endl;
      return 0;
    }
    if (density->parsed()) {
      if (density_points < 2)
        throw std::invalid_argument("points: must be >= 2");
      if (!(density_xmax > density_xmin))
        throw std::invalid_argument("xmax: must exceed xmin");
      Vector xs(density_points);
      for (Index i = 0; i < density_points; ++i)
        xs[i] = density_xmin + (density_xmax - density_xmin) * static_cast<double>(i) /
                                   static_cast<double>(density_points - 1);
      const double eps =
          density_eps > 0.0 ? density_eps : 1e-3 * (density_xmax - density_xmin);
      const Vector f = theoretical_density(xs, eps, density_params);
      std::filesystem::create_directories(density_common.out_dir);
      std::vector<std::vector<CsvCell>> rows;
      for (Index i = 0; i < xs.size(); ++i) rows.push_back({xs[i], f[i]});
      const auto path = std::filesystem::path(density_common.out_dir) / "density.csv";
      write_csv(path, {"x", "f_theory"}, rows);
      RunManifest manifest;
      manifest.subcommand = "density";
      manifest.config_text = "nu=" + format_double(density_params.nu) +
                             "\nc=" + format_double(density_params.c) +
                             "\nxmin=" + format_double(density_xmin) +
                             "\nxmax=" + format_double(density_xmax) +
                             "\npoints=" + std::to_string(density_points) +
                             "\nepsilon=" + format_double(eps) + "\n";
      manifest.version = kVersion;
      manifest.file_checksums[path.filename().string()] = file_checksum(path);
      write_manifest(std::filesystem::path(density_common.out_dir) / "run_manifest.json",
                     manifest);
      std::cout << "wrote " << path.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
