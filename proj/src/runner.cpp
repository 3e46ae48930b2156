#include "gclab/runner.hpp"

#include <chrono>
#include <sstream>

namespace gclab {

namespace {

std::string study_name(StudyKind kind) {
  switch (kind) {
    case StudyKind::Spectrum: return "spectrum";
    case StudyKind::AlignmentSweep: return "alignment-sweep";
    case StudyKind::GramConvergence: return "gram-convergence";
    case StudyKind::NoiseSweep: return "noise-sweep";
  }
  return "unknown";
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    if constexpr (std::is_same_v<T, double>)
      out << format_double(v[i]);
    else
      out << v[i];
  }
  return out.str();
}

}  // namespace

std::string config_snapshot(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "study=" << study_name(config.study) << '\n';
  out << "model.n=" << config.model.n << '\n';
  out << "model.p=" << config.model.p << '\n';
  out << "model.d=" << config.model.d << '\n';
  out << "model.q=" << format_double(config.model.q) << '\n';
  out << "model.eta=" << format_double(config.model.eta) << '\n';
  out << "model.mu_norm=" << format_double(config.model.mu_norm) << '\n';
  out << "model.class_balance=" << format_double(config.model.class_balance) << '\n';
  out << "model.directed=" << (config.model.directed ? 1 : 0) << '\n';
  out << "trials=" << config.trials << '\n';
  out << "master_seed=" << config.master_seed << '\n';
  switch (config.study) {
    case StudyKind::Spectrum:
      out << "bins=" << config.bins << '\n';
      out << "density_points=" << config.density_points << '\n';
      break;
    case StudyKind::AlignmentSweep: {
      out << "eta_grid=" << join(config.eta_grid) << '\n';
      std::vector<std::string> names;
      for (Strategy s : config.strategies) names.push_back(strategy_name(s));
      out << "strategies=" << join(names) << '\n';
      break;
    }
    case StudyKind::GramConvergence: {
      std::vector<double> ds(config.d_grid.begin(), config.d_grid.end());
      out << "d_grid=" << join(ds) << '\n';
      out << "activation="
          << normalize_activation(config.gram_activation).name() << '\n';
      break;
    }
    case StudyKind::NoiseSweep:
      out << "scheme=" << noise_scheme_name(config.scheme) << '\n';
      if (config.scheme == NoiseScheme::Theoretical) {
        out << "ratio=" << format_double(config.theoretical_ratio) << '\n';
        out << "alpha_grid=" << join(config.alpha_grid) << '\n';
      } else {
        out << "ratio_grid=" << join(config.ratio_grid) << '\n';
        out << "beta_grid=" << join(config.beta_grid) << '\n';
        out << "sparsified=" << (config.sparsified ? 1 : 0) << '\n';
      }
      if (config.scheme == NoiseScheme::FeatureNoise)
        out << "gamma=" << format_double(config.feature_gamma) << '\n';
      out << "ridge_lambda=" << format_double(config.ridge_lambda) << '\n';
      out << "train_per_class=" << config.train_per_class << '\n';
      break;
  }
  return out.str();
}

RunOutcome run_study(const ExperimentConfig& config,
                     const std::filesystem::path& out_dir) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::filesystem::path> files;
  switch (config.study) {
    case StudyKind::Spectrum:
      files = write_spectrum_outputs(out_dir, run_spectrum_study(config));
      break;
    case StudyKind::AlignmentSweep:
      files = write_alignment_outputs(out_dir, run_alignment_sweep(config));
      break;
    case StudyKind::GramConvergence:
      files = write_gram_outputs(out_dir, run_gram_convergence(config));
      break;
    case StudyKind::NoiseSweep:
      files = write_noise_outputs(out_dir, run_noise_sweep(config));
      break;
  }

  RunOutcome outcome;
  outcome.manifest.subcommand = study_name(config.study);
  outcome.manifest.config_text = config_snapshot(config);
  outcome.manifest.master_seed = config.master_seed;
  outcome.manifest.version = kVersion;
  const auto end = std::chrono::steady_clock::now();
  outcome.manifest.duration_seconds =
      std::chrono::duration<double>(end - start).count();
  for (const auto& f : files)
    outcome.manifest.file_checksums[f.filename().string()] = file_checksum(f);
  const auto manifest_path = out_dir / "run_manifest.json";
  write_manifest(manifest_path, outcome.manifest);
  outcome.files = files;
  outcome.files.push_back(manifest_path);
  return outcome;
}

}  // namespace gclab
