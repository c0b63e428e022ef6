#pragma once

#include "spectral_dd/coeff.hpp"
#include "spectral_dd/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdd {

enum class Problem { galerkin, darcy_stream };

const char* to_string(Problem p);
Problem problem_from_string(const std::string& name);

/// One contrast sweep. Exactly one of `threshold` / `fixed_dimension` is in
/// effect: a set `fixed_dimension` overrides the threshold.
struct ExperimentConfig {
  std::string name = "experiment";
  int nc = 8;
  int r = 8;
  GeometrySpec geometry;
  Problem problem = Problem::galerkin;
  std::vector<CoarseVariant> variants{CoarseVariant::spectral_standard_pou};
  double threshold = 0.5;
  std::optional<int> fixed_dimension;
  std::vector<double> contrasts{1e2, 1e3, 1e4, 1e5, 1e6};
  double tol = 1e-6;
  int maxit = 1000;
  double mu = 1.0;
  /// Also run the dense condition-number oracle (small instances only).
  bool oracle = false;
  /// Output files; empty disables the file.
  std::string csv_path;
  std::string json_path;
  /// Prefix for the two-column `contrast cond` plot files (one per variant).
  std::string plot_prefix;
};

/// Parses a JSON document. Unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON (sorted keys, output paths excluded).
std::string config_to_json(const ExperimentConfig& config);
/// 16 hex digits of the FNV-1a hash of the canonical JSON.
std::string config_digest(const ExperimentConfig& config);
/// Description of every config key for `--help`.
std::string config_reference();

struct ResultRow {
  double contrast = 0.0;
  CoarseVariant variant = CoarseVariant::none;
  int iterations = 0;
  bool converged = false;
  int coarse_dimension = 0;
  double condition = 0.0;
  std::optional<double> oracle_condition;
  double realized_threshold = 0.0;
  double seconds = 0.0;
  std::string digest;
};

/// Rows ordered by contrast, then variant as listed in the config. Writes
/// the configured output files. Errors are rethrown with the failing
/// contrast in the message.
std::vector<ResultRow> run(const ExperimentConfig& config);

/// CSV without timing columns, so reruns are byte-identical.
std::string rows_to_csv(const std::vector<ResultRow>& rows);

/// Per-patch spectra (`patch,index,eigenvalue,selected`) of the first
/// spectral variant at every contrast of the config.
struct SpectrumDump {
  double contrast;
  std::vector<PatchSpectrum> spectra;
};
std::vector<SpectrumDump> spectra_for(const ExperimentConfig& config);

}  // namespace sdd
