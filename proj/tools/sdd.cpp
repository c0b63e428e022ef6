// sdd: contrast sweeps, geometry generation and spectrum dumps for the
// two-level spectral Schwarz solver.

#include "spectral_dd/error.hpp"
#include "spectral_dd/harness.hpp"
#include "spectral_dd/krylov.hpp"
#include "spectral_dd/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Overrides {
  std::optional<int> nc, r, maxit, fixed_dimension;
  std::optional<double> threshold, tol, mu;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> problem, csv, json, plot_prefix;
  std::vector<double> contrasts;
  std::vector<std::string> variants;
  bool oracle = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--nc", o.nc, "grid.nc");
  cmd->add_option("--r", o.r, "grid.r");
  cmd->add_option("--seed", o.seed, "geometry.seed");
  cmd->add_option("--problem", o.problem, "problem");
  cmd->add_option("--variants", o.variants, "variants")->delimiter(',');
  cmd->add_option("--threshold", o.threshold, "threshold (clears fixed_dimension)");
  cmd->add_option("--fixed-dimension", o.fixed_dimension, "fixed_dimension");
  cmd->add_option("--contrasts", o.contrasts, "contrasts")->delimiter(',');
  cmd->add_option("--tol", o.tol, "tol");
  cmd->add_option("--maxit", o.maxit, "maxit");
  cmd->add_option("--mu", o.mu, "mu");
  cmd->add_option("--csv", o.csv, "output.csv");
  cmd->add_option("--json", o.json, "output.json");
  cmd->add_option("--plot-prefix", o.plot_prefix, "output.plot_prefix");
  cmd->add_flag("--oracle", o.oracle, "oracle = true");
}

sdd::ExperimentConfig resolve(const std::string& path, const Overrides& o) {
  sdd::ExperimentConfig c = sdd::load_config(path);
  if (o.nc) c.nc = *o.nc;
  if (o.r) c.r = *o.r;
  if (o.seed) c.geometry.seed = *o.seed;
  if (o.problem) c.problem = sdd::problem_from_string(*o.problem);
  if (!o.variants.empty()) {
    c.variants.clear();
    for (const auto& v : o.variants) c.variants.push_back(sdd::coarse_variant_from_string(v));
  }
  if (o.threshold && o.fixed_dimension) throw sdd::InvalidArgument("--threshold and --fixed-dimension exclude each other");
  if (o.threshold) {
    c.threshold = *o.threshold;
    c.fixed_dimension.reset();
  }
  if (o.fixed_dimension) c.fixed_dimension = *o.fixed_dimension;
  if (!o.contrasts.empty()) c.contrasts = o.contrasts;
  if (o.tol) c.tol = *o.tol;
  if (o.maxit) c.maxit = *o.maxit;
  if (o.mu) c.mu = *o.mu;
  if (o.csv) c.csv_path = *o.csv;
  if (o.json) c.json_path = *o.json;
  if (o.plot_prefix) c.plot_prefix = *o.plot_prefix;
  if (o.oracle) c.oracle = true;
  // Re-validate through the parser so overrides obey the same rules.
  sdd::ExperimentConfig checked = sdd::config_from_json(sdd::config_to_json(c));
  checked.csv_path = c.csv_path;
  checked.json_path = c.json_path;
  checked.plot_prefix = c.plot_prefix;
  return checked;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level spectral Schwarz experiments on high-contrast Q1 problems"};
  app.footer(sdd::config_reference());
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;

  auto* run_cmd = app.add_subcommand("run", "Run a contrast sweep and print the result table as CSV");
  run_cmd->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  add_overrides(run_cmd, ov);

  auto* spec_cmd = app.add_subcommand("spectrum", "Dump per-patch eigenvalues for every contrast");
  spec_cmd->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  add_overrides(spec_cmd, ov);

  auto* oracle_cmd = app.add_subcommand("oracle", "Compare the Lanczos estimate with the dense condition number");
  oracle_cmd->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  add_overrides(oracle_cmd, ov);

  sdd::GeometrySpec geo;
  int gnc = 8, gr = 8;
  std::string kind = "many_islands", out_path, csv_path;
  auto* gen_cmd = app.add_subcommand("gen-geometry", "Write a coefficient field");
  gen_cmd->add_option("--nc", gnc, "coarse cells per direction")->capture_default_str();
  gen_cmd->add_option("--r", gr, "refinement per coarse cell")->capture_default_str();
  gen_cmd->add_option("--kind", kind, "geometry kind")->capture_default_str();
  gen_cmd->add_option("--contrast", geo.contrast, "kappa_max / kappa_min")->capture_default_str();
  gen_cmd->add_option("--seed", geo.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--channel-count", geo.channel_count)->capture_default_str();
  gen_cmd->add_option("--channel-width", geo.channel_width)->capture_default_str();
  gen_cmd->add_option("--channel-margin", geo.channel_margin)->capture_default_str();
  gen_cmd->add_option("--island-count", geo.island_count)->capture_default_str();
  gen_cmd->add_option("--island-size", geo.island_size)->capture_default_str();
  gen_cmd->add_option("--island-gap", geo.island_gap)->capture_default_str();
  gen_cmd->add_flag("--islands-avoid-coarse-edges", geo.islands_avoid_coarse_edges);
  gen_cmd->add_option("--period", geo.period)->capture_default_str();
  gen_cmd->add_option("--periodic-size", geo.periodic_size)->capture_default_str();
  gen_cmd->add_option("--gamma", geo.gamma);
  gen_cmd->add_option("-o,--output", out_path, "field file (nf, then one value per cell)")->required();
  gen_cmd->add_option("--csv", csv_path, "also write cx,cy,kappa rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen_cmd) {
      geo.kind = sdd::geometry_kind_from_string(kind);
      const sdd::StructuredGrid grid(gnc, gr);
      const auto field = sdd::generate(grid, geo);
      sdd::save_field(field, out_path);
      if (!csv_path.empty()) sdd::export_field_csv(grid, field, csv_path);
      std::printf("wrote %s: %d x %d cells, contrast %.6g\n", out_path.c_str(), grid.fine_cells(), grid.fine_cells(),
                  field.contrast());
      return 0;
    }

    sdd::ExperimentConfig config = resolve(config_path, ov);

    if (*run_cmd) {
      std::cout << sdd::rows_to_csv(sdd::run(config));
      return 0;
    }

    if (*spec_cmd) {
      std::cout << "contrast,patch,index,eigenvalue,selected\n";
      for (const auto& dump : sdd::spectra_for(config))
        for (const auto& s : dump.spectra)
          for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
            std::printf("%.8g,%d,%zu,%.17g,%d\n", dump.contrast, s.j, i, s.eigenvalues[i],
                        static_cast<int>(i) < s.selected ? 1 : 0);
      return 0;
    }

    if (*oracle_cmd) {
      const sdd::StructuredGrid grid(config.nc, config.r);
      if (grid.dof_count() > sdd::kDenseOracleLimit)
        throw sdd::InvalidArgument("oracle: " + std::to_string(grid.dof_count()) + " unknowns exceed the dense limit of " +
                                   std::to_string(sdd::kDenseOracleLimit));
      config.oracle = true;
      std::cout << "contrast,variant,cond_est,cond_oracle,rel_diff\n";
      for (const auto& row : sdd::run(config)) {
        const double ref = row.oracle_condition.value_or(NAN);
        std::printf("%.8g,%s,%.8g,%.8g,%.3e\n", row.contrast, sdd::to_string(row.variant), row.condition, ref,
                    std::abs(row.condition - ref) / ref);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sdd: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
