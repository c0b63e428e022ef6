#include "spectral_dd/harness.hpp"

#include "spectral_dd/darcy.hpp"
#include "spectral_dd/error.hpp"
#include "spectral_dd/krylov.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#ifndef SDD_VERSION
#define SDD_VERSION "0.0.0"
#endif

namespace sdd {

using nlohmann::json;

const char* to_string(Problem p) { return p == Problem::galerkin ? "galerkin" : "darcy_stream"; }

Problem problem_from_string(const std::string& name) {
  if (name == "galerkin") return Problem::galerkin;
  if (name == "darcy_stream") return Problem::darcy_stream;
  throw InvalidArgument("unknown problem '" + name + "'");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ParseError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

GeometrySpec geometry_from_json(const json& g) {
  reject_unknown(g,
                 {"kind", "seed", "channel_count", "channel_width", "channel_margin", "island_count", "island_size",
                  "island_gap", "islands_avoid_coarse_edges", "period", "periodic_size", "gamma", "rects", "path"},
                 "geometry");
  GeometrySpec s;
  if (g.contains("kind")) s.kind = geometry_kind_from_string(g.at("kind").get<std::string>());
  read(g, "seed", s.seed);
  read(g, "channel_count", s.channel_count);
  read(g, "channel_width", s.channel_width);
  read(g, "channel_margin", s.channel_margin);
  read(g, "island_count", s.island_count);
  read(g, "island_size", s.island_size);
  read(g, "island_gap", s.island_gap);
  read(g, "islands_avoid_coarse_edges", s.islands_avoid_coarse_edges);
  read(g, "period", s.period);
  read(g, "periodic_size", s.periodic_size);
  if (g.contains("gamma")) s.gamma = g.at("gamma").get<double>();
  read(g, "path", s.path);
  if (g.contains("rects"))
    for (const auto& r : g.at("rects")) {
      if (!r.is_array() || r.size() != 4) throw ParseError("geometry.rects entries must be [cx, cy, w, h]");
      s.rects.push_back({r[0].get<int>(), r[1].get<int>(), r[2].get<int>(), r[3].get<int>()});
    }
  return s;
}

json geometry_to_json(const GeometrySpec& s) {
  json g = {{"kind", to_string(s.kind)},
            {"seed", s.seed},
            {"channel_count", s.channel_count},
            {"channel_width", s.channel_width},
            {"channel_margin", s.channel_margin},
            {"island_count", s.island_count},
            {"island_size", s.island_size},
            {"island_gap", s.island_gap},
            {"islands_avoid_coarse_edges", s.islands_avoid_coarse_edges},
            {"period", s.period},
            {"periodic_size", s.periodic_size},
            {"path", s.path}};
  if (s.gamma) g["gamma"] = *s.gamma;
  json rects = json::array();
  for (const auto& r : s.rects) rects.push_back({r.cx, r.cy, r.w, r.h});
  g["rects"] = rects;
  return g;
}

json canonical(const ExperimentConfig& c) {
  json variants = json::array();
  for (auto v : c.variants) variants.push_back(to_string(v));
  json j = {{"name", c.name},
            {"grid", {{"nc", c.nc}, {"r", c.r}}},
            {"geometry", geometry_to_json(c.geometry)},
            {"problem", to_string(c.problem)},
            {"variants", variants},
            {"contrasts", c.contrasts},
            {"tol", c.tol},
            {"maxit", c.maxit},
            {"mu", c.mu},
            {"oracle", c.oracle}};
  if (c.fixed_dimension)
    j["fixed_dimension"] = *c.fixed_dimension;
  else
    j["threshold"] = c.threshold;
  return j;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(8) << v;
  return os.str();
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  reject_unknown(j,
                 {"name", "grid", "geometry", "problem", "variants", "threshold", "fixed_dimension", "contrasts", "tol",
                  "maxit", "mu", "oracle", "output"},
                 "config");
  ExperimentConfig c;
  try {
    read(j, "name", c.name);
    if (j.contains("grid")) {
      reject_unknown(j.at("grid"), {"nc", "r"}, "grid");
      read(j.at("grid"), "nc", c.nc);
      read(j.at("grid"), "r", c.r);
    }
    if (j.contains("geometry")) c.geometry = geometry_from_json(j.at("geometry"));
    if (j.contains("problem")) c.problem = problem_from_string(j.at("problem").get<std::string>());
    if (j.contains("variants")) {
      c.variants.clear();
      for (const auto& v : j.at("variants")) c.variants.push_back(coarse_variant_from_string(v.get<std::string>()));
    }
    if (j.contains("threshold") && j.contains("fixed_dimension"))
      throw ParseError("config: set either 'threshold' or 'fixed_dimension', not both");
    read(j, "threshold", c.threshold);
    if (j.contains("fixed_dimension")) c.fixed_dimension = j.at("fixed_dimension").get<int>();
    read(j, "contrasts", c.contrasts);
    read(j, "tol", c.tol);
    read(j, "maxit", c.maxit);
    read(j, "mu", c.mu);
    read(j, "oracle", c.oracle);
    if (j.contains("output")) {
      const json& o = j.at("output");
      reject_unknown(o, {"csv", "json", "plot_prefix"}, "output");
      read(o, "csv", c.csv_path);
      read(o, "json", c.json_path);
      read(o, "plot_prefix", c.plot_prefix);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }

  if (c.variants.empty()) throw InvalidArgument("config: at least one variant is required");
  if (c.contrasts.empty()) throw InvalidArgument("config: at least one contrast is required");
  for (double k : c.contrasts)
    if (!(k >= 1.0)) throw InvalidArgument("config: contrasts must be >= 1");
  if (!(c.threshold > 0.0)) throw InvalidArgument("config: threshold must be positive");
  if (c.fixed_dimension && *c.fixed_dimension < 0) throw InvalidArgument("config: fixed_dimension must be >= 0");
  if (!(c.tol > 0.0) || c.maxit < 1) throw InvalidArgument("config: tol must be positive and maxit >= 1");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& config) { return canonical(config).dump(); }

std::string config_digest(const ExperimentConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config_to_json(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_reference() {
  return R"(Config keys (JSON object):
  name                  string, free-form label
  grid.nc               coarse cells per direction (>= 2)
  grid.r                fine cells per coarse cell and direction (>= 1)
  geometry.kind         channels_and_islands | many_islands | periodic_plus_random_islands |
                        random_background_plus_islands | from_file
  geometry.seed         RNG seed (mt19937_64)
  geometry.channel_count, channel_width, channel_margin
                        horizontal channels (channels_and_islands)
  geometry.island_count, island_size, island_gap, islands_avoid_coarse_edges
                        randomly placed square islands
  geometry.period, periodic_size
                        periodic inclusions (periodic_plus_random_islands)
  geometry.gamma        log10 range of the random background (default log10(contrast))
  geometry.rects        extra inclusions, list of [cx, cy, w, h] in fine cells
  geometry.path         coefficient file (from_file)
  problem               galerkin | darcy_stream
  variants              list of none | standard | multiscale | spectral_standard_pou |
                        spectral_multiscale_pou
  threshold             eigenvalue threshold 1/tau (default 0.5)
  fixed_dimension       coarse dimension for the spectral variants (excludes threshold)
  contrasts             list of kappa_max / kappa_min values (>= 1)
  tol                   relative preconditioned residual reduction (default 1e-6)
  maxit                 PCG iteration limit (default 1000)
  mu                    viscosity for darcy_stream (default 1)
  oracle                also compute the dense condition number (small grids only)
  output.csv            result table (no timings; byte-stable across reruns)
  output.json           results with timings and provenance
  output.plot_prefix    writes <prefix>_<variant>.dat with "contrast cond" lines
)";
}

std::vector<ResultRow> run(const ExperimentConfig& config) {
  const StructuredGrid grid(config.nc, config.r);
  const auto patches = subdomain_patches(grid);
  const std::string digest = config_digest(config);
  CoarseSelection selection{config.threshold, config.fixed_dimension};
  PcgOptions options{config.tol, config.maxit};

  std::vector<ResultRow> rows;
  json provenance = json::array();
  for (double contrast : config.contrasts) {
    try {
      const CoefficientField field = generate(grid, config.geometry, contrast);
      provenance.push_back({{"contrast", contrast},
                            {"generator", field.provenance().generator},
                            {"parameters", field.provenance().parameters},
                            {"seed", field.provenance().seed},
                            {"source", field.provenance().source}});
      for (CoarseVariant variant : config.variants) {
        const auto start = std::chrono::steady_clock::now();
        ResultRow row;
        row.contrast = contrast;
        row.variant = variant;
        row.digest = digest;
        if (config.problem == Problem::galerkin) {
          ScalarSetup setup = setup_scalar(grid, patches, field, linear_drop_x(), variant, selection);
          const PcgResult res = pcg(setup.system.A, *setup.preconditioner, setup.system.rhs, options);
          row.iterations = res.report.iterations;
          row.converged = res.report.converged;
          row.condition = res.report.condition;
          row.coarse_dimension = setup.coarse.dimension();
          row.realized_threshold = setup.realized_threshold;
          if (config.oracle) row.oracle_condition = dense_cond_oracle(setup.system.A, *setup.preconditioner).condition;
        } else {
          const DarcyResult res = solve_darcy_stream(grid, patches, field, config.mu, variant, selection, options);
          row.iterations = res.report.iterations;
          row.converged = res.report.converged;
          row.condition = res.report.condition;
          row.coarse_dimension = res.coarse_dimension;
          row.realized_threshold = res.realized_threshold;
          if (config.oracle) {
            const CoefficientField coef = field.inverted(config.mu);
            ScalarSetup setup = setup_scalar(grid, patches, coef, unit_x_flow_stream(), variant, selection);
            row.oracle_condition = dense_cond_oracle(setup.system.A, *setup.preconditioner).condition;
          }
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(row);
      }
    } catch (const std::exception& e) {
      throw Error("sweep '" + config.name + "' failed at contrast " + format_double(contrast) + ": " + e.what());
    }
  }

  if (!config.csv_path.empty()) {
    std::ofstream out(config.csv_path, std::ios::binary);
    if (!out) throw Error("cannot open '" + config.csv_path + "' for writing");
    out << rows_to_csv(rows);
  }
  if (!config.json_path.empty()) {
    json jrows = json::array();
    for (const auto& r : rows) {
      json jr = {{"contrast", r.contrast},
                 {"variant", to_string(r.variant)},
                 {"iterations", r.iterations},
                 {"converged", r.converged},
                 {"coarse_dimension", r.coarse_dimension},
                 {"condition", r.condition},
                 {"realized_threshold", r.realized_threshold},
                 {"seconds", r.seconds}};
      if (r.oracle_condition) jr["oracle_condition"] = *r.oracle_condition;
      jrows.push_back(jr);
    }
    const json doc = {{"config", canonical(config)},
                      {"digest", digest},
                      {"version", SDD_VERSION},
                      {"fine_nodes", grid.fine_node_count()},
                      {"free_dofs", grid.dof_count()},
                      {"max_overlap", max_overlap(patches)},
                      {"fields", provenance},
                      {"rows", jrows}};
    std::ofstream out(config.json_path);
    if (!out) throw Error("cannot open '" + config.json_path + "' for writing");
    out << doc.dump(2) << '\n';
  }
  if (!config.plot_prefix.empty()) {
    for (CoarseVariant v : config.variants) {
      const std::string path = config.plot_prefix + "_" + to_string(v) + ".dat";
      std::ofstream out(path);
      if (!out) throw Error("cannot open '" + path + "' for writing");
      out << "# contrast cond\n";
      for (const auto& r : rows)
        if (r.variant == v) out << format_double(r.contrast) << ' ' << format_double(r.condition) << '\n';
    }
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "contrast,variant,iterations,converged,coarse_dim,cond_est,cond_oracle,realized_threshold,digest\n";
  for (const auto& r : rows) {
    os << format_double(r.contrast) << ',' << to_string(r.variant) << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
       << ',' << r.coarse_dimension << ',' << format_double(r.condition) << ','
       << (r.oracle_condition ? format_double(*r.oracle_condition) : std::string()) << ','
       << format_double(r.realized_threshold) << ',' << r.digest << '\n';
  }
  return os.str();
}

std::vector<SpectrumDump> spectra_for(const ExperimentConfig& config) {
  CoarseVariant variant = CoarseVariant::spectral_standard_pou;
  for (auto v : config.variants)
    if (v == CoarseVariant::spectral_standard_pou || v == CoarseVariant::spectral_multiscale_pou) {
      variant = v;
      break;
    }
  const StructuredGrid grid(config.nc, config.r);
  const auto patches = subdomain_patches(grid);
  std::vector<SpectrumDump> out;
  for (double contrast : config.contrasts) {
    CoefficientField field = generate(grid, config.geometry, contrast);
    if (config.problem == Problem::darcy_stream) field = field.inverted(config.mu);
    SpectrumDump dump{contrast, {}};
    build_coarse(grid, patches, field, variant, {config.threshold, config.fixed_dimension}, &dump.spectra);
    out.push_back(std::move(dump));
  }
  return out;
}

}  // namespace sdd
