#include "spectral_dd/coeff.hpp"

#include "spectral_dd/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace sdd {

namespace {

constexpr int kPlacementAttempts = 20000;

double uniform01(std::mt19937_64& rng) {
  // 53 random mantissa bits; identical on every platform.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

class Layout {
public:
  explicit Layout(int nf) : nf_(nf), marked_(static_cast<std::size_t>(nf) * nf, 0), blocked_(marked_.size(), 0) {}

  void mark(const CellRect& r, int gap) {
    for (int y = r.cy; y < r.cy + r.h; ++y)
      for (int x = r.cx; x < r.cx + r.w; ++x) marked_[idx(x, y)] = 1;
    block(r, gap);
  }

  bool free(const CellRect& r) const {
    for (int y = r.cy; y < r.cy + r.h; ++y)
      for (int x = r.cx; x < r.cx + r.w; ++x)
        if (blocked_[idx(x, y)]) return false;
    return true;
  }

  bool marked(int x, int y) const { return marked_[idx(x, y)] != 0; }

private:
  void block(const CellRect& r, int gap) {
    for (int y = std::max(r.cy - gap, 0); y < std::min(r.cy + r.h + gap, nf_); ++y)
      for (int x = std::max(r.cx - gap, 0); x < std::min(r.cx + r.w + gap, nf_); ++x) blocked_[idx(x, y)] = 1;
  }
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * nf_ + x; }

  int nf_;
  std::vector<char> marked_;
  std::vector<char> blocked_;
};

bool within_one_coarse_interior(int c0, int size, int r) {
  const int c1 = c0 + size - 1;
  if (c0 / r != c1 / r) return false;
  return c0 % r >= 1 && c1 % r <= r - 2;
}

void place_islands(Layout& layout, const StructuredGrid& grid, const GeometrySpec& spec, std::mt19937_64& rng) {
  if (spec.island_count == 0) return;
  const int nf = grid.fine_cells();
  const int r = grid.refinement();
  const int s = spec.island_size;
  if (s < 1 || s > nf) throw InvalidArgument("geometry: island size must be in [1, nf]");
  if (spec.islands_avoid_coarse_edges && s > r - 2)
    throw InvalidArgument("geometry: islands of size " + std::to_string(s) + " cannot avoid coarse edges at refinement " +
                          std::to_string(r));
  for (int k = 0; k < spec.island_count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const CellRect rect{uniform_int(rng, 0, nf - s), uniform_int(rng, 0, nf - s), s, s};
      if (spec.islands_avoid_coarse_edges &&
          !(within_one_coarse_interior(rect.cx, s, r) && within_one_coarse_interior(rect.cy, s, r)))
        continue;
      if (!layout.free(rect)) continue;
      layout.mark(rect, spec.island_gap);
      placed = true;
    }
    if (!placed)
      throw InvalidArgument("geometry: islands do not fit (placed " + std::to_string(k) + " of " +
                            std::to_string(spec.island_count) + ")");
  }
}

void check_rect(const CellRect& r, int nf) {
  if (r.w < 1 || r.h < 1 || r.cx < 0 || r.cy < 0 || r.cx + r.w > nf || r.cy + r.h > nf)
    throw InvalidArgument("geometry: inclusion rectangle outside the domain");
}

std::string describe(const GeometrySpec& s) {
  std::ostringstream os;
  os << "contrast=" << s.contrast << ";channels=" << s.channel_count << "x" << s.channel_width << ";margin="
     << s.channel_margin << ";islands=" << s.island_count << "x" << s.island_size << ";gap=" << s.island_gap
     << ";avoid_edges=" << s.islands_avoid_coarse_edges << ";period=" << s.period << "/" << s.periodic_size
     << ";rects=" << s.rects.size();
  if (s.gamma) os << ";gamma=" << *s.gamma;
  return os.str();
}

}  // namespace

const char* to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::channels_and_islands: return "channels_and_islands";
    case GeometryKind::many_islands: return "many_islands";
    case GeometryKind::periodic_plus_random_islands: return "periodic_plus_random_islands";
    case GeometryKind::random_background_plus_islands: return "random_background_plus_islands";
    case GeometryKind::from_file: return "from_file";
  }
  return "unknown";
}

GeometryKind geometry_kind_from_string(const std::string& name) {
  for (auto k : {GeometryKind::channels_and_islands, GeometryKind::many_islands,
                 GeometryKind::periodic_plus_random_islands, GeometryKind::random_background_plus_islands,
                 GeometryKind::from_file})
    if (name == to_string(k)) return k;
  throw InvalidArgument("unknown geometry kind '" + name + "'");
}

CoefficientField::CoefficientField(int nf, std::vector<double> values, FieldProvenance provenance)
    : nf_(nf), values_(std::move(values)), kmin_(0), kmax_(0), provenance_(std::move(provenance)) {
  if (nf < 1 || values_.size() != static_cast<std::size_t>(nf) * nf)
    throw DimensionMismatch("coefficient field: expected " + std::to_string(static_cast<long>(nf) * nf) +
                            " values, got " + std::to_string(values_.size()));
  for (std::size_t c = 0; c < values_.size(); ++c)
    if (!(values_[c] > 0.0) || !std::isfinite(values_[c]))
      throw InvalidArgument("coefficient field: non-positive or non-finite value at cell " + std::to_string(c));
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  kmin_ = *lo;
  kmax_ = *hi;
}

bool CoefficientField::is_binary() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == kmin_ || v == kmax_; });
}

CoefficientField CoefficientField::inverted(double scale) const {
  std::vector<double> inv(values_.size());
  std::transform(values_.begin(), values_.end(), inv.begin(), [scale](double v) { return scale / v; });
  FieldProvenance p = provenance_;
  p.generator += "|inverted";
  return CoefficientField(nf_, std::move(inv), std::move(p));
}

CoefficientField generate(const StructuredGrid& grid, const GeometrySpec& spec) {
  if (spec.kind == GeometryKind::from_file) return load_field(grid, spec.path);
  if (!(spec.contrast >= 1.0) || !std::isfinite(spec.contrast))
    throw InvalidArgument("geometry: contrast must be finite and >= 1");

  const int nf = grid.fine_cells();
  std::mt19937_64 rng(spec.seed);
  Layout layout(nf);
  std::vector<double> kappa(static_cast<std::size_t>(nf) * nf, 1.0);
  double high = spec.contrast;

  switch (spec.kind) {
    case GeometryKind::channels_and_islands: {
      if (spec.channel_count < 0 || spec.channel_width < 1)
        throw InvalidArgument("geometry: channel count must be >= 0 and width >= 1");
      if (2 * spec.channel_margin >= nf) throw InvalidArgument("geometry: channel margin leaves no channel");
      if (spec.channel_count * (spec.channel_width + 1) > nf)
        throw InvalidArgument("geometry: channels do not fit");
      for (int k = 0; k < spec.channel_count; ++k) {
        const int centre = static_cast<int>(std::lround(static_cast<double>(k + 1) * nf / (spec.channel_count + 1)));
        const CellRect rect{spec.channel_margin, centre - spec.channel_width / 2, nf - 2 * spec.channel_margin,
                            spec.channel_width};
        check_rect(rect, nf);
        layout.mark(rect, spec.island_gap);
      }
      place_islands(layout, grid, spec, rng);
      break;
    }
    case GeometryKind::many_islands:
      place_islands(layout, grid, spec, rng);
      break;
    case GeometryKind::periodic_plus_random_islands: {
      if (spec.period < 1 || spec.periodic_size < 1 || spec.periodic_size > spec.period)
        throw InvalidArgument("geometry: periodic inclusions need 1 <= size <= period");
      Layout periodic(nf);
      const int offset = (spec.period - spec.periodic_size) / 2;
      for (int cy = offset; cy + spec.periodic_size <= nf; cy += spec.period)
        for (int cx = offset; cx + spec.periodic_size <= nf; cx += spec.period)
          periodic.mark({cx, cy, spec.periodic_size, spec.periodic_size}, 0);
      place_islands(layout, grid, spec, rng);
      for (int cy = 0; cy < nf; ++cy)
        for (int cx = 0; cx < nf; ++cx)
          if (periodic.marked(cx, cy)) kappa[grid.cell(cx, cy)] = high;
      break;
    }
    case GeometryKind::random_background_plus_islands: {
      const double gamma = spec.gamma.value_or(std::log10(spec.contrast));
      if (!(gamma >= 0.0)) throw InvalidArgument("geometry: gamma must be >= 0");
      high = std::pow(10.0, gamma);
      for (auto& k : kappa) k = std::pow(10.0, gamma * uniform01(rng));
      place_islands(layout, grid, spec, rng);
      break;
    }
    case GeometryKind::from_file:
      break;
  }

  for (const auto& rect : spec.rects) {
    check_rect(rect, nf);
    layout.mark(rect, 0);
  }
  for (int cy = 0; cy < nf; ++cy)
    for (int cx = 0; cx < nf; ++cx)
      if (layout.marked(cx, cy)) kappa[grid.cell(cx, cy)] = high;

  return CoefficientField(nf, std::move(kappa), {to_string(spec.kind), describe(spec), spec.seed, ""});
}

CoefficientField generate(const StructuredGrid& grid, GeometrySpec spec, double contrast) {
  spec.contrast = contrast;
  return generate(grid, spec);
}

void save_field(const CoefficientField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << field.fine_cells() << '\n' << std::setprecision(17);
  for (double v : field.values()) out << v << '\n';
  if (!out) throw Error("write to '" + path + "' failed");
}

CoefficientField load_field(const StructuredGrid& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open coefficient file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  int nf = 0;
  {
    std::istringstream head(line);
    if (!(head >> nf)) throw ParseError(path + ": first line must hold the fine cell count");
  }
  if (nf != grid.fine_cells())
    throw DimensionMismatch(path + ": file has nf=" + std::to_string(nf) + ", grid has nf=" +
                            std::to_string(grid.fine_cells()));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(nf) * nf);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    double v = 0;
    if (!(row >> v)) throw ParseError(path + ":" + std::to_string(lineno) + ": not a number");
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": coefficient must be positive and finite");
    values.push_back(v);
  }
  if (values.size() != static_cast<std::size_t>(nf) * nf)
    throw DimensionMismatch(path + ": expected " + std::to_string(static_cast<long>(nf) * nf) + " values, found " +
                            std::to_string(values.size()));
  return CoefficientField(nf, std::move(values), {"from_file", "", 0, path});
}

void export_field_csv(const StructuredGrid& grid, const CoefficientField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "cx,cy,kappa\n" << std::setprecision(17);
  for (int c = 0; c < grid.fine_cell_count(); ++c)
    out << grid.cell_x(c) << ',' << grid.cell_y(c) << ',' << field[c] << '\n';
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

PatchComponents patch_components(const StructuredGrid& grid, const CoefficientField& field,
                                 const SubdomainPatch& patch, Phase side) {
  if (field.fine_cells() != grid.fine_cells()) throw DimensionMismatch("patch_components: field/grid mismatch");
  if (!field.is_binary()) throw InvalidArgument("patch_components: field is not binary");

  const int w = patch.x1 - patch.x0;
  const int h = patch.y1 - patch.y0;
  const bool constant = field.kappa_min() == field.kappa_max();
  auto in_phase = [&](int cell) {
    const double v = field[cell];
    if (side == Phase::low) return v == field.kappa_min();
    return !constant && v == field.kappa_max();
  };

  // patch.cells is row-major over the patch box.
  std::vector<char> member(patch.cells.size());
  for (std::size_t k = 0; k < patch.cells.size(); ++k) member[k] = in_phase(patch.cells[k]);

  DisjointSets sets(patch.cells.size());
  for (int ly = 0; ly < h; ++ly) {
    for (int lx = 0; lx < w; ++lx) {
      const int k = ly * w + lx;
      if (!member[k]) continue;
      if (lx + 1 < w && member[k + 1]) sets.unite(k, k + 1);
      if (ly + 1 < h && member[k + w]) sets.unite(k, k + w);
    }
  }

  const int r = grid.refinement();
  auto touches_interior_edge = [&](int lx, int ly) {
    const int cx = patch.x0 + lx, cy = patch.y0 + ly;
    // A coarse line at fine coordinate L is interior to the patch when
    // x0 < L < x1; the cells cx = L - 1 and cx = L have an edge on it.
    for (int line : {cx, cx + 1})
      if (line % r == 0 && line > patch.x0 && line < patch.x1) return true;
    for (int line : {cy, cy + 1})
      if (line % r == 0 && line > patch.y0 && line < patch.y1) return true;
    return false;
  };

  PatchComponents out;
  out.labels.assign(patch.cells.size(), -1);
  std::vector<int> label_of_root(patch.cells.size(), -1);
  std::vector<char> touching;
  for (int k = 0; k < static_cast<int>(patch.cells.size()); ++k) {
    if (!member[k]) continue;
    const int root = sets.find(k);
    if (label_of_root[root] < 0) {
      label_of_root[root] = out.count++;
      touching.push_back(0);
    }
    const int label = label_of_root[root];
    out.labels[k] = label;
    if (touches_interior_edge(k % w, k / w)) touching[label] = 1;
  }
  out.touching_interior_edges = static_cast<int>(std::count(touching.begin(), touching.end(), 1));

  if (out.count == 0) {
    out.count = 1;
    out.touching_interior_edges = 1;
    out.convention_applied = true;
  }
  return out;
}

}  // namespace sdd
