#include "fitzkit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fitzkit/errors.hpp"

namespace fitzkit {

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.m;
  return n;
}

std::vector<std::size_t> GridSpec::shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes) s.push_back(a.m);
  return s;
}

std::vector<std::size_t> GridSpec::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    idx[k] = flat % axes[k].m;
    flat /= axes[k].m;
  }
  return idx;
}

std::size_t GridSpec::ravel(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) flat = flat * axes[k].m + idx[k];
  return flat;
}

RVec GridSpec::point(std::size_t flat) const {
  auto idx = unravel(flat);
  RVec p(axes.size());
  for (std::size_t k = 0; k < axes.size(); ++k) p[k] = axes[k].coord(idx[k]);
  return p;
}

bool GridSpec::on_boundary(std::size_t flat) const {
  for (std::size_t k = axes.size(); k-- > 0;) {
    const std::size_t i = flat % axes[k].m;
    flat /= axes[k].m;
    if (i == 0 || i + 1 == axes[k].m) return true;
  }
  return false;
}

void GridSpec::validate() const {
  if (axes.empty()) throw InputError("grid spec has no axes");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const auto& a = axes[k];
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.lo < a.hi))
      throw InputError("grid axis " + std::to_string(k + 1) + ": need finite lo < hi");
    if (a.m < 2) throw InputError("grid axis " + std::to_string(k + 1) + ": need at least 2 nodes");
  }
}

GridSpec uniform_spec(std::size_t d, double lo, double hi, std::size_t m) {
  GridSpec s{std::vector<Axis>(d, Axis{lo, hi, m})};
  s.validate();
  return s;
}

GridSpec parse_grid_spec(const std::string& text) {
  GridSpec spec;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ',')) {
    std::stringstream parts(item);
    std::string lo, hi, m;
    if (!std::getline(parts, lo, ':') || !std::getline(parts, hi, ':') || !std::getline(parts, m))
      throw InputError("grid spec '" + item + "' is not lo:hi:m");
    try {
      std::size_t used = 0;
      Axis a{std::stod(lo), std::stod(hi), 0};
      long long count = std::stoll(m, &used);
      if (used != m.size() || count < 0) throw InputError("bad node count");
      a.m = static_cast<std::size_t>(count);
      spec.axes.push_back(a);
    } catch (const std::logic_error&) {
      throw InputError("grid spec '" + item + "' is not lo:hi:m");
    }
  }
  spec.validate();
  return spec;
}

bool swappable(const GridSpec& spec) {
  const std::size_t d = spec.dim();
  if (d == 0 || d % 2 != 0) return false;
  for (std::size_t i = 0; i < d / 2; ++i)
    if (!(spec.axes[i] == spec.axes[i + d / 2])) return false;
  return true;
}

GridSpec swap_spec(const GridSpec& spec) {
  const std::size_t d = spec.dim();
  if (d % 2 != 0) throw InputError("swap_spec: odd number of axes");
  GridSpec out = spec;
  for (std::size_t i = 0; i < d; ++i) out.axes[i] = spec.axes[(i + d / 2) % d];
  return out;
}

bool GridFn::proper() const {
  bool any_finite = false;
  for (double v : values) {
    if (std::isnan(v) || v == kNegInf) return false;
    if (std::isfinite(v)) any_finite = true;
  }
  return any_finite;
}

void GridFn::require_proper(const char* what) const {
  if (values.size() != spec.size()) throw InputError(std::string(what) + ": value count does not match grid");
  if (!proper()) throw InputError(std::string(what) + ": function is not proper (all +inf, or has -inf/NaN)");
}

GridFn sample(const GridSpec& spec, const std::function<double(std::span<const double>)>& f) {
  spec.validate();
  GridFn g{spec, std::vector<double>(spec.size())};
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = f(spec.point(i));
  return g;
}

namespace {

std::size_t swapped_index(const GridSpec& spec, std::size_t flat) {
  auto idx = spec.unravel(flat);
  const std::size_t h = idx.size() / 2;
  std::rotate(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(h), idx.end());
  return swap_spec(spec).ravel(idx);
}

}  // namespace

GridFn swap_blocks(const GridFn& f) {
  GridFn g{swap_spec(f.spec), std::vector<double>(f.values.size())};
  for (std::size_t i = 0; i < f.values.size(); ++i) g.values[swapped_index(f.spec, i)] = f.values[i];
  return g;
}

std::vector<std::uint8_t> swap_blocks(const GridSpec& spec, std::span<const std::uint8_t> flags) {
  std::vector<std::uint8_t> out(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) out[swapped_index(spec, i)] = flags[i];
  return out;
}

double default_tolerance() {
  if (const char* env = std::getenv("FITZKIT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v >= 0) return v;
    throw InputError(std::string("FITZKIT_TOL must be a nonnegative number, got \"") + env + "\"");
  }
  return 1e-9;
}

std::string format_double(double v) {
  if (v == kPosInf) return "+inf";
  if (v == kNegInf) return "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& out, std::size_t d, const char* last) {
  for (std::size_t k = 0; k < d; ++k) out << "axis" << (k + 1) << ',';
  out << last << '\n';
}

double parse_cell(const std::string& cell) {
  if (cell == "+inf" || cell == "inf") return kPosInf;
  if (cell == "-inf") return kNegInf;
  std::size_t used = 0;
  double v = std::stod(cell, &used);
  if (used != cell.size()) throw InputError("bad CSV number '" + cell + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const GridFn& f) {
  write_header(out, f.spec.dim(), "value");
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    for (double c : f.spec.point(i)) out << format_double(c) << ',';
    out << format_double(f.values[i]) << '\n';
  }
}

void write_mask_csv(std::ostream& out, const GridSpec& spec, std::span<const std::uint8_t> mask) {
  write_header(out, spec.dim(), "saturated");
  for (std::size_t i = 0; i < mask.size(); ++i) {
    for (double c : spec.point(i)) out << format_double(c) << ',';
    out << (mask[i] ? 1 : 0) << '\n';
  }
}

GridFn read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV: missing header");
  const auto d = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (d == 0) throw InputError("CSV: header needs at least one axis column");
  std::vector<RVec> coords;
  std::vector<double> values;
  std::vector<std::map<double, int>> seen(d);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    RVec r;
    try {
      while (std::getline(row, cell, ',')) r.push_back(parse_cell(cell));
    } catch (const std::logic_error&) {
      throw InputError("CSV: unparsable row '" + line + "'");
    }
    if (r.size() != d + 1) throw InputError("CSV: row has wrong column count: '" + line + "'");
    values.push_back(r.back());
    r.pop_back();
    for (std::size_t k = 0; k < d; ++k) seen[k][r[k]] = 0;
    coords.push_back(std::move(r));
  }
  GridSpec spec;
  for (std::size_t k = 0; k < d; ++k) {
    if (seen[k].size() < 2) throw InputError("CSV: axis " + std::to_string(k + 1) + " has fewer than 2 nodes");
    spec.axes.push_back(Axis{seen[k].begin()->first, seen[k].rbegin()->first, seen[k].size()});
  }
  spec.validate();
  if (coords.size() != spec.size()) throw InputError("CSV: rows do not form a full rectangular grid");
  GridFn f{spec, std::vector<double>(spec.size(), kPosInf)};
  std::vector<std::uint8_t> filled(spec.size(), 0);
  for (std::size_t r = 0; r < coords.size(); ++r) {
    std::vector<std::size_t> idx(d);
    for (std::size_t k = 0; k < d; ++k) {
      const Axis& a = spec.axes[k];
      const double t = (coords[r][k] - a.lo) / a.step();
      const auto i = static_cast<std::size_t>(std::llround(t));
      if (std::abs(a.coord(i) - coords[r][k]) > 1e-9 * std::max(1.0, std::abs(a.hi - a.lo)))
        throw InputError("CSV: coordinates are not equispaced on axis " + std::to_string(k + 1));
      idx[k] = i;
    }
    const std::size_t flat = spec.ravel(idx);
    if (filled[flat]) throw InputError("CSV: duplicate node");
    filled[flat] = 1;
    f.values[flat] = values[r];
  }
  return f;
}

}  // namespace fitzkit
