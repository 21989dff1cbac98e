#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fitzkit/ext_real.hpp"

namespace fitzkit {

/// Closed interval [lo, hi] sampled at m equispaced nodes.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t m = 2;

  double coord(std::size_t i) const { return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1); }
  double step() const { return (hi - lo) / static_cast<double>(m - 1); }
  bool operator==(const Axis&) const = default;
};

/// Uniform rectangular grid. For functions on X×X* the first half of the
/// axes is primal and the second half dual. Nodes are stored row-major,
/// last axis fastest.
struct GridSpec {
  std::vector<Axis> axes;

  std::size_t dim() const { return axes.size(); }
  std::size_t size() const;
  std::vector<std::size_t> shape() const;
  std::vector<std::size_t> unravel(std::size_t flat) const;
  std::size_t ravel(std::span<const std::size_t> idx) const;
  RVec point(std::size_t flat) const;
  /// Whether some coordinate of node `flat` sits at index 0 or m−1.
  bool on_boundary(std::size_t flat) const;
  /// Throws InputError unless every axis has lo < hi, m ≥ 2 and finite ends.
  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

/// Same spec on every one of `d` axes.
GridSpec uniform_spec(std::size_t d, double lo, double hi, std::size_t m);

/// Parses "lo:hi:m[,lo:hi:m...]".
GridSpec parse_grid_spec(const std::string& text);

/// Even dimension with axis i identical to axis i + d/2, so that exchanging
/// the primal and dual blocks maps the grid onto itself.
bool swappable(const GridSpec& spec);

/// Exchanges the primal and dual axis blocks of the spec.
GridSpec swap_spec(const GridSpec& spec);

/// Extended-real samples on a grid; +∞ is kPosInf. No interpolation: the
/// function is only defined at nodes.
struct GridFn {
  GridSpec spec;
  std::vector<double> values;

  /// No −∞ (and no NaN) anywhere, at least one finite node.
  bool proper() const;
  void require_proper(const char* what) const;
};

GridFn sample(const GridSpec& spec, const std::function<double(std::span<const double>)>& f);

/// g(x, x*) = f(x*, x) on the swapped spec.
GridFn swap_blocks(const GridFn& f);

/// Same permutation applied to a per-node flag array.
std::vector<std::uint8_t> swap_blocks(const GridSpec& spec, std::span<const std::uint8_t> flags);

/// CSV with header "axis1,...,axisd,value", one row per node, "+inf" for the sentinel.
void write_csv(std::ostream& out, const GridFn& f);
void write_mask_csv(std::ostream& out, const GridSpec& spec, std::span<const std::uint8_t> mask);
/// Reads a grid written by write_csv; the spec is recovered from the coordinates.
GridFn read_csv(std::istream& in);

/// Default absolute tolerance for grid comparisons: 1e-9, or the value of
/// FITZKIT_TOL. InputError when FITZKIT_TOL is set but not a nonnegative number.
double default_tolerance();

/// "%.17g", or "+inf"/"-inf".
std::string format_double(double v);

}  // namespace fitzkit
