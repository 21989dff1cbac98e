#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fitzkit/exact_fn.hpp"
#include "fitzkit/grid.hpp"
#include "fitzkit/region.hpp"

namespace fitzkit {

enum class Block { primal, dual };

const char* block_name(Block b);

/// Projection of a grid domain onto one block: which block nodes carry a
/// finite value somewhere in their fiber.
struct GridProjection {
  std::vector<Axis> axes;
  std::vector<std::uint8_t> member;

  GridSpec spec() const { return GridSpec{axes}; }
  std::size_t count() const;
  std::vector<RVec> points() const;
  /// Some member sits on the outer edge of the window.
  bool touches_boundary() const;
  /// Largest Euclidean norm of a member (−∞ if empty).
  double max_norm() const;
};

/// Grid version. Nodes flagged in `exclude` (e.g. a saturation mask) are
/// ignored. InputError if h is improper.
GridProjection project_domain(const GridFn& h, Block block, std::span<const std::uint8_t> exclude = {});

/// Projection of the A-form domain (full block space if unrestricted).
Region project_domain(const MaxAffineFn& h, Block block);

/// Hull of the projected generator points.
VPolytope project_domain(const GeneratorFn& h, Block block);

/// Coordinates [0, n) or [n, 2n) of a 2n-vector.
template <class V>
V block_of(const V& z, Block b) {
  const std::size_t n = z.size() / 2;
  const std::size_t off = b == Block::primal ? 0 : n;
  return V(z.begin() + static_cast<std::ptrdiff_t>(off), z.begin() + static_cast<std::ptrdiff_t>(off + n));
}

}  // namespace fitzkit
