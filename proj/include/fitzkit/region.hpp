#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fitzkit/ext_real.hpp"
#include "fitzkit/rational.hpp"

namespace fitzkit {

/// a·z ≤ b
struct HalfSpace {
  QVec a;
  Rational b;
};

/// Intersection of finitely many half-spaces in R^dim. No half-spaces means R^dim.
struct HPolyhedron {
  std::size_t dim = 0;
  std::vector<HalfSpace> faces;

  bool contains(std::span<const Rational> z) const;
  /// Exact emptiness via Fourier–Motzkin elimination of every variable.
  bool is_empty() const;
  /// Whether the set is bounded (recession cone is {0}).
  bool is_bounded() const;
};

/// Convex hull of a finite vertex list.
struct VPolytope {
  std::size_t dim = 0;
  std::vector<QVec> vertices;

  bool contains(std::span<const Rational> z) const;
};

/// Closed Euclidean ball ‖z − center‖ ≤ radius (product norm on X×X*).
struct NormBall {
  QVec center;
  Rational radius;

  bool contains(std::span<const Rational> z) const;
};

using Region = std::variant<HPolyhedron, VPolytope, NormBall>;

std::size_t region_dim(const Region& c);

/// 0 on C, +∞ off C.
ExtRational indicator_eval(const Region& c, std::span<const Rational> z);

/// max over vertices of s·v.
Rational support_function(const VPolytope& c, std::span<const Rational> s);

/// {u : a·u ≤ 0 for every face}. Throws InputError when C is empty.
HPolyhedron recession_cone(const HPolyhedron& c);

/// One Fourier–Motzkin step: eliminates coordinate `k` and drops it, so the
/// result lives in R^(dim−1).
HPolyhedron eliminate_variable(const HPolyhedron& c, std::size_t k);

/// Projection onto the listed coordinates (in the listed order) by
/// successive elimination of all others.
HPolyhedron project(const HPolyhedron& c, std::span<const std::size_t> keep);

/// Box lo ≤ z ≤ hi as an H-polyhedron.
HPolyhedron box(std::span<const Rational> lo, std::span<const Rational> hi);

/// sup of c·z over C: +∞ when unbounded, the optimum (with a maximizer)
/// otherwise. InputError when C is empty.
struct LinearMax {
  ExtRational value;
  QVec point;  // a maximizer, or a point of C with c·z above any given level when unbounded
};
LinearMax max_linear(const HPolyhedron& c, std::span<const Rational> objective);

/// A point of `inner` outside `outer`, or nullopt when inner ⊆ outer.
std::optional<QVec> inclusion_witness(const HPolyhedron& inner, const HPolyhedron& outer);

/// Conic hull {Σ μ_i g_i : μ ≥ 0} membership, exact.
bool in_cone(const std::vector<QVec>& generators, std::span<const Rational> u);

}  // namespace fitzkit
