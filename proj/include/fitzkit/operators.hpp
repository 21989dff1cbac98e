#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "fitzkit/ext_real.hpp"
#include "fitzkit/rational.hpp"

namespace fitzkit {

/// z = (x, x*) in X×X*, X = Rⁿ.
struct PrimalDualPoint {
  QVec x;
  QVec xstar;

  std::size_t n() const { return x.size(); }
  /// (x, x*) as one vector of length 2n.
  QVec joined() const;
  static PrimalDualPoint split(std::span<const Rational> z);
  bool operator==(const PrimalDualPoint&) const = default;
  auto operator<=>(const PrimalDualPoint&) const = default;
};

/// ⟨x, x*⟩
Rational pairing(const PrimalDualPoint& z);
Rational pairing(std::span<const Rational> z);

struct FiniteOperator {
  std::vector<PrimalDualPoint> pairs;

  std::size_t n() const;
  /// Consistent dimensions and no duplicate pairs.
  void validate() const;
};

struct MonotoneReport {
  bool monotone = true;
  /// min over pairs of ⟨x−y, x*−y*⟩ (0 for fewer than two pairs).
  Rational worst = 0;
  std::optional<std::pair<std::size_t, std::size_t>> violator;
};

/// Exact pairwise check. A double-precision filter with an error bound
/// settles clear cases; everything else is decided in rationals.
MonotoneReport is_monotone(const FiniteOperator& t);

/// y in [from, to], y* = a·y + b.
struct Sloped {
  ExtRational from;
  ExtRational to;
  Rational a;
  Rational b;
};

/// y fixed, y* in [lo, hi].
struct Vertical {
  Rational y;
  ExtRational lo;
  ExtRational hi;
};

using CurveSegment = std::variant<Sloped, Vertical>;

/// Monotone curve in R×R traced by consecutive segments.
struct PwlCurve1d {
  std::vector<CurveSegment> segments;
};

/// True iff the segments chain into a connected nondecreasing curve that is
/// unbounded at both ends. InputError for malformed sequences (empty,
/// reversed intervals, infinite endpoints anywhere but the two ends).
bool is_maximal_1d(const PwlCurve1d& t);

/// Closed hull of D(T) and R(T) as intervals (curve assumed well formed).
std::pair<ExtRational, ExtRational> domain_interval(const PwlCurve1d& t);
std::pair<ExtRational, ExtRational> range_interval(const PwlCurve1d& t);

/// Whether (y, y*) lies on the curve.
bool on_curve(const PwlCurve1d& t, const Rational& y, const Rational& ystar);

/// Graph {(x, Mx)}.
struct LinearOperator {
  std::vector<QVec> m;

  std::size_t n() const { return m.size(); }
  QVec apply(std::span<const Rational> x) const;
  /// (M + Mᵀ)/2
  std::vector<QVec> symmetric_part() const;
  void validate() const;
};

/// Exact test that M + Mᵀ is positive semidefinite (all principal minors ≥ 0).
bool linear_is_monotone(const LinearOperator& t);
bool is_psd(const std::vector<QVec>& s);

/// Axis-aligned box in X×X* (2n coordinates).
struct Box {
  QVec lo;
  QVec hi;
  bool contains(std::span<const Rational> z) const;
};

/// Equispaced samples of the graph inside `box`: `count` per sloped
/// segment (in y) and `vertical_count` per vertical segment (in y*),
/// duplicates removed. InputError if nothing lies in the box.
FiniteOperator sample_graph(const PwlCurve1d& t, const Box& box, std::size_t count, std::size_t vertical_count = 0);

/// Pairs (x, Mx) for x on a `count`^n grid over the primal part of the box,
/// kept when Mx lies in the dual part.
FiniteOperator sample_graph(const LinearOperator& t, const Box& box, std::size_t count);

/// Solution of A y = r (any one), or nullopt when inconsistent. Exact.
std::optional<QVec> solve_linear(std::vector<QVec> a, QVec r);

/// Common catalog operators.
PwlCurve1d identity_curve();
PwlCurve1d sign_curve();                    // ∂|·|
PwlCurve1d interval_normal_cone_curve();    // ∂δ_[−1,1]
PwlCurve1d origin_normal_cone_curve();      // ∂δ_{0} = {0}×R
PwlCurve1d clamp_curve();                   // y* = clamp(y, −1, 1)
LinearOperator rotation_operator();         // (x₁,x₂) ↦ (−x₂, x₁)

}  // namespace fitzkit
