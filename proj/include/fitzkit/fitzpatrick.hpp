#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fitzkit/exact_fn.hpp"
#include "fitzkit/grid.hpp"
#include "fitzkit/operators.hpp"

namespace fitzkit {

/// φ_T for finite T: one piece per (y, y*) with slope (y*, y), offset −⟨y,y*⟩.
MaxAffineFn phi_finite(const FiniteOperator& t);

/// σ_T for finite T: generators ((y, y*), ⟨y,y*⟩).
GeneratorFn sigma_finite(const FiniteOperator& t);

/// Exact φ_T(x, x*) for a maximal monotone curve, piece by piece.
/// InputError when the curve is not maximal.
ExtRational phi_pwl1d_eval(const PwlCurve1d& t, const Rational& x, const Rational& xstar);

/// sup over the curve of x·y* + y·x* (the J-conjugate of δ_T).
ExtRational j_delta_pwl1d_eval(const PwlCurve1d& t, const Rational& x, const Rational& xstar);

/// φ_T for a monotone linear map: ¼ cᵀS⁺c with c = Mᵀx + x*, S = (M+Mᵀ)/2,
/// +∞ when c ∉ range S. InputError if M is not monotone.
ExtRational phi_linear_eval(const LinearOperator& t, std::span<const Rational> x, std::span<const Rational> xstar);

/// σ_T for a monotone linear map: xᵀMx on the graph, +∞ off it.
ExtRational sigma_linear_eval(const LinearOperator& t, std::span<const Rational> x, std::span<const Rational> xstar);

struct FamilyMembershipReport {
  bool is_member = false;
  double max_deficit_below_pi = 0.0;  // max of π − h over check points
  double max_graph_gap = 0.0;         // max of |h − π| over graph points
  std::vector<QVec> witnesses;
  std::size_t checked = 0;
};

/// Exact forms: points are rational, comparisons exact, `tol` applied to the
/// rational margins.
FamilyMembershipReport family_membership(const MaxAffineFn& h, const std::vector<QVec>& graph_points,
                                         const std::vector<QVec>& check_points, const Rational& tol = 0);
FamilyMembershipReport family_membership(const GeneratorFn& h, const std::vector<QVec>& graph_points,
                                         const std::vector<QVec>& check_points, const Rational& tol = 0);

/// Grid form: points are node indices (empty check list = every node). The
/// grid must be discretely convex (second differences along every axis and
/// every pair of axis diagonals ≥ −tol on finite triples); otherwise
/// UnsupportedError since membership presumes a convex h.
FamilyMembershipReport family_membership(const GridFn& h, const std::vector<std::size_t>& graph_nodes,
                                         const std::vector<std::size_t>& check_nodes, double tol);

/// First failing discrete convexity triple (as a node index), or nullopt.
std::optional<std::size_t> discrete_convexity_violation(const GridFn& h, double tol);

struct EnvelopeReport {
  bool phi_le_sigma = true;
  bool phi_eq_j_sigma = true;
  bool piece_lists_equal = true;
  std::optional<QVec> witness;
  std::size_t probes = 0;
};

/// φ_T ≤ σ_T and φ_T = Jσ_T at every probe, exactly; the piece list of
/// Jσ_T (computed with conjugate_exact) is also compared with φ_T's.
EnvelopeReport minimality_maximality_envelope(const FiniteOperator& t, const std::vector<QVec>& probes);

/// φ_T or σ_T of a finite operator sampled on a grid over X×X*.
GridFn phi_on_grid(const FiniteOperator& t, const GridSpec& spec);
GridFn sigma_on_grid(const FiniteOperator& t, const GridSpec& spec);

/// φ_T of a maximal curve or a monotone linear map, evaluated exactly at
/// each node (coordinates read as exact rationals).
GridFn phi_on_grid(const PwlCurve1d& t, const GridSpec& spec);
GridFn phi_on_grid(const LinearOperator& t, const GridSpec& spec);

}  // namespace fitzkit
