#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fitzkit/conjugate.hpp"
#include "fitzkit/exact_fn.hpp"
#include "fitzkit/grid.hpp"
#include "fitzkit/operators.hpp"
#include "fitzkit/projection.hpp"
#include "fitzkit/region.hpp"

namespace fitzkit {

/// Outcome of one checker run. For inequality checks worst_margin is the
/// largest (lhs − rhs) found, so holds ⇔ worst_margin ≤ tolerance. For
/// inclusion checks it is 0 when nothing was found outside the right-hand
/// set and positive (the size of the excess, or 1 for a bare direction)
/// otherwise.
struct LemmaReport {
  std::string lemma_id;
  std::string inputs_digest;
  bool holds = true;
  double worst_margin = 0.0;
  std::optional<std::string> witness;
  std::string note;
  bool skipped = false;
};

std::string format_point(std::span<const Rational> z);
std::string format_point(std::span<const double> z);

struct ShiftSample {
  QVec zstar;
  QVec wstar;
  Rational lambda;
};

/// f*(z* + λw*) ≤ f*(z*) + λ δ*_{D(f)}(w*) for every sample. The grid
/// version takes D(f) as the finite nodes unless `declared_domain` is given.
/// InputError for λ < 0 or mismatched dimensions.
LemmaReport check_conjugate_shift(const GridFn& f, std::span<const double> zstar, std::span<const double> wstar,
                                  std::span<const double> lambdas, double tol,
                                  const std::optional<VPolytope>& declared_domain = std::nullopt);
LemmaReport check_conjugate_shift(const GeneratorFn& f, const std::vector<ShiftSample>& samples);

/// D(Jδ_{D(h)}) ⊆ 0⁺D(Jh).
/// GeneratorFn: D(h) is a polytope, so the left side is the whole space.
LemmaReport check_recession_inclusion(const GeneratorFn& h);
/// Polyhedral data: D(h) = `dom_h`, D(Jh) = `dom_jh`. The left side is the
/// swapped cone spanned by the face normals of D(h).
LemmaReport check_recession_inclusion(const HPolyhedron& dom_h, const HPolyhedron& dom_jh);
/// h = σ_T of a curve: D(Jσ_T) = D(φ_T) and Jδ_{D(σ_T)} = Jδ_T.
LemmaReport check_recession_inclusion(const PwlCurve1d& t);

/// Which hypothesis the caller vouches for: Jh ≥ π (projection-through-J
/// inclusions) and/or h convex with h ≥ π (inclusions into h* domains).
enum class ProjectionPrecondition { undeclared, jh_ge_pi, h_convex_ge_pi, both };

/// The declared hypotheses are re-verified on the grid; a failing one yields
/// a report with holds = false and its witness. One report per declared
/// direction. InputError when undeclared.
std::vector<LemmaReport> check_projection_inclusions(const GridFn& h, ProjectionPrecondition declared, double tol);

/// cl P₁D(h) = cl conv D(T) and cl P₂D(h) = cl conv R(T) for h ∈ {φ_T, σ_T,
/// ½(φ_T + σ_T)}. Curves are compared on the window [−r, r]² sampled with m
/// nodes per axis; linear maps exactly as subspaces. A finite T only admits
/// the σ_T check (φ_T of a finite set has full domain) and must be
/// monotone.
LemmaReport check_domain_invariance(const PwlCurve1d& t, const Rational& r, std::size_t m);
LemmaReport check_domain_invariance(const LinearOperator& t);
LemmaReport check_domain_invariance(const FiniteOperator& t);

/// D(δ*_{D(T)}) ⊆ 0⁺ cl conv R(T) and D(δ*_{R(T)}) ⊆ 0⁺ cl conv D(T), the
/// recession cones estimated on the windows [−kr, kr]², k = 1, 2, 4 (a
/// direction is accepted when the graph reaches that window edge every
/// time). For bounded D(T) the reach of R(T) must also grow strictly.
LemmaReport check_range_domain_duality(const PwlCurve1d& t, const Rational& r);
LemmaReport check_range_domain_duality(const LinearOperator& t);

/// x·x* ≤ 0 wherever Jδ_T is finite, over a probe set: the nodes of the
/// window [−r, r]² with m per axis (curves), or window primal nodes paired
/// with points of the domain {x* = −Mᵀx} plus the plain window grid (linear).
LemmaReport check_gg(const PwlCurve1d& t, const Rational& r, std::size_t m);
LemmaReport check_gg(const LinearOperator& t, const Rational& r, std::size_t m);

/// `jh` = Jh on a grid. `bound_projection` is the projection of D(h) that
/// is assumed inside B[L]; when its largest norm exceeds L + tol the report
/// is skipped. Otherwise every difference of Jh along `lipschitz_block` axes
/// must be ≤ L·step + tol and the finite nodes of Jh must form a product of
/// their two block projections.
LemmaReport lipschitz_profile(const ConjugateResult& jh, Block lipschitz_block, double L,
                              const GridProjection& bound_projection, double tol);
/// A-form: every piece's `block` slope has squared norm ≤ bound_sq, exactly.
LemmaReport lipschitz_profile(const MaxAffineFn& f, Block block, const Rational& bound_sq);

/// Bounded-range / bounded-domain equivalences on a grid function. When the
/// operator's own boundedness is known it must agree with the observed one.
LemmaReport check_bounded_range(const GridFn& h, double tol, std::optional<bool> range_bounded = std::nullopt);
LemmaReport check_bounded_domain(const GridFn& h, double tol, std::optional<bool> domain_bounded = std::nullopt);
LemmaReport check_bounded_range(const FiniteOperator& t);

using CatalogOperator = std::variant<PwlCurve1d, LinearOperator, FiniteOperator>;

struct CatalogEntry {
  std::string name;
  CatalogOperator op;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Seven named operators, 20 random monotone 2×2 linear maps and 50 random
/// finite monotone sets (25 in R, 25 in R²).
std::vector<CatalogEntry> default_catalog(std::uint64_t seed = kDefaultSeed);
std::vector<CatalogEntry> named_catalog();

struct BatteryEntry {
  std::string operator_name;
  LemmaReport report;
  bool expected = true;

  bool passed() const { return report.holds == expected; }
};

/// Every applicable checker on every catalog entry (expected to hold).
std::vector<BatteryEntry> run_lemma_battery(const std::vector<CatalogEntry>& catalog, std::uint64_t seed);

/// One purpose-built violator per checker (expected to fail).
std::vector<BatteryEntry> negative_controls();

/// Representability gate on catalog φ grids and a closed form (expected to
/// hold), plus h = 0 (expected to fail).
std::vector<BatteryEntry> run_gate_suite();

/// ∂|·| extraction at m = 33 and the R⁴ rotation instance at m = 17.
std::vector<BatteryEntry> run_pipeline_suite();

}  // namespace fitzkit
