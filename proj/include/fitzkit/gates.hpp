#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fitzkit/conjugate.hpp"
#include "fitzkit/exact_fn.hpp"
#include "fitzkit/grid.hpp"
#include "fitzkit/operators.hpp"
#include "fitzkit/projection.hpp"

namespace fitzkit {

struct MajorizeResult {
  bool holds = true;
  double worst = kNegInf;  // max of π − h over checked nodes with finite h
  std::optional<RVec> witness;
  std::size_t checked = 0;
};

/// h ≥ π at every grid node not flagged in `skip`.
MajorizeResult check_majorizes_pi(const GridFn& h, double tol, std::span<const std::uint8_t> skip = {});

struct ExactMajorizeResult {
  bool holds = true;
  ExtRational worst = ExtRational::neg_inf();
  std::optional<QVec> witness;
  std::size_t checked = 0;
};

using ExactEvaluator = std::function<ExtRational(std::span<const Rational>)>;

/// h ≥ π at rational probes, exactly (up to `tol`).
ExactMajorizeResult check_majorizes_pi(const ExactEvaluator& h, const std::vector<QVec>& probes,
                                       const Rational& tol = 0);

struct GateReport {
  MajorizeResult h_ge_pi;
  MajorizeResult jh_ge_pi;
  std::string domain_condition_note;
  ConjugateResult jh;

  bool holds() const { return h_ge_pi.holds && jh_ge_pi.holds; }
};

/// h ≥ π on every node and Jh ≥ π off the saturation mask of Jh.
/// `declared_domain` records the caller's statement about P₁D(h); when
/// empty, the observed primal projection is described instead.
GateReport representability_gate(const GridFn& h, double tol, const std::string& declared_domain = "");

struct ExtractionResult {
  FiniteOperator graph;
  std::vector<std::size_t> nodes;
  double tol = 0.0;
  std::optional<double> hausdorff_to_reference;
  MonotoneReport monotone;
  GateReport gate;
};

/// Nodes where Jh is finite, unmasked and Jh − π ≤ tol. Runs the gate first
/// (with `gate_tol`) and throws PreconditionError naming the witness if it
/// fails. Monotonicity of the extracted set is re-verified exactly.
ExtractionResult extract_operator(const GridFn& h, double tol, double gate_tol,
                                  const std::string& declared_domain = "");

/// Hausdorff distance in the ∞-metric between two finite point sets
/// (+∞ if exactly one is empty, 0 if both are).
double hausdorff_inf(const std::vector<RVec>& a, const std::vector<RVec>& b);

struct BoundednessReport {
  Block bounded_block = Block::dual;
  bool projection_bounded = false;
  double bound = kPosInf;               // L: largest norm over the projection
  double lipschitz_estimate = 0.0;      // largest finite-difference slope
  bool applicable = false;              // projection bounded, so a claim is made
  bool holds = false;                   // applicable && estimate ≤ L + tol
  std::optional<RVec> witness;
  std::string note;
};

/// Range side: P₂D(h) bounded by L ⇒ slices x ↦ h(x, x*) are L-Lipschitz.
BoundednessReport bounded_range_report(const GridFn& h, double tol);
/// Domain side: P₁D(h) bounded by L ⇒ slices x* ↦ h(x, x*) are L-Lipschitz.
BoundednessReport bounded_domain_report(const GridFn& h, double tol);

/// Largest squared norm of the given block of piece slopes.
Rational max_block_slope_norm2(const MaxAffineFn& f, Block block);

struct ExactBoundednessReport {
  Rational bound_sq;       // L² from the operator
  Rational max_slope_sq;   // largest squared block slope of φ_T
  bool holds = false;
};

/// φ_T of a finite T: x-block slopes are the y*, so their norm is at most
/// max ‖y*‖ (range side) ; dual-block slopes are the y (domain side).
ExactBoundednessReport bounded_range_report(const FiniteOperator& t);
ExactBoundednessReport bounded_domain_report(const FiniteOperator& t);

/// h((x,x*),(y*,y**)) = ‖(x − y**, x* + y*)‖ + δ_{unit ball}(y*, y**) on a
/// swappable 4-axis grid.
GridFn build_cw_h(const GridSpec& spec);

struct PipelineOptions {
  double gate_tol = 1e-6;
  double extract_tol = 1e-9;
  /// Fiber coverage is only required for primal nodes with ‖z‖ ≤ radius.
  std::optional<double> coverage_radius;
  std::string declared_domain;
};

struct PipelineReport {
  GateReport gate;
  ExtractionResult extraction;
  double range_bound = 0.0;             // max norm over P₂D(h)
  double max_extracted_range_norm = 0.0;
  bool range_ok = false;
  std::size_t fibers_checked = 0;
  std::size_t fibers_missing = 0;
  std::optional<RVec> missing_fiber;
  bool fibers_ok = false;
  bool monotone_ok = false;
  std::string window_note;

  bool holds() const { return gate.holds() && range_ok && fibers_ok && monotone_ok; }
};

/// Gate → extraction → range bound, fiber coverage and monotonicity.
/// PreconditionError when P₂D(h) reaches the edge of the window (not
/// observably bounded). A failed gate returns early with holds() false.
PipelineReport main_pipeline(const GridFn& h, const PipelineOptions& options);

/// Hausdorff distance (∞-metric on X×X*) between extracted nodes with
/// ‖z‖ ≤ radius and the rotation graph {(z, Rz) : ‖z‖ ≤ radius}, the latter
/// sampled with spacing step/refine.
double rotation_graph_hausdorff(const ExtractionResult& e, double radius, double step, std::size_t refine);

}  // namespace fitzkit
