#include <doctest.h>

#include <cmath>

#include "fitzkit/fitzpatrick.hpp"
#include "fitzkit/gates.hpp"
#include "fitzkit/projection.hpp"
#include "support.hpp"

using namespace fitzkit;

namespace {

// |x| + δ_[−1,1](x*), the Fitzpatrick function of ∂|·|.
GridFn abs_plus_box(std::size_t m) {
  return sample(uniform_spec(2, -2, 2, m), [](std::span<const double> z) {
    return std::abs(z[1]) <= 1 ? std::abs(z[0]) : kPosInf;
  });
}

// Distance in the max metric from (x, x*) to the graph of ∂|·|.
double distance_to_sign_graph(double x, double xs) {
  double d = std::max(std::abs(x), std::max(0.0, std::abs(xs) - 1));  // vertical piece
  d = std::min(d, std::max(x < 0 ? -x : 0.0, std::abs(xs - 1)));     // right ray
  d = std::min(d, std::max(x > 0 ? x : 0.0, std::abs(xs + 1)));      // left ray
  return d;
}

}  // namespace

TEST_CASE("majorization of pi") {
  const GridFn zero = sample(uniform_spec(2, -1, 1, 5), [](auto) { return 0.0; });
  const MajorizeResult r = check_majorizes_pi(zero, 1e-9);
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness.has_value());
  CHECK((*r.witness)[0] * (*r.witness)[1] > 0);
  CHECK(r.worst == doctest::Approx(1));
  CHECK(r.checked == 25);

  std::vector<std::uint8_t> skip(25, 1);
  CHECK(check_majorizes_pi(zero, 1e-9, skip).holds);

  const ExactEvaluator pi_plus = [](std::span<const Rational> z) { return ExtRational(Rational(z[0] * z[1] + 1)); };
  CHECK(check_majorizes_pi(pi_plus, {{1, 2}, {-3, 4}}).holds);
  const ExactEvaluator below = [](std::span<const Rational> z) { return ExtRational(Rational(z[0] * z[1] - 1)); };
  const ExactMajorizeResult e = check_majorizes_pi(below, {{1, 2}});
  CHECK_FALSE(e.holds);
  CHECK(e.worst == ExtRational(1));
}

TEST_CASE("gate on the Fitzpatrick function of the sign map") {
  for (std::size_t m : {17u, 33u}) {
    const GateReport g = representability_gate(abs_plus_box(m), 0.0);
    CHECK(g.h_ge_pi.holds);
    CHECK(g.jh_ge_pi.holds);
    CHECK(g.holds());
    CHECK_FALSE(g.domain_condition_note.empty());
  }
  const GateReport d = representability_gate(abs_plus_box(17), 0.0, "P1 D(h) = R");
  CHECK(d.domain_condition_note.find("P1 D(h) = R") != std::string::npos);
}

TEST_CASE("gate rejects h = 0 with a witness") {
  const GridFn zero = sample(uniform_spec(2, -1, 1, 9), [](auto) { return 0.0; });
  const GateReport g = representability_gate(zero, 1e-9);
  CHECK_FALSE(g.holds());
  CHECK(g.h_ge_pi.witness.has_value());
  CHECK_THROWS_AS(extract_operator(zero, 1e-9, 1e-9), PreconditionError);
}

TEST_CASE("extraction recovers the sign map within one grid cell") {
  for (std::size_t m : {17u, 33u}) {
    const GridFn h = abs_plus_box(m);
    const ExtractionResult e = extract_operator(h, 0.0, 0.0);
    const double step = h.spec.axes[0].step();
    CHECK(e.monotone.monotone);
    CHECK(e.graph.pairs.size() == e.nodes.size());
    CHECK(e.graph.pairs.size() >= m);
    for (const auto& p : e.graph.pairs) {
      CHECK(on_curve(sign_curve(), p.x[0], p.xstar[0]));
      CHECK(distance_to_sign_graph(p.x[0].get_d(), p.xstar[0].get_d()) <= step);
    }
  }
}

TEST_CASE("Hausdorff distance in the max metric") {
  CHECK(hausdorff_inf({{0, 0}}, {{0, 0}}) == 0);
  CHECK(hausdorff_inf({{0, 0}}, {{1, -2}}) == 2);
  CHECK(hausdorff_inf({{0, 0}, {3, 0}}, {{0, 0}}) == 3);
  CHECK(hausdorff_inf({}, {}) == 0);
  CHECK(hausdorff_inf({{0}}, {}) == kPosInf);
}

TEST_CASE("grid domain projections") {
  const GridFn h = abs_plus_box(9);
  const GridProjection primal = project_domain(h, Block::primal);
  const GridProjection dual = project_domain(h, Block::dual);
  CHECK(primal.count() == 9);
  CHECK(primal.touches_boundary());
  CHECK(dual.count() == 5);
  CHECK_FALSE(dual.touches_boundary());
  CHECK(dual.max_norm() == doctest::Approx(1));
  CHECK(std::string(block_name(Block::dual)) != block_name(Block::primal));

  const MaxAffineFn f{2, {{{1, 0}, 0}}, Region{box(QVec{-1, 0}, QVec{1, 2})}};
  const Region p = project_domain(f, Block::dual);
  CHECK(std::get<HPolyhedron>(p).contains(QVec{2}));
  CHECK_FALSE(std::get<HPolyhedron>(p).contains(QVec{3}));
  const GeneratorFn g{2, {{{0, 5}, 0}, {{1, -1}, 0}}};
  const VPolytope v = project_domain(g, Block::dual);
  CHECK(v.contains(QVec{0}));
  CHECK_FALSE(v.contains(QVec{6}));
  CHECK(block_of(QVec{1, 2, 3, 4}, Block::dual) == QVec{3, 4});
}

TEST_CASE("bounded range gives Lipschitz slices") {
  const GridFn h = abs_plus_box(17);
  const BoundednessReport r = bounded_range_report(h, 1e-9);
  CHECK(r.applicable);
  CHECK(r.projection_bounded);
  CHECK(r.bound == doctest::Approx(1));
  CHECK(r.lipschitz_estimate <= 1 + 1e-9);
  CHECK(r.holds);

  // The primal projection is the whole window: no claim is made.
  const BoundednessReport d = bounded_domain_report(h, 1e-9);
  CHECK_FALSE(d.applicable);
  CHECK_FALSE(d.holds);
}

TEST_CASE("A-form slope bounds for finite operators") {
  const FiniteOperator t{{{{0}, {0}}, {{1}, {q("1/2")}}, {{3}, {-1}}}};
  const MaxAffineFn phi = phi_finite(t);
  CHECK(max_block_slope_norm2(phi, Block::primal) == 1);
  CHECK(max_block_slope_norm2(phi, Block::dual) == 9);
  const ExactBoundednessReport r = bounded_range_report(t);
  CHECK(r.bound_sq == 1);
  CHECK(r.max_slope_sq == 1);
  CHECK(r.holds);
  const ExactBoundednessReport d = bounded_domain_report(t);
  CHECK(d.bound_sq == 9);
  CHECK(d.holds);
}

TEST_CASE("bounded-range rotation instance on R^4") {
  const GridSpec spec = uniform_spec(4, -2, 2, 17);
  const GridFn h = build_cw_h(spec);
  CHECK(h.proper());
  PipelineOptions o;
  o.coverage_radius = 1.0;
  const PipelineReport p = main_pipeline(h, o);
  CHECK(p.gate.holds());
  CHECK(p.range_ok);
  CHECK(p.max_extracted_range_norm <= 1 + 1e-12);
  CHECK(p.fibers_ok);
  CHECK(p.fibers_missing == 0);
  CHECK(p.fibers_checked > 0);
  CHECK(p.monotone_ok);
  CHECK(p.holds());
  const double step = spec.axes[0].step();
  const double hd = rotation_graph_hausdorff(p.extraction, 1.0, step, 16);
  CHECK(hd <= 2 * step);
  // Inside the unit ball the extracted pairs sit near the rotation graph x* = Rx.
  std::size_t inside = 0;
  for (const auto& z : p.extraction.graph.pairs) {
    if (squared_norm(z.x) > 1) continue;
    ++inside;
    CHECK(std::abs(z.xstar[0].get_d() + z.x[1].get_d()) <= 2 * step + 1e-12);
    CHECK(std::abs(z.xstar[1].get_d() - z.x[0].get_d()) <= 2 * step + 1e-12);
  }
  CHECK(inside > 0);

  // A window too small to contain the unit ball of X* cannot observe the bound.
  CHECK_THROWS_AS(main_pipeline(build_cw_h(uniform_spec(4, -1, 1, 9)), o), PreconditionError);
}
