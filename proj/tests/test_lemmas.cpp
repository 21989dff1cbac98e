#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fitzkit/fitzpatrick.hpp"
#include "fitzkit/lemmas.hpp"
#include "support.hpp"

using namespace fitzkit;

namespace {

GridFn grid2(std::size_t m, double (*f)(double, double)) {
  return sample(uniform_spec(2, -2, 2, m), [f](std::span<const double> z) { return f(z[0], z[1]); });
}

const Rational kR(2);

}  // namespace

TEST_CASE("conjugate shift inequality") {
  // f = x² on [−2,2]: D(f) = [−2,2], δ*(w) = 2|w|.
  const GridFn f = sample(uniform_spec(1, -2, 2, 17), [](std::span<const double> z) { return z[0] * z[0]; });
  const double z[] = {0.5}, w[] = {-1.0}, l[] = {0.0, 0.5, 1.0, 3.0};
  const LemmaReport ok = check_conjugate_shift(f, z, w, l, 1e-9);
  CHECK(ok.holds);
  CHECK(ok.worst_margin <= 1e-9);
  CHECK(ok.lemma_id == "conjugate-shift");

  const LemmaReport bad = check_conjugate_shift(f, z, w, l, 1e-9, VPolytope{1, {{0}}});
  CHECK_FALSE(bad.holds);
  CHECK(bad.witness.has_value());
  CHECK(bad.worst_margin > 0);

  const double neg[] = {-1.0};
  CHECK_THROWS_AS(check_conjugate_shift(f, z, w, neg, 1e-9), InputError);

  const GeneratorFn g{1, {{{-1}, 1}, {{0}, 0}, {{2}, 3}}};
  std::vector<ShiftSample> samples;
  for (int a = -3; a <= 3; ++a)
    for (int b = -2; b <= 2; ++b) samples.push_back({{a}, {b}, q("3/2")});
  CHECK(check_conjugate_shift(g, samples).holds);
}

TEST_CASE("recession inclusion") {
  CHECK(check_recession_inclusion(GeneratorFn{2, {{{0, 0}, 0}, {{1, 1}, 1}}}).holds);
  for (const PwlCurve1d& t : {identity_curve(), sign_curve(), clamp_curve(), interval_normal_cone_curve(),
                              origin_normal_cone_curve()})
    CHECK(check_recession_inclusion(t).holds);

  const HPolyhedron sq = box(QVec{-1, -1}, QVec{1, 1});
  const HPolyhedron whole{2, {}};
  CHECK(check_recession_inclusion(sq, whole).holds);
  const HPolyhedron strip{2, {{{0, 1}, 1}, {{0, -1}, 1}}};
  const LemmaReport bad = check_recession_inclusion(sq, strip);
  CHECK_FALSE(bad.holds);
  CHECK(bad.witness.has_value());
}

TEST_CASE("projection inclusions re-verify their hypotheses") {
  const GridFn phi = phi_on_grid(sign_curve(), uniform_spec(2, -2, 2, 17));
  const auto both = check_projection_inclusions(phi, ProjectionPrecondition::both, 1e-9);
  CHECK(both.size() == 2);
  for (const auto& r : both) CHECK(r.holds);
  std::set<std::string> ids;
  for (const auto& r : both) ids.insert(r.lemma_id);
  CHECK(ids == std::set<std::string>{"jh-projections", "h-projections"});

  CHECK_THROWS_AS(check_projection_inclusions(phi, ProjectionPrecondition::undeclared, 1e-9), InputError);

  const GridFn zero = grid2(17, [](double, double) { return 0.0; });
  const auto z = check_projection_inclusions(zero, ProjectionPrecondition::h_convex_ge_pi, 1e-9);
  REQUIRE(z.size() == 1);
  CHECK_FALSE(z[0].holds);
  CHECK(z[0].witness.has_value());
}

TEST_CASE("domain invariance") {
  for (const PwlCurve1d& t : {identity_curve(), sign_curve(), clamp_curve(), interval_normal_cone_curve(),
                              origin_normal_cone_curve()})
    CHECK(check_domain_invariance(t, kR, 17).holds);
  CHECK(check_domain_invariance(rotation_operator()).holds);
  CHECK(check_domain_invariance(LinearOperator{{{1, 0}, {0, 0}}}).holds);
  CHECK(check_domain_invariance(FiniteOperator{{{{0}, {0}}, {{1}, {2}}, {{2}, {2}}}}).holds);

  const LemmaReport bad = check_domain_invariance(FiniteOperator{{{{0}, {1}}, {{1}, {0}}}});
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->find("(0, 1)") != std::string::npos);
}

TEST_CASE("range-domain duality of recession cones") {
  for (const PwlCurve1d& t : {identity_curve(), sign_curve(), clamp_curve(), interval_normal_cone_curve(),
                              origin_normal_cone_curve()})
    CHECK(check_range_domain_duality(t, kR).holds);
  CHECK(check_range_domain_duality(rotation_operator()).holds);
  CHECK(check_range_domain_duality(LinearOperator{{{1, 1}, {-1, 0}}}).holds);

  const PwlCurve1d short_piece{{Sloped{ExtRational(0), ExtRational(1), 1, 0}}};
  const LemmaReport bad = check_range_domain_duality(short_piece, kR);
  CHECK_FALSE(bad.holds);
  CHECK(bad.witness.has_value());
}

TEST_CASE("x·x* <= 0 on the domain of J delta_T") {
  for (const PwlCurve1d& t : {identity_curve(), sign_curve(), clamp_curve(), interval_normal_cone_curve(),
                              origin_normal_cone_curve()})
    CHECK(check_gg(t, kR, 17).holds);
  CHECK(check_gg(rotation_operator(), kR, 5).holds);
  CHECK(check_gg(LinearOperator{{{2, 1}, {1, 1}}}, kR, 5).holds);

  const PwlCurve1d decreasing{{Sloped{ExtRational::neg_inf(), ExtRational::pos_inf(), -1, 0}}};
  const LemmaReport bad = check_gg(decreasing, kR, 17);
  CHECK_FALSE(bad.holds);
  CHECK(bad.worst_margin > 0);
  CHECK(bad.witness.has_value());
}

TEST_CASE("Lipschitz profiles") {
  // |x| + δ_[−1,1](x*): P₂D(h) ⊆ B[1], so Jh is 1-Lipschitz in the primal block.
  const GridFn h = grid2(17, [](double x, double xs) { return std::abs(xs) <= 1 ? std::abs(x) : kPosInf; });
  const ConjugateResult jh = j_transform(h);
  const GridProjection range = project_domain(h, Block::dual);
  CHECK(lipschitz_profile(jh, Block::primal, 1.0, range, 1e-9).holds);
  const LemmaReport skipped = lipschitz_profile(jh, Block::primal, 0.5, range, 1e-9);
  CHECK(skipped.skipped);

  const GridFn quad = grid2(17, [](double x, double xs) { return 0.5 * x * x + 0.5 * xs * xs; });
  GridProjection claim{{quad.spec.axes[1]}, std::vector<std::uint8_t>(17, 0)};
  for (std::size_t i = 0; i < 17; ++i) claim.member[i] = std::abs(claim.axes[0].coord(i)) <= 1.0;
  const LemmaReport bad = lipschitz_profile(j_transform(quad), Block::primal, 1.0, claim, 1e-9);
  CHECK_FALSE(bad.holds);
  CHECK(bad.witness.has_value());

  const FiniteOperator t{{{{0}, {0}}, {{1}, {2}}}};
  CHECK(lipschitz_profile(phi_finite(t), Block::primal, Rational(4)).holds);
  const LemmaReport f = lipschitz_profile(phi_finite(t), Block::primal, Rational(1));
  CHECK_FALSE(f.holds);
  CHECK(f.worst_margin == doctest::Approx(3));
}

TEST_CASE("bounded range and bounded domain equivalences") {
  const GridFn sign_phi = phi_on_grid(sign_curve(), uniform_spec(2, -2, 2, 17));
  CHECK(check_bounded_range(sign_phi, 1e-9, true).holds);
  const GridFn cone_phi = phi_on_grid(interval_normal_cone_curve(), uniform_spec(2, -2, 2, 17));
  CHECK(check_bounded_domain(cone_phi, 1e-9, true).holds);

  // Observed boundedness must agree with the declared one.
  const LemmaReport mismatch = check_bounded_range(sign_phi, 1e-9, false);
  CHECK_FALSE(mismatch.holds);

  const GridFn sq_box = grid2(17, [](double x, double xs) { return std::abs(xs) <= 1 ? x * x : kPosInf; });
  CHECK_FALSE(check_bounded_range(sq_box, 1e-9).holds);
  const GridFn box_sq = grid2(17, [](double x, double xs) { return std::abs(x) <= 1 ? xs * xs : kPosInf; });
  CHECK_FALSE(check_bounded_domain(box_sq, 1e-9).holds);

  CHECK(check_bounded_range(FiniteOperator{{{{0, 0}, {1, 0}}, {{1, 1}, {1, 1}}}}).holds);
}

TEST_CASE("default catalog") {
  const auto c = default_catalog();
  CHECK(c.size() == 77);
  std::map<std::size_t, int> kinds;
  for (const auto& e : c) ++kinds[e.op.index()];
  CHECK(kinds[0] == 5);
  CHECK(kinds[1] == 22);
  CHECK(kinds[2] == 50);
  for (const auto& e : c) {
    if (const auto* t = std::get_if<LinearOperator>(&e.op)) CHECK(linear_is_monotone(*t));
    if (const auto* t = std::get_if<FiniteOperator>(&e.op)) {
      CHECK(is_monotone(*t).monotone);
      CHECK(oracle::monotone(to_pairs(*t)));
    }
    if (const auto* t = std::get_if<PwlCurve1d>(&e.op)) CHECK(is_maximal_1d(*t));
  }
  std::set<std::string> names;
  for (const auto& e : c) names.insert(e.name);
  CHECK(names.size() == c.size());
  CHECK(named_catalog().size() == 7);

  // Same seed, same catalog; another seed, another catalog.
  const auto again = default_catalog(kDefaultSeed);
  const auto other = default_catalog(kDefaultSeed + 1);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (const auto* t = std::get_if<FiniteOperator>(&c[i].op)) {
      same = same && std::get<FiniteOperator>(again[i].op).pairs == t->pairs;
      differs = differs || std::get<FiniteOperator>(other[i].op).pairs != t->pairs;
    }
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("the battery holds on the default catalog and is deterministic") {
  const auto catalog = default_catalog();
  const auto a = run_lemma_battery(catalog, kDefaultSeed);
  const auto b = run_lemma_battery(catalog, kDefaultSeed);
  REQUIRE(a.size() == b.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    INFO(a[i].operator_name, " ", a[i].report.lemma_id, " ", a[i].report.witness.value_or(""));
    CHECK(a[i].passed());
    CHECK(a[i].report.holds == b[i].report.holds);
    CHECK(a[i].report.worst_margin == b[i].report.worst_margin);
    CHECK(a[i].report.note == b[i].report.note);
    ids.insert(a[i].report.lemma_id);
  }
  for (const char* id : {"conjugate-shift", "recession-inclusion", "jh-projections", "h-projections", "domain-invariance", "range-domain-duality", "jdelta-nonpositive", "lipschitz-slopes", "bounded-range", "bounded-domain"})
    CHECK(ids.count(id) == 1);
}

TEST_CASE("every checker fails its negative control with a witness") {
  const auto controls = negative_controls();
  std::set<std::string> ids;
  for (const auto& e : controls) {
    INFO(e.operator_name);
    CHECK_FALSE(e.expected);
    CHECK_FALSE(e.report.holds);
    CHECK(e.passed());
    CHECK(e.report.witness.has_value());
    ids.insert(e.report.lemma_id);
  }
  for (const char* id : {"conjugate-shift", "recession-inclusion", "jh-projections", "h-projections", "domain-invariance", "range-domain-duality", "jdelta-nonpositive", "lipschitz-slopes", "bounded-range", "bounded-domain"})
    CHECK(ids.count(id) == 1);
}

TEST_CASE("gate and pipeline suites") {
  for (const auto& e : run_gate_suite()) {
    INFO(e.operator_name);
    CHECK(e.passed());
    if (!e.expected) CHECK(e.report.witness.has_value());
  }
  for (const auto& e : run_pipeline_suite()) {
    INFO(e.operator_name, " ", e.report.note);
    CHECK(e.passed());
  }
}
