#include <random>

#include "fitzkit/errors.hpp"
#include "fitzkit/fitzpatrick.hpp"
#include "fitzkit/gates.hpp"
#include "fitzkit/lemmas.hpp"

namespace fitzkit {

namespace {

constexpr double kTol = 1e-9;
const Rational kWindow(2);

Rational quarter(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return fraction(d(rng), 4);
}

LinearOperator random_linear(std::mt19937_64& rng) {
  // M = AAᵀ + I + skew: symmetric part positive definite.
  std::uniform_int_distribution<int> d(-2, 2);
  Rational a[2][2];
  for (auto& row : a)
    for (auto& v : row) v = d(rng);
  const Rational k = d(rng);
  LinearOperator t{{QVec(2), QVec(2)}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t.m[i][j] = a[i][0] * a[j][0] + a[i][1] * a[j][1] + (i == j ? 1 : 0);
  t.m[0][1] += k;
  t.m[1][0] -= k;
  return t;
}

FiniteOperator random_finite_1d(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(3, 6);
  const int k = count(rng);
  std::vector<Rational> ys, ss;
  while (static_cast<int>(ys.size()) < k) {
    const Rational y = quarter(rng, -8, 8);
    if (std::find(ys.begin(), ys.end(), y) == ys.end()) ys.push_back(y);
  }
  for (int i = 0; i < k; ++i) ss.push_back(quarter(rng, -8, 8));
  std::sort(ys.begin(), ys.end());
  std::sort(ss.begin(), ss.end());
  FiniteOperator t;
  for (int i = 0; i < k; ++i) t.pairs.push_back(PrimalDualPoint{{ys[i]}, {ss[i]}});
  return t;
}

FiniteOperator random_finite_2d(std::mt19937_64& rng) {
  // Points of a monotone map AAᵀ + skew.
  std::uniform_int_distribution<int> d(-1, 1), count(3, 6), node(-4, 4);
  Rational a[2][2];
  for (auto& row : a)
    for (auto& v : row) v = d(rng);
  const Rational k = d(rng);
  Rational m[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = a[i][0] * a[j][0] + a[i][1] * a[j][1];
  m[0][1] += k;
  m[1][0] -= k;
  const int n = count(rng);
  FiniteOperator t;
  while (static_cast<int>(t.pairs.size()) < n) {
    const QVec x{fraction(node(rng), 2), fraction(node(rng), 2)};
    const bool seen = std::any_of(t.pairs.begin(), t.pairs.end(), [&](const PrimalDualPoint& p) { return p.x == x; });
    if (seen) continue;
    t.pairs.push_back(PrimalDualPoint{x, {Rational(m[0][0] * x[0] + m[0][1] * x[1]),
                                          Rational(m[1][0] * x[0] + m[1][1] * x[1])}});
  }
  return t;
}

std::vector<ShiftSample> shift_samples(std::mt19937_64& rng, std::size_t dim, std::size_t count) {
  std::vector<ShiftSample> out;
  for (std::size_t s = 0; s < count; ++s) {
    ShiftSample x{QVec(dim), QVec(dim), quarter(rng, 0, 8)};
    for (std::size_t i = 0; i < dim; ++i) {
      x.zstar[i] = quarter(rng, -8, 8);
      x.wstar[i] = quarter(rng, -8, 8);
    }
    out.push_back(std::move(x));
  }
  return out;
}

RVec random_dual(std::mt19937_64& rng, std::size_t dim) {
  RVec v(dim);
  for (auto& c : v) c = quarter(rng, -8, 8).get_d();
  return v;
}

LemmaReport skipped(const std::string& id, const std::string& digest, const std::string& why) {
  LemmaReport r;
  r.lemma_id = id;
  r.inputs_digest = digest;
  r.skipped = true;
  r.note = why;
  return r;
}

Box window_box(std::size_t n) {
  return Box{QVec(2 * n, Rational(-kWindow)), QVec(2 * n, kWindow)};
}

// Checkers shared by every kind: conjugate-shift and recession-inclusion on σ_T of graph samples.
void generator_checks(std::vector<BatteryEntry>& out, const std::string& name, const FiniteOperator& samples,
                      std::mt19937_64& rng) {
  const GeneratorFn sigma = sigma_finite(samples);
  out.push_back({name, check_conjugate_shift(sigma, shift_samples(rng, sigma.dim, 20))});
  out.push_back({name, check_recession_inclusion(sigma)});
}

// Checkers that read φ_T on a window grid.
void grid_checks(std::vector<BatteryEntry>& out, const std::string& name, const GridFn& phi, bool range_bounded,
                 bool domain_bounded, double range_bound, double domain_bound, std::mt19937_64& rng) {
  const std::size_t d = phi.spec.dim();
  const RVec z = random_dual(rng, d), w = random_dual(rng, d);
  const double lambdas[] = {0.0, 0.25, 1.0, 2.0};
  out.push_back({name, check_conjugate_shift(phi, z, w, lambdas, kTol)});
  for (auto& r : check_projection_inclusions(phi, ProjectionPrecondition::both, kTol)) out.push_back({name, r});
  out.push_back({name, check_bounded_range(phi, kTol, range_bounded)});
  out.push_back({name, check_bounded_domain(phi, kTol, domain_bounded)});
  const ConjugateResult jh = j_transform(phi);
  if (range_bounded) {
    out.push_back({name, lipschitz_profile(jh, Block::primal, range_bound, project_domain(phi, Block::dual), kTol)});
  } else if (domain_bounded) {
    out.push_back({name, lipschitz_profile(jh, Block::dual, domain_bound, project_domain(phi, Block::primal), kTol)});
  } else {
    out.push_back({name, skipped("lipschitz-slopes", name, "T has unbounded range and domain")});
  }
}

double interval_bound(const std::pair<ExtRational, ExtRational>& iv) {
  return std::max(std::abs(to_double(iv.first)), std::abs(to_double(iv.second)));
}

}  // namespace

std::vector<CatalogEntry> named_catalog() {
  return {
      {"identity", identity_curve()},
      {"subdifferential-abs", sign_curve()},
      {"normal-cone-interval", interval_normal_cone_curve()},
      {"normal-cone-origin", origin_normal_cone_curve()},
      {"clamp", clamp_curve()},
      {"rotation", rotation_operator()},
      {"identity-2d", LinearOperator{{QVec{Rational(1), Rational(0)}, QVec{Rational(0), Rational(1)}}}},
  };
}

std::vector<CatalogEntry> default_catalog(std::uint64_t seed) {
  std::vector<CatalogEntry> out = named_catalog();
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 20; ++i) out.push_back({"random-linear-" + std::to_string(i), random_linear(rng)});
  for (int i = 0; i < 25; ++i) out.push_back({"random-finite-1d-" + std::to_string(i), random_finite_1d(rng)});
  for (int i = 0; i < 25; ++i) out.push_back({"random-finite-2d-" + std::to_string(i), random_finite_2d(rng)});
  return out;
}

std::vector<BatteryEntry> run_lemma_battery(const std::vector<CatalogEntry>& catalog, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<BatteryEntry> out;
  for (const auto& entry : catalog) {
    const std::string& name = entry.name;
    if (const auto* t = std::get_if<PwlCurve1d>(&entry.op)) {
      generator_checks(out, name, sample_graph(*t, window_box(1), 9, 9), rng);
      out.push_back({name, check_recession_inclusion(*t)});
      out.push_back({name, check_domain_invariance(*t, kWindow, 17)});
      out.push_back({name, check_range_domain_duality(*t, kWindow)});
      out.push_back({name, check_gg(*t, kWindow, 17)});
      const auto dom = domain_interval(*t), ran = range_interval(*t);
      const bool dom_b = dom.first.is_finite() && dom.second.is_finite();
      const bool ran_b = ran.first.is_finite() && ran.second.is_finite();
      const GridFn phi = phi_on_grid(*t, uniform_spec(2, -2.0, 2.0, 17));
      grid_checks(out, name, phi, ran_b, dom_b, ran_b ? interval_bound(ran) : 0.0, dom_b ? interval_bound(dom) : 0.0,
                  rng);
    } else if (const auto* lin = std::get_if<LinearOperator>(&entry.op)) {
      generator_checks(out, name, sample_graph(*lin, window_box(lin->n()), 5), rng);
      out.push_back({name, check_domain_invariance(*lin)});
      out.push_back({name, check_range_domain_duality(*lin)});
      out.push_back({name, check_gg(*lin, kWindow, 5)});
      const bool zero = std::all_of(lin->m.begin(), lin->m.end(), [](const QVec& row) {
        return std::all_of(row.begin(), row.end(), [](const Rational& v) { return sgn(v) == 0; });
      });
      const GridFn phi = phi_on_grid(*lin, uniform_spec(2 * lin->n(), -2.0, 2.0, 9));
      grid_checks(out, name, phi, zero, false, 0.0, 0.0, rng);
    } else {
      const auto& t = std::get<FiniteOperator>(entry.op);
      t.validate();
      const std::string digest = "finite n=" + std::to_string(t.n());
      const MonotoneReport mono = is_monotone(t);
      if (mono.monotone) {
        generator_checks(out, name, t, rng);
        Rational bound_sq = 0;
        for (const auto& p : t.pairs) bound_sq = std::max(bound_sq, Rational(dot(p.xstar, p.xstar)));
        out.push_back({name, lipschitz_profile(phi_finite(t), Block::primal, bound_sq)});
        out.push_back({name, check_bounded_range(t)});
      }
      out.push_back({name, check_domain_invariance(t)});
      out.push_back({name, skipped("range-domain-duality", digest, "finite T is not maximal")});
      out.push_back({name, skipped("jdelta-nonpositive", digest, "finite T is not maximal")});
    }
  }
  return out;
}

std::vector<BatteryEntry> negative_controls() {
  std::vector<BatteryEntry> out;
  auto push = [&](const char* name, LemmaReport r) { out.push_back({name, std::move(r), false}); };

  {  // f = |x| with a declared domain {0} that is smaller than the true one.
    const GridFn f = sample(uniform_spec(1, -2.0, 2.0, 17), [](std::span<const double> z) { return std::abs(z[0]); });
    const double z[] = {0.0}, w[] = {1.0}, l[] = {2.0};
    push("abs-with-declared-domain-origin", check_conjugate_shift(f, z, w, l, kTol, VPolytope{1, {{Rational(0)}}}));
  }
  {  // D(h) = [−1,1]² paired with D(Jh) = R×[−1,1].
    const QVec lo{Rational(-1), Rational(-1)}, hi{Rational(1), Rational(1)};
    HPolyhedron jh{2, {{{Rational(0), Rational(1)}, Rational(1)}, {{Rational(0), Rational(-1)}, Rational(1)}}};
    push("box-domain-vs-strip", check_recession_inclusion(box(lo, hi), jh));
  }
  {  // h = δ_{(0,1)}: Jh(x,x*) = x, below π at (1,2).
    const GridFn h = sample(uniform_spec(2, -2.0, 2.0, 17), [](std::span<const double> z) {
      return z[0] == 0.0 && z[1] == 1.0 ? 0.0 : kPosInf;
    });
    push("indicator-of-point", check_projection_inclusions(h, ProjectionPrecondition::jh_ge_pi, kTol).front());
  }
  {  // h = 0 is convex but not ≥ π.
    const GridFn h = sample(uniform_spec(2, -2.0, 2.0, 17), [](std::span<const double>) { return 0.0; });
    push("zero-function", check_projection_inclusions(h, ProjectionPrecondition::h_convex_ge_pi, kTol).front());
  }
  {
    FiniteOperator t{{PrimalDualPoint{{Rational(0)}, {Rational(1)}}, PrimalDualPoint{{Rational(1)}, {Rational(0)}}}};
    push("non-monotone-pair", check_domain_invariance(t));
  }
  {
    PwlCurve1d t{{Sloped{ExtRational(Rational(0)), ExtRational(Rational(1)), 1, 0}}};
    push("identity-on-unit-interval", check_range_domain_duality(t, kWindow));
  }
  {
    PwlCurve1d t{{Sloped{ExtRational::neg_inf(), ExtRational::pos_inf(), -1, 0}}};
    push("decreasing-line", check_gg(t, kWindow, 17));
  }
  {  // ½x² + ½x*² with a claimed dual projection [−1,1].
    const GridFn h = sample(uniform_spec(2, -2.0, 2.0, 17),
                            [](std::span<const double> z) { return 0.5 * z[0] * z[0] + 0.5 * z[1] * z[1]; });
    GridProjection claim{{h.spec.axes[1]}, std::vector<std::uint8_t>(17, 0)};
    for (std::size_t i = 0; i < 17; ++i) claim.member[i] = std::abs(claim.axes[0].coord(i)) <= 1.0;
    push("quadratic-with-false-range-claim", lipschitz_profile(j_transform(h), Block::primal, 1.0, claim, kTol));
  }
  {
    FiniteOperator t{{PrimalDualPoint{{Rational(0)}, {Rational(0)}}, PrimalDualPoint{{Rational(1)}, {Rational(2)}}}};
    push("finite-with-false-bound", lipschitz_profile(phi_finite(t), Block::primal, Rational(1)));
  }
  {  // x² + δ_[−1,1](x*): P₂ bounded by 1 but slices have slope up to 4.
    const GridFn h = sample(uniform_spec(2, -2.0, 2.0, 17), [](std::span<const double> z) {
      return std::abs(z[1]) <= 1.0 ? z[0] * z[0] : kPosInf;
    });
    push("square-plus-dual-box", check_bounded_range(h, kTol));
  }
  {
    const GridFn h = sample(uniform_spec(2, -2.0, 2.0, 17), [](std::span<const double> z) {
      return std::abs(z[0]) <= 1.0 ? z[1] * z[1] : kPosInf;
    });
    push("primal-box-plus-square", check_bounded_domain(h, kTol));
  }
  return out;
}

std::vector<BatteryEntry> run_gate_suite() {
  std::vector<BatteryEntry> out;
  const GridSpec spec = uniform_spec(2, -2.0, 2.0, 33);
  auto gate_report = [&](const std::string& name, const GridFn& h, double tol, bool expected) {
    const GateReport g = representability_gate(h, tol);
    LemmaReport r;
    r.lemma_id = "gate";
    r.inputs_digest = name;
    r.holds = g.holds();
    r.worst_margin = std::max(g.h_ge_pi.worst, g.jh_ge_pi.worst);
    if (!g.h_ge_pi.holds) {
      r.witness = "h < pi at " + format_point(*g.h_ge_pi.witness);
    } else if (!g.jh_ge_pi.holds) {
      r.witness = "Jh < pi at " + format_point(*g.jh_ge_pi.witness);
    }
    r.note = g.domain_condition_note + "; masked " + std::to_string(g.jh.masked_count()) + " nodes";
    out.push_back({name, std::move(r), expected});
  };
  for (const auto& e : named_catalog()) {
    if (const auto* t = std::get_if<PwlCurve1d>(&e.op)) gate_report(e.name, phi_on_grid(*t, spec), kTol, true);
  }
  gate_report("abs-plus-dual-box", sample(spec, [](std::span<const double> z) {
                return std::abs(z[1]) <= 1.0 ? std::abs(z[0]) : kPosInf;
              }), 0.0, true);
  gate_report("zero-function", sample(spec, [](std::span<const double>) { return 0.0; }), kTol, false);
  return out;
}

std::vector<BatteryEntry> run_pipeline_suite() {
  std::vector<BatteryEntry> out;
  {
    const GridSpec spec = uniform_spec(2, -2.0, 2.0, 33);
    const GridFn h = sample(spec, [](std::span<const double> z) {
      return std::abs(z[1]) <= 1.0 ? std::abs(z[0]) : kPosInf;
    });
    const ExtractionResult e = extract_operator(h, 0.0, 0.0);
    LemmaReport r;
    r.lemma_id = "extract";
    r.inputs_digest = "abs-plus-dual-box m=33";
    const PwlCurve1d t = sign_curve();
    for (const auto& p : e.graph.pairs) {
      if (!on_curve(t, p.x[0], p.xstar[0])) {
        r.holds = false;
        r.witness = "off-graph node " + format_point(p.joined());
        break;
      }
    }
    if (!e.monotone.monotone) {
      r.holds = false;
      r.witness = "extracted set not monotone";
    }
    if (e.graph.pairs.empty()) {
      r.holds = false;
      r.witness = "nothing extracted";
    }
    r.note = std::to_string(e.graph.pairs.size()) + " nodes, all on the graph of the sign map";
    out.push_back({"subdifferential-abs", std::move(r)});
  }
  {
    const GridSpec spec = uniform_spec(4, -2.0, 2.0, 17);
    PipelineOptions o;
    o.coverage_radius = 1.0;
    const PipelineReport p = main_pipeline(build_cw_h(spec), o);
    const double step = spec.axes[0].step();
    const double hd = rotation_graph_hausdorff(p.extraction, 1.0, step, 16);
    LemmaReport r;
    r.lemma_id = "pipeline";
    r.inputs_digest = "rotation instance m=17 window=2";
    r.holds = p.holds() && hd <= 2.0 * step;
    r.worst_margin = hd - 2.0 * step;
    if (!p.gate.holds()) {
      r.witness = "gate fails";
    } else if (!p.range_ok) {
      r.witness = "extracted range norm " + format_double(p.max_extracted_range_norm);
    } else if (!p.fibers_ok && p.missing_fiber) {
      r.witness = "empty fiber at " + format_point(*p.missing_fiber);
    } else if (!p.monotone_ok) {
      r.witness = "extracted set not monotone";
    } else if (hd > 2.0 * step) {
      r.witness = "Hausdorff " + format_double(hd);
    }
    r.note = std::to_string(p.extraction.graph.pairs.size()) + " nodes, fibers " +
             std::to_string(p.fibers_checked - p.fibers_missing) + "/" + std::to_string(p.fibers_checked) +
             ", Hausdorff " + format_double(hd);
    out.push_back({"rotation-instance", std::move(r)});
  }
  return out;
}

}  // namespace fitzkit
