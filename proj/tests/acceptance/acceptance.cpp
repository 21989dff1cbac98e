// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fitzkit/conjugate.hpp"
#include "fitzkit/fitzpatrick.hpp"
#include "fitzkit/gates.hpp"
#include "fitzkit/lemmas.hpp"
#include "oracles.hpp"

using namespace fitzkit;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Line {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Identity samples on [−5, 5]: φ against (x+x*)²/4 where |x+x*|/2 ≤ 4,
// σ on the diagonal.
Line identity_formulas() {
  const auto start = Clock::now();
  FiniteOperator t;
  for (int k = -50; k <= 50; ++k) t.pairs.push_back({{fraction(k, 10)}, {fraction(k, 10)}});
  const MaxAffineFn phi = phi_finite(t);
  const GeneratorFn sigma = sigma_finite(t);
  const Rational delta = fraction(1, 10), bound = delta * delta / 4;
  Rational worst = 0;
  std::size_t probes = 0;
  for (int i = -100; i <= 100; i += 3)
    for (int j = -100; j <= 100; j += 3) {
      const Rational x = fraction(i, 20), xs = fraction(j, 20);
      const Rational s = x + xs;
      if (abs(s) > 8) continue;
      const Rational err = abs(phi.eval(QVec{x, xs}).value() - s * s / 4);
      worst = std::max(worst, err);
      ++probes;
    }
  bool sigma_exact = true;
  for (const auto& p : t.pairs) sigma_exact = sigma_exact && sigma.eval(p.joined()) == ExtRational(p.x[0] * p.x[0]);
  // Grid path: φ sampled on a grid over the same region.
  const GridFn g = phi_on_grid(t, uniform_spec(2, -4, 4, 81));
  double grid_worst = 0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const RVec z = g.spec.point(i);
    grid_worst = std::max(grid_worst, std::abs(g.values[i] - (z[0] + z[1]) * (z[0] + z[1]) / 4));
  }
  const double secs = seconds_since(start);
  const bool pass = worst <= bound && grid_worst <= bound.get_d() + 1e-12 && sigma_exact && secs < 1.0;
  return {pass, "max |phi - (x+x*)^2/4| = " + to_string(worst) + " (bound " + to_string(bound) + ", " +
                    std::to_string(probes) + " exact probes), grid " + fmt("%.3g", grid_worst) + ", sigma " +
                    (sigma_exact ? "exact" : "NOT exact") + ", " + fmt("%.3f s", secs)};
}

GridFn random_convex(const GridSpec& spec, std::mt19937_64& rng) {
  const auto f = oracle::ConvexSampler::random(spec.dim(), rng);
  return sample(spec, [&](std::span<const double> z) { return f(RVec(z.begin(), z.end())); });
}

struct Slope {
  double b, se;
};

// Least-squares slope of log2 t[i] against i, with its standard error.
Slope log2_slope(const std::vector<double>& t) {
  const double n = static_cast<double>(t.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sx += static_cast<double>(i);
    sy += std::log2(t[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxx += (static_cast<double>(i) - mx) * (static_cast<double>(i) - mx);
    sxy += (static_cast<double>(i) - mx) * (std::log2(t[i]) - my);
  }
  const double b = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = std::log2(t[i]) - my - b * (static_cast<double>(i) - mx);
    ssr += r * r;
  }
  return {b, std::sqrt(ssr / (n - 2) / sxx)};
}

// Shortest per-call time over several batches.
double time_per_call(const std::function<void()>& f, double min_batch_seconds) {
  double best = 1e300;
  for (int trial = 0; trial < 5; ++trial) {
    int reps = 0;
    const auto start = Clock::now();
    do {
      f();
      ++reps;
    } while (seconds_since(start) < min_batch_seconds);
    best = std::min(best, seconds_since(start) / reps);
  }
  return best;
}

Line oracle_equivalence() {
  std::mt19937_64 rng(20240611);
  double worst = 0;
  std::size_t functions = 0, mask_mismatch = 0;
  auto compare = [&](const GridFn& f, const GridSpec& dual) {
    const ConjugateResult a = conjugate_grid(f, dual), b = conjugate_bruteforce(f, dual);
    for (std::size_t i = 0; i < a.function.values.size(); ++i)
      worst = std::max(worst, std::abs(a.function.values[i] - b.function.values[i]));
    if (a.saturation_mask != b.saturation_mask) ++mask_mismatch;
    ++functions;
  };
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = static_cast<std::size_t>(std::lround(64 * std::pow(10000.0 / 64, k / 99.0)));
    const GridFn f = random_convex(uniform_spec(1, -2, 2, n), rng);
    compare(f, uniform_spec(1, -4, 4, n));
  }
  for (int k = 0; k < 100; ++k) compare(random_convex(uniform_spec(2, -2, 2, 24), rng), uniform_spec(2, -3, 3, 24));
  for (int k = 0; k < 100; ++k) compare(random_convex(uniform_spec(4, -2, 2, 6), rng), uniform_spec(4, -3, 3, 6));

  // Scaling on N = 2^8 .. 2^14 (1-D, dual grid of the same size). Wall time
  // of a linear algorithm doubles exactly in expectation, so the growth
  // factor is the least-squares slope of log2 t against log2 N with a
  // one-sided 95% bound: fail when the slope is significantly above 1, or
  // when the bound is too wide to tell N from N log N.
  std::vector<double> llt, brute;
  std::string growth;
  bool brute_ok = true;
  for (int e = 8; e <= 14; ++e) {
    const std::size_t n = std::size_t{1} << e;
    const GridFn f = random_convex(uniform_spec(1, -2, 2, n), rng);
    const GridSpec dual = uniform_spec(1, -4, 4, n);
    llt.push_back(time_per_call([&] { conjugate_grid(f, dual); }, 0.02));
    brute.push_back(time_per_call([&] { conjugate_bruteforce(f, dual); }, 0.02));
    if (llt.size() > 1) {
      const double rl = llt.back() / llt[llt.size() - 2], rb = brute.back() / brute[brute.size() - 2];
      brute_ok = brute_ok && rb >= 3.0 && rb <= 5.0;
      growth += (growth.empty() ? "" : " ") + fmt("%.2f", rl) + "/" + fmt("%.2f", rb);
    }
  }
  const Slope sl = log2_slope(llt), sb = log2_slope(brute);
  const double t95 = 2.015;  // Student t, 5 degrees of freedom
  const double half = t95 * sl.se;
  const bool llt_ok = sl.b <= 1 + half && half <= 0.1;
  brute_ok = brute_ok && std::exp2(sb.b) >= 3.0 && std::exp2(sb.b) <= 5.0;
  const bool pass = worst <= 1e-9 && mask_mismatch == 0 && llt_ok && brute_ok;
  return {pass, std::to_string(functions) + " functions (d=1,2,4), max |llt - brute| = " + fmt("%.3g", worst) +
                    ", mask mismatches " + std::to_string(mask_mismatch) + "; fitted growth per doubling llt " +
                    fmt("%.3f", std::exp2(sl.b)) + " (95% upper bound on 2x: " + fmt("%.3f", std::exp2(1 + half)) +
                    "), brute " + fmt("%.3f", std::exp2(sb.b)) + "; pairwise llt/brute: " + growth + "; llt 2^14 " +
                    fmt("%.2e s", llt.back()) + ", brute 2^14 " + fmt("%.2e s", brute.back())};
}

Line exact_duality() {
  std::mt19937_64 rng(7);
  std::size_t mismatches = 0, probes = 0, infinite = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = 1 + k % 2;
    GeneratorFn f{d, {}};
    for (int g = 0; g < 6; ++g) {
      QVec p;
      for (std::size_t i = 0; i < d; ++i) p.push_back(oracle::random_quarter(rng, -2, 2));
      f.generators.push_back({p, oracle::random_quarter(rng, -2, 2)});
    }
    const GeneratorFn back = conjugate_exact(conjugate_exact(f));
    for (int s = 0; s < 1000; ++s) {
      QVec z;
      for (std::size_t i = 0; i < d; ++i) z.push_back(oracle::random_quarter(rng, -3, 3));
      const ExtRational a = f.eval(z), b = back.eval(z);
      if (a != b) ++mismatches;
      if (a.is_pos_inf()) ++infinite;
      ++probes;
    }
  }
  std::size_t envelope_fail = 0;
  for (int k = 0; k < 50; ++k) {
    FiniteOperator t;
    if (k % 2 == 0) {
      for (const auto& p : oracle::random_chain(rng, 6)) t.pairs.push_back({p.y, p.ystar});
    } else {
      // Graph of a monotone linear map sampled at random points of R².
      const Rational a = oracle::random_quarter(rng, 0, 2), b = oracle::random_quarter(rng, -1, 1),
                     c = oracle::random_quarter(rng, 0, 2);
      while (t.pairs.size() < 5) {
        const QVec x{oracle::random_quarter(rng, -2, 2), oracle::random_quarter(rng, -2, 2)};
        const PrimalDualPoint p{x, {Rational(a * x[0] + b * x[1]), Rational(-b * x[0] + c * x[1])}};
        if (std::find(t.pairs.begin(), t.pairs.end(), p) == t.pairs.end()) t.pairs.push_back(p);
      }
    }
    if (!is_monotone(t).monotone) {
      ++envelope_fail;
      continue;
    }
    std::vector<QVec> pts;
    const std::size_t n2 = 2 * t.n();
    for (int s = 0; s < 100; ++s) {
      QVec z;
      for (std::size_t i = 0; i < n2; ++i) z.push_back(oracle::random_quarter(rng, -3, 3));
      pts.push_back(z);
    }
    const EnvelopeReport r = minimality_maximality_envelope(t, pts);
    if (!r.phi_eq_j_sigma || !r.piece_lists_equal || !r.phi_le_sigma) ++envelope_fail;
  }
  return {mismatches == 0 && envelope_fail == 0,
          "V->A->V: " + std::to_string(mismatches) + " mismatches over " + std::to_string(probes) + " probes (" +
              std::to_string(infinite) + " outside the domain); phi = J sigma: " + std::to_string(envelope_fail) +
              " failures over 50 monotone sets"};
}

// Max-metric distance from (x, x*) to the graph of ∂|·|.
double distance_to_sign_graph(double x, double xs) {
  double d = std::max(std::abs(x), std::max(0.0, std::abs(xs) - 1));
  d = std::min(d, std::max(x < 0 ? -x : 0.0, std::abs(xs - 1)));
  d = std::min(d, std::max(x > 0 ? x : 0.0, std::abs(xs + 1)));
  return d;
}

Line sign_extraction() {
  bool pass = true;
  std::string detail;
  for (std::size_t m : {33u, 65u, 129u}) {
    const GridSpec spec = uniform_spec(2, -2, 2, m);
    const GridFn h = sample(spec, [](std::span<const double> z) { return std::abs(z[1]) <= 1 ? std::abs(z[0]) : kPosInf; });
    const double step = spec.axes[0].step();
    const GateReport g = representability_gate(h, 0.0);
    bool ok = g.holds();
    double forward = 0, backward = 0;
    bool monotone = false;
    std::size_t count = 0;
    if (ok) {
      const ExtractionResult e = extract_operator(h, 0.0, 0.0);
      monotone = e.monotone.monotone;
      count = e.graph.pairs.size();
      std::vector<RVec> pts;
      for (const auto& p : e.graph.pairs) {
        pts.push_back({p.x[0].get_d(), p.xstar[0].get_d()});
        forward = std::max(forward, distance_to_sign_graph(pts.back()[0], pts.back()[1]));
      }
      // Graph of ∂|·| inside the window, sampled at step/8.
      std::vector<RVec> graph;
      for (double u = -2; u <= 2 + 1e-12; u += step / 8) {
        graph.push_back({u, u < 0 ? -1.0 : 1.0});
        if (u < 0) graph.push_back({u, -1.0});
        if (std::abs(u) <= 1) graph.push_back({0.0, u});
      }
      graph.push_back({0.0, -1.0});
      for (const auto& q : graph) {
        double best = kPosInf;
        for (const auto& p : pts) best = std::min(best, std::max(std::abs(p[0] - q[0]), std::abs(p[1] - q[1])));
        backward = std::max(backward, best);
      }
      ok = monotone && count > 0 && forward <= step && backward <= step;
    }
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("m=") + std::to_string(m) + (g.holds() ? " gate ok" : " gate FAIL") +
              ", " + std::to_string(count) + " nodes, Hausdorff " + fmt("%.4g", std::max(forward, backward)) + " (cell " +
              fmt("%.4g", step) + ")" + (monotone ? ", monotone" : ", NOT monotone");
  }
  return {pass, detail};
}

Line rotation_instance() {
  const auto start = Clock::now();
  std::vector<double> hd;
  bool pass = true;
  std::string detail;
  for (std::size_t m : {17u, 33u}) {
    const GridSpec spec = uniform_spec(4, -2, 2, m);
    PipelineOptions o;
    o.gate_tol = 1e-6;
    o.coverage_radius = 1.0;
    const auto t0 = Clock::now();
    const PipelineReport p = main_pipeline(build_cw_h(spec), o);
    const double step = spec.axes[0].step();
    hd.push_back(rotation_graph_hausdorff(p.extraction, 1.0, step, 16));
    const double secs = seconds_since(t0);
    const bool ok = p.holds() && hd.back() <= 2 * step && (m != 17 || secs < 120);
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("m=") + std::to_string(m) + ": gate " +
              (p.gate.holds() ? "ok" : "FAIL") + ", range norm " + fmt("%.4g", p.max_extracted_range_norm) + ", fibers " +
              std::to_string(p.fibers_checked - p.fibers_missing) + "/" + std::to_string(p.fibers_checked) +
              (p.monotone_ok ? ", monotone" : ", NOT monotone") + ", Hausdorff " + fmt("%.4g", hd.back()) + " (2 cells " +
              fmt("%.4g", 2 * step) + "), " + fmt("%.2f s", secs);
  }
  const bool decreasing = hd[1] < hd[0];
  detail += decreasing ? "; Hausdorff decreases" : "; Hausdorff does NOT decrease";
  detail += "; type (D) item not checkable in finite dimension";
  (void)start;
  return {pass && decreasing, detail};
}

Line lemma_battery() {
  const auto entries = run_lemma_battery(default_catalog(kDefaultSeed), kDefaultSeed);
  std::size_t failures = 0, skipped = 0;
  for (const auto& e : entries) {
    if (!e.passed()) ++failures;
    if (e.report.skipped) ++skipped;
  }
  std::size_t control_failures = 0, control_witnessless = 0;
  const auto controls = negative_controls();
  for (const auto& e : controls) {
    if (!e.passed()) ++control_failures;
    if (!e.report.witness) ++control_witnessless;
  }
  std::size_t suite_failures = 0;
  for (const auto& e : run_gate_suite()) suite_failures += e.passed() ? 0 : 1;
  for (const auto& e : run_pipeline_suite()) suite_failures += e.passed() ? 0 : 1;
  const bool pass = failures == 0 && control_failures == 0 && control_witnessless == 0 && suite_failures == 0;
  return {pass, std::to_string(entries.size()) + " catalog reports (" + std::to_string(skipped) + " skipped), " +
                    std::to_string(failures) + " violations; " + std::to_string(controls.size()) +
                    " negative controls, " + std::to_string(control_failures) + " not failing, " +
                    std::to_string(control_witnessless) + " without witness; gate/pipeline suites " +
                    std::to_string(suite_failures) + " mismatches"};
}

Line lipschitz_exactness() {
  std::mt19937_64 rng(99);
  std::size_t violations = 0, tight = 0;
  for (int k = 0; k < 50; ++k) {
    // Separable clamp y*_i = clamp(a_i y_i, −c_i, c_i) is the gradient of a
    // convex function, so T is monotone, and R(T) ⊆ B[L] with L² = Σ c_i².
    const std::size_t n = 1 + k % 2;
    QVec a, c;
    Rational l2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(oracle::random_quarter(rng, 0, 3));
      c.push_back(oracle::random_quarter(rng, 0, 2) + fraction(1, 4));
      l2 += c.back() * c.back();
    }
    FiniteOperator t;
    while (t.pairs.size() < 8) {
      QVec y, ys;
      for (std::size_t i = 0; i < n; ++i) {
        y.push_back(oracle::random_quarter(rng, -4, 4));
        ys.push_back(std::clamp(Rational(a[i] * y[i]), Rational(-c[i]), c[i]));
      }
      const PrimalDualPoint p{y, ys};
      if (std::find(t.pairs.begin(), t.pairs.end(), p) == t.pairs.end()) t.pairs.push_back(p);
    }
    if (!is_monotone(t).monotone) {
      ++violations;
      continue;
    }
    const Rational slope2 = max_block_slope_norm2(phi_finite(t), Block::primal);
    // Independent: the x-block slopes of φ_T are the y*.
    Rational range2 = 0;
    for (const auto& p : t.pairs) range2 = std::max(range2, oracle::inner(p.xstar, p.xstar));
    if (!(slope2 <= l2) || slope2 != range2) ++violations;
    if (slope2 == l2) ++tight;
  }
  return {violations == 0, "50 bounded-range finite T: " + std::to_string(violations) +
                               " with max x-slope norm above L (exact), " + std::to_string(tight) + " attaining L"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Line (*run)();
  };
  const Criterion criteria[] = {
      {"1 identity-operator formulas", identity_formulas},
      {"2 grid conjugate oracle equivalence", oracle_equivalence},
      {"3 exact duality", exact_duality},
      {"4 gate and extraction for the sign map", sign_extraction},
      {"5 bounded-range rotation instance", rotation_instance},
      {"6 lemma battery", lemma_battery},
      {"7 Lipschitz bound exactness", lipschitz_exactness},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Line l;
    try {
      l = c.run();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    all = all && l.pass;
    std::printf("[%s] %s: %s (%.2f s)\n", l.pass ? "PASS" : "FAIL", c.name, l.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
