#include "fitzkit/gates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fitzkit/errors.hpp"
#include "fitzkit/fitzpatrick.hpp"

namespace fitzkit {

namespace {

double grid_pairing(const RVec& z) {
  const std::size_t n = z.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += z[i] * z[n + i];
  return s;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

std::string point_text(const RVec& p) {
  std::ostringstream o;
  o << '(';
  for (std::size_t i = 0; i < p.size(); ++i) o << (i ? ", " : "") << format_double(p[i]);
  o << ')';
  return o.str();
}

}  // namespace

MajorizeResult check_majorizes_pi(const GridFn& h, double tol, std::span<const std::uint8_t> skip) {
  if (h.spec.dim() % 2 != 0) throw InputError("check_majorizes_pi: grid must cover X×X*");
  if (!skip.empty() && skip.size() != h.values.size()) throw InputError("check_majorizes_pi: mask size mismatch");
  MajorizeResult r;
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    if (!skip.empty() && skip[i]) continue;
    ++r.checked;
    if (h.values[i] == kPosInf) continue;
    const RVec z = h.spec.point(i);
    const double deficit = grid_pairing(z) - h.values[i];
    if (deficit > r.worst) {
      r.worst = deficit;
      if (deficit > tol) r.witness = z;
    }
  }
  r.holds = !(r.worst > tol);
  return r;
}

ExactMajorizeResult check_majorizes_pi(const ExactEvaluator& h, const std::vector<QVec>& probes, const Rational& tol) {
  ExactMajorizeResult r;
  for (const auto& z : probes) {
    ++r.checked;
    const ExtRational v = h(z);
    if (v.is_pos_inf()) continue;
    const ExtRational deficit = ExtRational(pairing(z)) - v;
    if (deficit > r.worst) {
      r.worst = deficit;
      if (deficit > ExtRational(tol)) r.witness = z;
    }
  }
  r.holds = r.worst <= ExtRational(tol);
  return r;
}

GateReport representability_gate(const GridFn& h, double tol, const std::string& declared_domain) {
  h.require_proper("representability_gate");
  if (!swappable(h.spec)) throw InputError("representability_gate: primal and dual axes must match");
  GateReport g;
  g.h_ge_pi = check_majorizes_pi(h, tol);
  g.jh = j_transform(h);
  g.jh_ge_pi = check_majorizes_pi(g.jh.function, tol, g.jh.saturation_mask);
  if (!declared_domain.empty()) {
    g.domain_condition_note = "declared: " + declared_domain;
  } else {
    const GridProjection p1 = project_domain(h, Block::primal);
    g.domain_condition_note =
        p1.count() == p1.member.size()
            ? "observed: P1 D(h) covers the whole primal window (read as X, a closed subspace condition that holds trivially)"
            : "observed: P1 D(h) is a proper part of the primal window; the subspace condition is not verified";
  }
  return g;
}

namespace {

ExtractionResult extract_from_gate(const GridFn& h, GateReport gate, double tol) {
  ExtractionResult e;
  e.tol = tol;
  const GridFn& jh = gate.jh.function;
  for (std::size_t i = 0; i < jh.values.size(); ++i) {
    if (gate.jh.saturation_mask[i] || jh.values[i] == kPosInf) continue;
    const RVec z = jh.spec.point(i);
    if (jh.values[i] - grid_pairing(z) <= tol) {
      e.nodes.push_back(i);
      e.graph.pairs.push_back(PrimalDualPoint::split(to_qvec(z)));
    }
  }
  e.monotone = is_monotone(e.graph);
  e.gate = std::move(gate);
  (void)h;
  return e;
}

}  // namespace

ExtractionResult extract_operator(const GridFn& h, double tol, double gate_tol, const std::string& declared_domain) {
  GateReport gate = representability_gate(h, gate_tol, declared_domain);
  if (!gate.holds()) {
    const bool first = !gate.h_ge_pi.holds;
    const auto& part = first ? gate.h_ge_pi : gate.jh_ge_pi;
    throw PreconditionError(std::string("extraction refused: gate failed (") + (first ? "h >= pi" : "Jh >= pi") +
                            " violated by " + format_double(part.worst) +
                            (part.witness ? " at " + point_text(*part.witness) : std::string()) + ")");
  }
  return extract_from_gate(h, std::move(gate), tol);
}

double hausdorff_inf(const std::vector<RVec>& a, const std::vector<RVec>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kPosInf;
  auto dist = [](const RVec& p, const RVec& q) {
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q[i]));
    return m;
  };
  auto directed = [&](const std::vector<RVec>& from, const std::vector<RVec>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = kPosInf;
      for (const auto& q : to) {
        best = std::min(best, dist(p, q));
        if (best <= worst) break;
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

namespace {

BoundednessReport boundedness(const GridFn& h, double tol, Block bounded) {
  h.require_proper("boundedness report");
  if (h.spec.dim() % 2 != 0) throw InputError("boundedness report: grid must cover X×X*");
  BoundednessReport r;
  r.bounded_block = bounded;
  const GridProjection p = project_domain(h, bounded);
  r.projection_bounded = !p.touches_boundary();
  const std::string tag = bounded == Block::dual ? "P2 D(h)" : "P1 D(h)";
  if (!r.projection_bounded) {
    r.note = tag + " reaches the window edge: not observably bounded, so the equivalent Lipschitz items are not claimed";
    return r;
  }
  r.bound = p.max_norm();
  r.applicable = true;
  // Differences along the other block's axes.
  const std::size_t n = h.spec.dim() / 2;
  const std::size_t first = bounded == Block::dual ? 0 : n;
  const auto shape = h.spec.shape();
  for (std::size_t a = first; a < first + n; ++a) {
    std::size_t stride = 1;
    for (std::size_t k = a + 1; k < shape.size(); ++k) stride *= shape[k];
    const double step = h.spec.axes[a].step();
    for (std::size_t i = 0; i < h.values.size(); ++i) {
      if ((i / stride) % shape[a] + 1 == shape[a]) continue;
      const double u = h.values[i], w = h.values[i + stride];
      if (u == kPosInf || w == kPosInf) continue;
      const double slope = std::abs(w - u) / step;
      if (slope > r.lipschitz_estimate) {
        r.lipschitz_estimate = slope;
        if (slope > r.bound + tol) r.witness = h.spec.point(i);
      }
    }
  }
  r.holds = r.lipschitz_estimate <= r.bound + tol;
  r.note = tag + " bounded within the window by L = " + format_double(r.bound) +
           (bounded == Block::dual ? "; slices x -> h(x,x*)" : "; slices x* -> h(x,x*)") +
           " have finite-difference Lipschitz estimate " + format_double(r.lipschitz_estimate);
  if (bounded == Block::primal)
    r.note += "; slices indexed by x in P1 D(h) (the item-4 reading; item 5 of the statement indexes by x*), "
              "and the strong x weak* closedness side condition is vacuous in finite dimension";
  return r;
}

}  // namespace

BoundednessReport bounded_range_report(const GridFn& h, double tol) { return boundedness(h, tol, Block::dual); }
BoundednessReport bounded_domain_report(const GridFn& h, double tol) { return boundedness(h, tol, Block::primal); }

Rational max_block_slope_norm2(const MaxAffineFn& f, Block block) {
  f.validate();
  Rational best = 0;
  for (const auto& p : f.pieces) best = std::max(best, squared_norm(block_of(p.slope, block)));
  return best;
}

namespace {

ExactBoundednessReport exact_boundedness(const FiniteOperator& t, bool range_side) {
  if (t.pairs.empty()) throw InputError("boundedness report: empty operator");
  ExactBoundednessReport r;
  r.bound_sq = 0;
  for (const auto& p : t.pairs) r.bound_sq = std::max(r.bound_sq, squared_norm(range_side ? p.xstar : p.x));
  r.max_slope_sq = max_block_slope_norm2(phi_finite(t), range_side ? Block::primal : Block::dual);
  r.holds = r.max_slope_sq <= r.bound_sq;
  return r;
}

}  // namespace

ExactBoundednessReport bounded_range_report(const FiniteOperator& t) { return exact_boundedness(t, true); }
ExactBoundednessReport bounded_domain_report(const FiniteOperator& t) { return exact_boundedness(t, false); }

GridFn build_cw_h(const GridSpec& spec) {
  if (spec.dim() != 4 || !swappable(spec)) throw InputError("build_cw_h: needs a swappable 4-axis grid over Z×Z*");
  return sample(spec, [](std::span<const double> p) {
    const double x = p[0], xs = p[1], ys = p[2], yss = p[3];
    if (ys * ys + yss * yss > 1.0) return kPosInf;
    return std::hypot(x - yss, xs + ys);
  });
}

PipelineReport main_pipeline(const GridFn& h, const PipelineOptions& options) {
  h.require_proper("main_pipeline");
  if (!swappable(h.spec)) throw InputError("main_pipeline: primal and dual axes must match");
  const GridProjection p2 = project_domain(h, Block::dual);
  if (p2.touches_boundary())
    throw PreconditionError("main_pipeline: P2 D(h) reaches the edge of the window, so it is not observably bounded");

  PipelineReport r;
  r.range_bound = p2.max_norm();
  r.window_note = "conclusions are limited to the sampled window; boundedness of P2 D(h) is observed, not proved";
  GateReport gate = representability_gate(h, options.gate_tol, options.declared_domain);
  if (!gate.holds()) {
    r.gate = std::move(gate);
    return r;
  }
  r.extraction = extract_from_gate(h, gate, options.extract_tol);
  r.gate = std::move(gate);

  const std::size_t n = h.spec.dim() / 2;
  const GridSpec primal{std::vector<Axis>(h.spec.axes.begin(), h.spec.axes.begin() + static_cast<std::ptrdiff_t>(n))};
  std::vector<std::uint8_t> covered(primal.size(), 0);
  r.max_extracted_range_norm = 0.0;
  for (std::size_t node : r.extraction.nodes) {
    const auto idx = h.spec.unravel(node);
    covered[primal.ravel(std::span<const std::size_t>(idx).subspan(0, n))] = 1;
    const RVec z = h.spec.point(node);
    r.max_extracted_range_norm = std::max(r.max_extracted_range_norm, norm(std::span<const double>(z).subspan(n)));
  }
  r.range_ok = r.max_extracted_range_norm <= r.range_bound + options.gate_tol;
  for (std::size_t i = 0; i < primal.size(); ++i) {
    const RVec z = primal.point(i);
    if (options.coverage_radius && norm(z) > *options.coverage_radius + 1e-12) continue;
    ++r.fibers_checked;
    if (!covered[i]) {
      ++r.fibers_missing;
      if (!r.missing_fiber) r.missing_fiber = z;
    }
  }
  r.fibers_ok = r.fibers_missing == 0;
  r.monotone_ok = r.extraction.monotone.monotone;
  return r;
}

double rotation_graph_hausdorff(const ExtractionResult& e, double radius, double step, std::size_t refine) {
  if (refine == 0 || !(step > 0) || !(radius >= 0)) throw InputError("rotation_graph_hausdorff: bad parameters");
  std::vector<RVec> extracted;
  for (const auto& p : e.graph.pairs) {
    if (p.n() != 2) throw InputError("rotation_graph_hausdorff: operator must act on R^2");
    const RVec z = to_rvec(p.x);
    if (norm(z) <= radius + 1e-12) {
      RVec v = z;
      for (const auto& c : p.xstar) v.push_back(c.get_d());
      extracted.push_back(std::move(v));
    }
  }
  std::vector<RVec> reference;
  const double h = step / static_cast<double>(refine);
  const auto count = static_cast<long>(std::floor(radius / h + 1e-9));
  for (long i = -count; i <= count; ++i) {
    for (long j = -count; j <= count; ++j) {
      const double u = static_cast<double>(i) * h, v = static_cast<double>(j) * h;
      if (u * u + v * v > radius * radius + 1e-12) continue;
      reference.push_back(RVec{u, v, -v, u});
    }
  }
  return hausdorff_inf(extracted, reference);
}

}  // namespace fitzkit
