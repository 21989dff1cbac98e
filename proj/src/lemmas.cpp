#include "fitzkit/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fitzkit/errors.hpp"
#include "fitzkit/fitzpatrick.hpp"
#include "fitzkit/gates.hpp"
#include "fitzkit/hull.hpp"

namespace fitzkit {

std::string format_point(std::span<const Rational> z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) s += ", ";
    s += to_string(z[i]);
  }
  return s + ")";
}

std::string format_point(std::span<const double> z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) s += ", ";
    s += format_double(z[i]);
  }
  return s + ")";
}

namespace {

LemmaReport make_report(std::string id, std::string digest) {
  LemmaReport r;
  r.lemma_id = std::move(id);
  r.inputs_digest = std::move(digest);
  return r;
}

void fail(LemmaReport& r, double margin, std::string witness) {
  if (r.holds) r.witness = std::move(witness);
  r.holds = false;
  r.worst_margin = std::max(r.worst_margin, margin);
}

std::string spec_text(const GridSpec& spec) {
  std::string s;
  for (std::size_t i = 0; i < spec.axes.size(); ++i) {
    const Axis& a = spec.axes[i];
    if (i) s += ",";
    s += format_double(a.lo) + ":" + format_double(a.hi) + ":" + std::to_string(a.m);
  }
  return s;
}

std::string curve_text(const PwlCurve1d& t) {
  std::string s = "pwl1d[";
  for (std::size_t k = 0; k < t.segments.size(); ++k) {
    if (k) s += "; ";
    if (const auto* p = std::get_if<Sloped>(&t.segments[k])) {
      s += "y in [" + to_string(p->from) + "," + to_string(p->to) + "] y*=" + to_string(p->a) + "y+" +
           to_string(p->b);
    } else {
      const auto& v = std::get<Vertical>(t.segments[k]);
      s += "y=" + to_string(v.y) + " y* in [" + to_string(v.lo) + "," + to_string(v.hi) + "]";
    }
  }
  return s + "]";
}

std::string matrix_text(const std::vector<QVec>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += format_point(m[i]);
  }
  return s + "]";
}

std::string finite_text(const FiniteOperator& t) {
  return "finite n=" + std::to_string(t.n()) + " pairs=" + std::to_string(t.pairs.size());
}

std::vector<Rational> equispaced(const Rational& lo, const Rational& hi, std::size_t m) {
  std::vector<Rational> out;
  if (m == 1) return {lo};
  for (std::size_t i = 0; i < m; ++i) out.push_back(lo + (hi - lo) * Rational(i) / Rational(m - 1));
  return out;
}

// Curve graph inside the box [−r, r]²: extents of y and y*.
struct Extent {
  Rational xlo, xhi, ylo, yhi;
};

std::optional<Extent> box_extent(const PwlCurve1d& t, const Rational& r) {
  std::optional<Extent> e;
  auto add = [&](const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1) {
    if (!e) {
      e = Extent{x0, x1, y0, y1};
      return;
    }
    e->xlo = std::min(e->xlo, x0);
    e->xhi = std::max(e->xhi, x1);
    e->ylo = std::min(e->ylo, y0);
    e->yhi = std::max(e->yhi, y1);
  };
  const ExtRational lo_r(Rational(-r)), hi_r(r);
  for (const auto& seg : t.segments) {
    if (const auto* p = std::get_if<Sloped>(&seg)) {
      ExtRational lo = std::max(p->from, lo_r), hi = std::min(p->to, hi_r);
      if (sgn(p->a) > 0) {
        lo = std::max(lo, ExtRational(Rational((-r - p->b) / p->a)));
        hi = std::min(hi, ExtRational(Rational((r - p->b) / p->a)));
      } else if (sgn(p->a) < 0) {
        lo = std::max(lo, ExtRational(Rational((r - p->b) / p->a)));
        hi = std::min(hi, ExtRational(Rational((-r - p->b) / p->a)));
      } else if (p->b < -r || p->b > r) {
        continue;
      }
      if (lo > hi) continue;
      const Rational y0 = p->a * lo.value() + p->b, y1 = p->a * hi.value() + p->b;
      add(lo.value(), hi.value(), std::min(y0, y1), std::max(y0, y1));
    } else {
      const auto& v = std::get<Vertical>(seg);
      if (v.y < -r || v.y > r) continue;
      const ExtRational lo = std::max(v.lo, lo_r), hi = std::min(v.hi, hi_r);
      if (lo > hi) continue;
      add(v.y, v.y, lo.value(), hi.value());
    }
  }
  return e;
}

// Every point of `pts` inside conv(hull_pts); returns the first outsider.
std::optional<QVec> first_outside_hull(const std::vector<QVec>& pts, const std::vector<QVec>& hull_pts) {
  if (pts.empty()) return std::nullopt;
  if (hull_pts.empty()) return pts.front();
  const VPolytope hull = convex_hull(hull_pts);
  for (const auto& p : pts)
    if (!hull.contains(p)) return p;
  return std::nullopt;
}

std::vector<QVec> to_qpoints(const std::vector<RVec>& pts) {
  std::vector<QVec> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(to_qvec(p));
  return out;
}

ExtRational j_delta_linear(const LinearOperator& t, std::span<const Rational> x, std::span<const Rational> xstar) {
  // sup_y ⟨Mᵀx + x*, y⟩
  const std::size_t n = t.n();
  for (std::size_t j = 0; j < n; ++j) {
    Rational c = xstar[j];
    for (std::size_t i = 0; i < n; ++i) c += t.m[i][j] * x[i];
    if (sgn(c) != 0) return ExtRational::pos_inf();
  }
  return ExtRational(Rational(0));
}

std::vector<QVec> columns(const std::vector<QVec>& m) {
  std::vector<QVec> cols(m.empty() ? 0 : m.front().size(), QVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) cols[j][i] = m[i][j];
  return cols;
}

std::vector<QVec> from_columns(const std::vector<QVec>& cols, std::size_t rows) {
  std::vector<QVec> m(rows, QVec(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m[i][j] = cols[j][i];
  return m;
}

// First vector of `vs` outside the column span of `cols`.
std::optional<QVec> outside_span(const std::vector<QVec>& vs, const std::vector<QVec>& cols, std::size_t n) {
  for (const auto& v : vs) {
    if (cols.empty()) {
      if (std::any_of(v.begin(), v.end(), [](const Rational& c) { return sgn(c) != 0; })) return v;
      continue;
    }
    if (!solve_linear(from_columns(cols, n), v)) return v;
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------- conjugate-shift

LemmaReport check_conjugate_shift(const GridFn& f, std::span<const double> zstar, std::span<const double> wstar,
                                  std::span<const double> lambdas, double tol,
                                  const std::optional<VPolytope>& declared_domain) {
  f.require_proper("check_conjugate_shift");
  const std::size_t d = f.spec.dim();
  if (zstar.size() != d || wstar.size() != d) throw InputError("check_conjugate_shift: dimension mismatch");
  if (lambdas.empty()) throw InputError("check_conjugate_shift: no lambda samples");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw InputError("check_conjugate_shift: lambda must be nonnegative");

  LemmaReport r = make_report("conjugate-shift", "grid " + spec_text(f.spec) + " z*=" + format_point(zstar) +
                                          " w*=" + format_point(wstar) + " lambdas=" + std::to_string(lambdas.size()));
  double support = kNegInf;
  if (declared_domain) {
    if (declared_domain->dim != d) throw InputError("check_conjugate_shift: declared domain dimension mismatch");
    support = to_double(ExtRational(support_function(*declared_domain, to_qvec(wstar))));
    r.note = "support of the declared domain";
  } else {
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (f.values[i] == kPosInf) continue;
      const RVec z = f.spec.point(i);
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += wstar[k] * z[k];
      support = std::max(support, s);
    }
    r.note = "support of the finite nodes";
  }
  const double base = conjugate_at(f, zstar);
  r.worst_margin = kNegInf;
  for (double l : lambdas) {
    RVec s(d);
    for (std::size_t k = 0; k < d; ++k) s[k] = zstar[k] + l * wstar[k];
    const double lhs = conjugate_at(f, s);
    const double rhs = base + l * support;
    const double margin = lhs - rhs;
    r.worst_margin = std::max(r.worst_margin, margin);
    if (margin > tol && r.holds) {
      r.holds = false;
      r.witness = "z*=" + format_point(zstar) + " w*=" + format_point(wstar) + " lambda=" + format_double(l) +
                  " f*(z*+lambda w*)=" + format_double(lhs) + " f*(z*)+lambda S(w*)=" + format_double(rhs);
    }
  }
  return r;
}

LemmaReport check_conjugate_shift(const GeneratorFn& f, const std::vector<ShiftSample>& samples) {
  f.validate();
  if (f.generators.empty()) throw InputError("check_conjugate_shift: no generators");
  LemmaReport r = make_report("conjugate-shift", "generator dim=" + std::to_string(f.dim) + " generators=" +
                                          std::to_string(f.generators.size()) +
                                          " samples=" + std::to_string(samples.size()));
  const MaxAffineFn conj = conjugate_exact(f);
  VPolytope dom{f.dim, {}};
  for (const auto& g : f.generators) dom.vertices.push_back(g.point);
  std::optional<Rational> worst;
  for (const auto& s : samples) {
    if (s.zstar.size() != f.dim || s.wstar.size() != f.dim) throw InputError("check_conjugate_shift: dimension mismatch");
    if (sgn(s.lambda) < 0) throw InputError("check_conjugate_shift: lambda must be nonnegative");
    QVec shifted(f.dim);
    for (std::size_t k = 0; k < f.dim; ++k) shifted[k] = s.zstar[k] + s.lambda * s.wstar[k];
    const Rational lhs = conj.eval(shifted).value();
    const Rational rhs = conj.eval(s.zstar).value() + s.lambda * support_function(dom, s.wstar);
    const Rational margin = lhs - rhs;
    if (!worst || margin > *worst) worst = margin;
    if (sgn(margin) > 0 && r.holds) {
      r.holds = false;
      r.witness = "z*=" + format_point(s.zstar) + " w*=" + format_point(s.wstar) + " lambda=" + to_string(s.lambda);
    }
  }
  r.worst_margin = worst ? worst->get_d() : 0.0;
  r.note = "exact rational comparison";
  return r;
}

// ---------------------------------------------------------------- recession-inclusion

LemmaReport check_recession_inclusion(const GeneratorFn& h) {
  h.validate();
  if (h.generators.empty()) throw InputError("check_recession_inclusion: no generators");
  LemmaReport r = make_report("recession-inclusion", "generator dim=" + std::to_string(h.dim) + " generators=" +
                                           std::to_string(h.generators.size()));
  const MaxAffineFn jh = j_transform(h);
  HPolyhedron dom_jh{h.dim, {}};
  if (jh.domain) {
    const auto* p = std::get_if<HPolyhedron>(&*jh.domain);
    if (!p) throw UnsupportedError("check_recession_inclusion: non-polyhedral domain of Jh");
    dom_jh = *p;
  }
  const HPolyhedron rec = recession_cone(dom_jh);
  // D(h) is a polytope, so its support function is finite everywhere and the
  // left side is the whole space; test the coordinate rays that span it.
  for (std::size_t i = 0; i < h.dim; ++i) {
    for (int sign : {1, -1}) {
      QVec u(h.dim, Rational(0));
      u[i] = sign;
      if (!rec.contains(u)) fail(r, 1.0, "ray " + format_point(u));
    }
  }
  r.note = "D(h) bounded: left side is the whole space; 0+D(Jh) tested on the coordinate rays";
  return r;
}

LemmaReport check_recession_inclusion(const HPolyhedron& dom_h, const HPolyhedron& dom_jh) {
  if (dom_h.dim != dom_jh.dim || dom_h.dim % 2 != 0) throw InputError("check_recession_inclusion: dimension mismatch");
  if (dom_h.is_empty()) throw InputError("check_recession_inclusion: D(h) is empty");
  LemmaReport r = make_report("recession-inclusion", "polyhedral dim=" + std::to_string(dom_h.dim) + " faces(D(h))=" +
                                           std::to_string(dom_h.faces.size()) +
                                           " faces(D(Jh))=" + std::to_string(dom_jh.faces.size()));
  const HPolyhedron rec = recession_cone(dom_jh);
  // D(σ_P) for P = {Az ≤ b} nonempty is the cone of the rows of A.
  for (const auto& f : dom_h.faces) {
    const QVec g = swap_halves(f.a);
    if (!rec.contains(g)) fail(r, 1.0, "ray " + format_point(g));
  }
  r.note = "left side spanned by the swapped face normals of D(h)";
  return r;
}

LemmaReport check_recession_inclusion(const PwlCurve1d& t) {
  if (!is_maximal_1d(t)) throw InputError("check_recession_inclusion: curve is not maximal monotone");
  LemmaReport r = make_report("recession-inclusion", curve_text(t));
  // Finiteness of Jδ_T (left) and of φ_T = Jσ_T (right), piece by piece.
  HPolyhedron lhs{2, {}}, dom_phi{2, {}};
  for (const auto& seg : t.segments) {
    if (const auto* p = std::get_if<Sloped>(&seg)) {
      if (p->to.is_pos_inf()) {
        lhs.faces.push_back(HalfSpace{{p->a, Rational(1)}, Rational(0)});
        if (sgn(p->a) == 0) dom_phi.faces.push_back(HalfSpace{{Rational(0), Rational(1)}, p->b});
      }
      if (p->from.is_neg_inf()) {
        lhs.faces.push_back(HalfSpace{{Rational(-p->a), Rational(-1)}, Rational(0)});
        if (sgn(p->a) == 0) dom_phi.faces.push_back(HalfSpace{{Rational(0), Rational(-1)}, Rational(-p->b)});
      }
    } else {
      const auto& v = std::get<Vertical>(seg);
      if (v.hi.is_pos_inf()) {
        lhs.faces.push_back(HalfSpace{{Rational(1), Rational(0)}, Rational(0)});
        dom_phi.faces.push_back(HalfSpace{{Rational(1), Rational(0)}, v.y});
      }
      if (v.lo.is_neg_inf()) {
        lhs.faces.push_back(HalfSpace{{Rational(-1), Rational(0)}, Rational(0)});
        dom_phi.faces.push_back(HalfSpace{{Rational(-1), Rational(0)}, Rational(-v.y)});
      }
    }
  }
  const HPolyhedron rec = recession_cone(dom_phi);
  if (auto w = inclusion_witness(lhs, rec)) fail(r, 1.0, "ray " + format_point(*w));
  r.note = "h = sigma_T: D(J delta_T) from the unbounded pieces, 0+D(phi_T) from the same rays; exact LP inclusion";
  return r;
}

// ---------------------------------------------------------------- jh-projections / h-projections

std::vector<LemmaReport> check_projection_inclusions(const GridFn& h, ProjectionPrecondition declared, double tol) {
  if (declared == ProjectionPrecondition::undeclared)
    throw InputError("check_projection_inclusions: declare which hypothesis holds (Jh >= pi and/or h convex >= pi)");
  h.require_proper("check_projection_inclusions");
  if (!swappable(h.spec)) throw InputError("check_projection_inclusions: primal and dual axes must match");
  const ConjugateResult jh = j_transform(h);
  const std::string digest = "grid " + spec_text(h.spec);
  std::vector<LemmaReport> out;

  if (declared == ProjectionPrecondition::jh_ge_pi || declared == ProjectionPrecondition::both) {
    LemmaReport r = make_report("jh-projections", digest);
    const MajorizeResult pre = check_majorizes_pi(jh.function, tol, jh.saturation_mask);
    if (!pre.holds) {
      r.holds = false;
      r.worst_margin = pre.worst;
      r.witness = "Jh < pi at " + format_point(*pre.witness);
      r.note = "declared hypothesis Jh >= pi fails on unmasked nodes";
    } else {
      for (Block b : {Block::dual, Block::primal}) {
        const auto lhs = to_qpoints(project_domain(jh.function, b, jh.saturation_mask).points());
        const auto rhs = to_qpoints(project_domain(h, b).points());
        if (auto w = first_outside_hull(lhs, rhs))
          fail(r, 1.0, std::string(block_name(b)) + " projection of D(Jh) outside conv of D(h)'s: " + format_point(*w));
      }
      r.note = "left sets use unmasked nodes of Jh; right sets are hulls of the finite nodes of h";
    }
    out.push_back(std::move(r));
  }

  if (declared == ProjectionPrecondition::h_convex_ge_pi || declared == ProjectionPrecondition::both) {
    LemmaReport r = make_report("h-projections", digest);
    const MajorizeResult pre = check_majorizes_pi(h, tol);
    const auto nonconvex = discrete_convexity_violation(h, tol);
    if (!pre.holds) {
      r.holds = false;
      r.worst_margin = pre.worst;
      r.witness = "h < pi at " + format_point(*pre.witness);
      r.note = "declared hypothesis h >= pi fails";
    } else if (nonconvex) {
      r.holds = false;
      r.worst_margin = 1.0;
      r.witness = "discrete convexity fails at " + format_point(h.spec.point(*nonconvex));
      r.note = "declared hypothesis h convex fails";
    } else {
      // P₁D(h*) is P₂D(Jh) and P₂D(h*) is P₁D(Jh) by the block swap.
      for (Block b : {Block::dual, Block::primal}) {
        const GridProjection lhs = project_domain(h, b);
        const GridProjection rhs = project_domain(jh.function, b);
        for (std::size_t i = 0; i < lhs.member.size(); ++i) {
          if (lhs.member[i] && !rhs.member[i]) {
            fail(r, 1.0, std::string(block_name(b)) + " projection of D(h) outside D(Jh)'s: " +
                             format_point(lhs.spec().point(i)));
            break;
          }
        }
      }
      r.note = "right sets are all finite nodes of Jh; a restricted grid conjugate is finite on the whole window, "
               "so on a grid this direction only tests the hypotheses";
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- domain-invariance

LemmaReport check_domain_invariance(const PwlCurve1d& t, const Rational& r, std::size_t m) {
  if (sgn(r) <= 0 || m < 2) throw InputError("check_domain_invariance: need r > 0 and m >= 2");
  if (!is_maximal_1d(t)) throw InputError("check_domain_invariance: curve is not maximal monotone");
  LemmaReport rep = make_report("domain-invariance", curve_text(t) + " window=" + to_string(r) + " m=" + std::to_string(m));
  const std::vector<Rational> nodes = equispaced(-r, r, m);
  const auto [dlo, dhi] = domain_interval(t);
  const auto [rlo, rhi] = range_interval(t);

  // φ_T on the window grid against conv D(T) ∩ W and conv R(T) ∩ W.
  std::vector<std::uint8_t> p1(m, 0), p2(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (phi_pwl1d_eval(t, nodes[i], nodes[j]).is_finite()) p1[i] = p2[j] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const ExtRational v(nodes[i]);
    const bool in_d = dlo <= v && v <= dhi, in_r = rlo <= v && v <= rhi;
    if (bool(p1[i]) != in_d) fail(rep, 1.0, "phi: P1 node " + to_string(nodes[i]) + (in_d ? " missing" : " extra"));
    if (bool(p2[i]) != in_r) fail(rep, 1.0, "phi: P2 node " + to_string(nodes[i]) + (in_r ? " missing" : " extra"));
  }

  // σ_T = closed hull of π + δ_T: its domain is conv of the graph samples in W².
  const Box box{{-r, -r}, {r, r}};
  const FiniteOperator samples = sample_graph(t, box, m, m);
  const auto ext = box_extent(t, r);
  Rational sx0 = samples.pairs.front().x[0], sx1 = sx0, sy0 = samples.pairs.front().xstar[0], sy1 = sy0;
  for (const auto& p : samples.pairs) {
    sx0 = std::min(sx0, p.x[0]);
    sx1 = std::max(sx1, p.x[0]);
    sy0 = std::min(sy0, p.xstar[0]);
    sy1 = std::max(sy1, p.xstar[0]);
  }
  auto compare = [&](const char* which) {
    if (sx0 != ext->xlo || sx1 != ext->xhi)
      fail(rep, 1.0, std::string(which) + ": P1 = [" + to_string(sx0) + ", " + to_string(sx1) + "] vs conv D(T) = [" +
                         to_string(ext->xlo) + ", " + to_string(ext->xhi) + "]");
    if (sy0 != ext->ylo || sy1 != ext->yhi)
      fail(rep, 1.0, std::string(which) + ": P2 = [" + to_string(sy0) + ", " + to_string(sy1) + "] vs conv R(T) = [" +
                         to_string(ext->ylo) + ", " + to_string(ext->yhi) + "]");
  };
  compare("sigma");

  // Midpoint: D(½(φ+σ)) = D(φ) ∩ D(σ), which is D(σ) once the samples lie in D(φ).
  for (const auto& p : samples.pairs) {
    if (!phi_pwl1d_eval(t, p.x[0], p.xstar[0]).is_finite()) {
      fail(rep, 1.0, "midpoint: graph sample outside D(phi) " + format_point(p.joined()));
      break;
    }
  }
  compare("midpoint");
  rep.note = "phi on the window grid vs conv D(T), conv R(T) clipped to the window; sigma and midpoint vs the graph "
             "inside the window box";
  return rep;
}

LemmaReport check_domain_invariance(const LinearOperator& t) {
  t.validate();
  LemmaReport r = make_report("domain-invariance", "linear M=" + matrix_text(t.m));
  if (!linear_is_monotone(t)) {
    fail(r, 1.0, "M + M^T not positive semidefinite");
    r.note = "T is not monotone; rejected at precondition";
    return r;
  }
  const std::size_t n = t.n();
  const auto range_m = columns(t.m);
  // P₁D(φ_T) = Rⁿ: (e_i, −Mᵀe_i) lies in D(φ_T).
  for (std::size_t i = 0; i < n; ++i) {
    QVec x(n, Rational(0)), xs(n);
    x[i] = 1;
    for (std::size_t j = 0; j < n; ++j) xs[j] = -t.m[i][j];
    if (!phi_linear_eval(t, x, xs).is_finite()) fail(r, 1.0, "phi: P1 misses e_" + std::to_string(i + 1));
  }
  // P₂D(φ_T) = range [Mᵀ | S] must equal range M = R(T).
  std::vector<QVec> p2 = t.m;  // rows of M are the columns of Mᵀ
  for (const auto& c : columns(t.symmetric_part())) p2.push_back(c);
  if (auto w = outside_span(p2, range_m, n)) fail(r, 1.0, "phi: P2 direction outside R(T): " + format_point(*w));
  if (auto w = outside_span(range_m, p2, n)) fail(r, 1.0, "phi: R(T) direction outside P2: " + format_point(*w));
  // The graph (D(σ_T)) lies in D(φ_T), so the midpoint has the same domain as σ_T.
  for (std::size_t i = 0; i < n; ++i) {
    QVec x(n, Rational(0));
    x[i] = 1;
    const QVec y = t.apply(x);
    if (!phi_linear_eval(t, x, y).is_finite()) fail(r, 1.0, "midpoint: graph point outside D(phi) " + format_point(x));
  }
  r.note = "exact subspace comparison; D(sigma_T) is the graph, with P1 = R^n and P2 = range M";
  return r;
}

LemmaReport check_domain_invariance(const FiniteOperator& t) {
  t.validate();
  LemmaReport r = make_report("domain-invariance", finite_text(t));
  const MonotoneReport mono = is_monotone(t);
  if (!mono.monotone) {
    const auto [i, j] = *mono.violator;
    r.holds = false;
    r.worst_margin = -mono.worst.get_d();
    r.witness = "pair " + format_point(t.pairs[i].joined()) + " / " + format_point(t.pairs[j].joined());
    r.note = "T is not monotone; rejected at precondition";
    return r;
  }
  if (t.n() > 3) {
    r.skipped = true;
    r.note = "hull comparison needs n <= 3";
    return r;
  }
  const GeneratorFn sigma = sigma_finite(t);
  for (Block b : {Block::primal, Block::dual}) {
    std::vector<QVec> pts;
    for (const auto& p : t.pairs) pts.push_back(b == Block::primal ? p.x : p.xstar);
    VPolytope expected = convex_hull(pts), got = project_domain(sigma, b);
    std::sort(expected.vertices.begin(), expected.vertices.end());
    std::sort(got.vertices.begin(), got.vertices.end());
    if (expected.vertices != got.vertices) {
      for (const auto& v : got.vertices)
        if (!expected.contains(v)) fail(r, 1.0, std::string(block_name(b)) + " vertex " + format_point(v));
      for (const auto& v : expected.vertices)
        if (!got.contains(v)) fail(r, 1.0, std::string(block_name(b)) + " missing " + format_point(v));
    }
  }
  r.note = "sigma_T projections vs conv D(T), conv R(T); phi_T of a finite set has full domain and is not compared";
  return r;
}

// ---------------------------------------------------------------- range-domain-duality

LemmaReport check_range_domain_duality(const PwlCurve1d& t, const Rational& r) {
  if (sgn(r) <= 0) throw InputError("check_range_domain_duality: window must be positive");
  LemmaReport rep = make_report("range-domain-duality", curve_text(t) + " window=" + to_string(r));
  const bool maximal = is_maximal_1d(t);
  const auto [dlo, dhi] = domain_interval(t);
  const auto [rlo, rhi] = range_interval(t);

  constexpr int kScales[] = {1, 2, 4};
  std::vector<std::optional<Extent>> ext;
  for (int k : kScales) ext.push_back(box_extent(t, r * k));
  // A direction of 0⁺ cl conv R(T) (resp. D(T)) is accepted when the graph
  // reaches that edge of every window.
  auto accepted = [&](bool range_side, int sign) {
    for (std::size_t k = 0; k < ext.size(); ++k) {
      if (!ext[k]) return false;
      const Rational edge = r * kScales[k];
      const Rational& v = range_side ? (sign > 0 ? ext[k]->yhi : ext[k]->ylo) : (sign > 0 ? ext[k]->xhi : ext[k]->xlo);
      if (v != (sign > 0 ? edge : Rational(-edge))) return false;
    }
    return true;
  };
  // D(δ*_S) for an interval S contains +1 iff sup S < ∞ and −1 iff inf S > −∞.
  for (int sign : {1, -1}) {
    const bool in_lhs = sign > 0 ? dhi.is_finite() : dlo.is_finite();
    if (in_lhs && !accepted(true, sign))
      fail(rep, 1.0, std::string("direction ") + (sign > 0 ? "+1" : "-1") +
                         " in D(supp D(T)) but not in the recession cone of conv R(T)");
    const bool in_lhs2 = sign > 0 ? rhi.is_finite() : rlo.is_finite();
    if (in_lhs2 && !accepted(false, sign))
      fail(rep, 1.0, std::string("direction ") + (sign > 0 ? "+1" : "-1") +
                         " in D(supp R(T)) but not in the recession cone of conv D(T)");
  }
  rep.note = "recession directions estimated on windows r, 2r, 4r";
  if (dlo.is_finite() && dhi.is_finite()) {
    std::vector<Rational> reach;
    for (const auto& e : ext) reach.push_back(e ? std::max(abs(e->ylo), abs(e->yhi)) : Rational(0));
    const bool grows = reach[0] < reach[1] && reach[1] < reach[2];
    if (!grows)
      fail(rep, 1.0, "bounded D(T) but reach of R(T) " + to_string(reach[0]) + ", " + to_string(reach[1]) + ", " +
                         to_string(reach[2]) + " does not grow");
    rep.note += "; bounded domain: range reach " + to_string(reach[0]) + " < " + to_string(reach[1]) + " < " +
                to_string(reach[2]) + " required";
  }
  if (!maximal) rep.note += "; T is not maximal monotone, so the hypothesis fails";
  return rep;
}

LemmaReport check_range_domain_duality(const LinearOperator& t) {
  t.validate();
  LemmaReport r = make_report("range-domain-duality", "linear M=" + matrix_text(t.m));
  if (!linear_is_monotone(t)) {
    fail(r, 1.0, "M + M^T not positive semidefinite");
    r.note = "T is not monotone; rejected at precondition";
    return r;
  }
  // D(T) = Rⁿ: D(δ*_{D(T)}) = {0}. R(T) = range M: D(δ*_{R(T)}) = (range M)^⊥ ⊆ Rⁿ = 0⁺D(T).
  r.note = "D(T) = R^n, so both left sides lie in the right sides (subspace closed forms); domain unbounded, "
           "density item not applicable";
  return r;
}

// ---------------------------------------------------------------- jdelta-nonpositive

LemmaReport check_gg(const PwlCurve1d& t, const Rational& r, std::size_t m) {
  if (sgn(r) <= 0 || m < 2) throw InputError("check_gg: need r > 0 and m >= 2");
  LemmaReport rep = make_report("jdelta-nonpositive", curve_text(t) + " window=" + to_string(r) + " m=" + std::to_string(m));
  const bool maximal = is_maximal_1d(t);
  const auto nodes = equispaced(-r, r, m);
  std::size_t finite = 0;
  std::optional<Rational> worst;
  for (const auto& x : nodes) {
    for (const auto& xs : nodes) {
      if (!j_delta_pwl1d_eval(t, x, xs).is_finite()) continue;
      ++finite;
      const Rational p = x * xs;
      if (!worst || p > *worst) worst = p;
      if (sgn(p) > 0 && rep.holds) rep.witness = "(" + to_string(x) + ", " + to_string(xs) + ")";
      if (sgn(p) > 0) rep.holds = false;
    }
  }
  rep.worst_margin = worst ? worst->get_d() : 0.0;
  rep.note = std::to_string(finite) + " of " + std::to_string(m * m) + " probes in D(J delta_T)";
  if (!maximal) rep.note += "; T is not maximal monotone, so the hypothesis fails";
  return rep;
}

LemmaReport check_gg(const LinearOperator& t, const Rational& r, std::size_t m) {
  t.validate();
  if (sgn(r) <= 0 || m < 2) throw InputError("check_gg: need r > 0 and m >= 2");
  const std::size_t n = t.n();
  LemmaReport rep = make_report("jdelta-nonpositive", "linear M=" + matrix_text(t.m) + " window=" + to_string(r) +
                                             " m=" + std::to_string(m));
  const auto nodes = equispaced(-r, r, m);
  std::size_t finite = 0, probes = 0;
  std::optional<Rational> worst;
  auto probe = [&](const QVec& x, const QVec& xs) {
    ++probes;
    if (!j_delta_linear(t, x, xs).is_finite()) return;
    ++finite;
    const Rational p = dot(x, xs);
    if (!worst || p > *worst) worst = p;
    if (sgn(p) > 0) {
      if (rep.holds) rep.witness = format_point(x) + " / " + format_point(xs);
      rep.holds = false;
    }
  };
  // Primal window nodes with their unique dual partner x* = −Mᵀx, then the
  // full window grid in X×X*.
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    QVec x(n), xs(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) x[i] = nodes[idx[i]];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) xs[j] -= t.m[i][j] * x[i];
    probe(x, xs);
    std::size_t k = n;
    while (k > 0 && ++idx[k - 1] == m) idx[--k] = 0;
    if (k == 0) break;
  }
  std::vector<std::size_t> full(2 * n, 0);
  for (;;) {
    QVec x(n), xs(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = nodes[full[i]];
      xs[i] = nodes[full[n + i]];
    }
    probe(x, xs);
    std::size_t k = 2 * n;
    while (k > 0 && ++full[k - 1] == m) full[--k] = 0;
    if (k == 0) break;
  }
  rep.worst_margin = worst ? worst->get_d() : 0.0;
  rep.note = std::to_string(finite) + " of " + std::to_string(probes) + " probes in D(J delta_T) = {x* = -M^T x}";
  if (!linear_is_monotone(t)) rep.note += "; T is not monotone, so the hypothesis fails";
  return rep;
}

// ---------------------------------------------------------------- Lipschitz items

LemmaReport lipschitz_profile(const ConjugateResult& jh, Block lipschitz_block, double L,
                              const GridProjection& bound_projection, double tol) {
  const GridFn& g = jh.function;
  g.require_proper("lipschitz_profile");
  if (g.spec.dim() % 2 != 0) throw InputError("lipschitz_profile: grid must cover X×X*");
  const std::size_t n = g.spec.dim() / 2;
  LemmaReport r = make_report("lipschitz-slopes", "grid " + spec_text(g.spec) + " block=" + block_name(lipschitz_block) +
                                            " L=" + format_double(L));
  const double bound = bound_projection.max_norm();
  if (bound > L + tol) {
    r.skipped = true;
    r.note = "precondition not met: projection norm " + format_double(bound) + " exceeds L";
    return r;
  }
  const auto shape = g.spec.shape();
  const std::size_t first = lipschitz_block == Block::primal ? 0 : n;
  r.worst_margin = kNegInf;
  for (std::size_t a = first; a < first + n; ++a) {
    std::size_t stride = 1;
    for (std::size_t k = a + 1; k < shape.size(); ++k) stride *= shape[k];
    const double step = g.spec.axes[a].step();
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      if ((i / stride) % shape[a] + 1 == shape[a]) continue;
      const double u = g.values[i], w = g.values[i + stride];
      if (u == kPosInf || w == kPosInf) continue;
      const double margin = std::abs(w - u) - L * step;
      r.worst_margin = std::max(r.worst_margin, margin);
      if (margin > tol && r.holds) {
        r.holds = false;
        r.witness = "difference " + format_double(std::abs(w - u)) + " over step " + format_double(step) + " at " +
                    format_point(g.spec.point(i));
      }
    }
  }
  if (r.worst_margin == kNegInf) r.worst_margin = 0.0;
  // Finite nodes must be the product of their block projections.
  const GridProjection p1 = project_domain(g, Block::primal), p2 = project_domain(g, Block::dual);
  const GridSpec s1 = p1.spec(), s2 = p2.spec();
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const auto idx = g.spec.unravel(i);
    const std::size_t a = s1.ravel(std::span(idx).first(n)), b = s2.ravel(std::span(idx).subspan(n));
    const bool finite = g.values[i] != kPosInf;
    if (finite != (p1.member[a] && p2.member[b])) {
      fail(r, 1.0, "domain does not factor at " + format_point(g.spec.point(i)));
      break;
    }
  }
  r.note = "differences of Jh along the " + std::string(block_name(lipschitz_block)) +
           " block against L*step; domain product structure over the window";
  return r;
}

LemmaReport lipschitz_profile(const MaxAffineFn& f, Block block, const Rational& bound_sq) {
  f.validate();
  LemmaReport r = make_report("lipschitz-slopes", "max-affine dim=" + std::to_string(f.dim) + " pieces=" +
                                            std::to_string(f.pieces.size()) + " block=" + block_name(block) +
                                            " L^2=" + to_string(bound_sq));
  const Rational worst = max_block_slope_norm2(f, block);
  r.worst_margin = Rational(worst - bound_sq).get_d();
  if (worst > bound_sq) {
    r.holds = false;
    for (const auto& p : f.pieces) {
      const QVec s = block_of(p.slope, block);
      if (dot(s, s) == worst) {
        r.witness = "piece slope " + format_point(p.slope);
        break;
      }
    }
  }
  r.note = "largest squared block slope " + to_string(worst) + ", exact";
  return r;
}

namespace {

LemmaReport bounded_grid(const BoundednessReport& b, const char* id, const GridSpec& spec, std::optional<bool> known) {
  LemmaReport r = make_report(id, "grid " + spec_text(spec));
  r.note = b.note;
  if (b.applicable) {
    r.worst_margin = b.lipschitz_estimate - b.bound;
    if (!b.holds) {
      r.holds = false;
      r.witness = b.witness ? "slope " + format_double(b.lipschitz_estimate) + " > L = " + format_double(b.bound) +
                                  " at " + format_point(*b.witness)
                            : "slope " + format_double(b.lipschitz_estimate);
    }
  }
  if (known && *known != b.projection_bounded) {
    fail(r, 1.0, std::string("operator ") + (*known ? "bounded" : "unbounded") + " but projection observed " +
                     (b.projection_bounded ? "bounded" : "unbounded"));
  }
  return r;
}

}  // namespace

LemmaReport check_bounded_range(const GridFn& h, double tol, std::optional<bool> range_bounded) {
  return bounded_grid(bounded_range_report(h, tol), "bounded-range", h.spec, range_bounded);
}

LemmaReport check_bounded_domain(const GridFn& h, double tol, std::optional<bool> domain_bounded) {
  return bounded_grid(bounded_domain_report(h, tol), "bounded-domain", h.spec, domain_bounded);
}

LemmaReport check_bounded_range(const FiniteOperator& t) {
  t.validate();
  LemmaReport r = make_report("bounded-range", finite_text(t));
  const ExactBoundednessReport b = bounded_range_report(t);
  r.worst_margin = Rational(b.max_slope_sq - b.bound_sq).get_d();
  r.holds = b.holds;
  if (!b.holds) r.witness = "max slope^2 " + to_string(b.max_slope_sq) + " > L^2 " + to_string(b.bound_sq);
  r.note = "phi_T x-block slopes against max |y*|, exact";
  return r;
}

}  // namespace fitzkit
