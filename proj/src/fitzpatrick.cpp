#include "fitzkit/fitzpatrick.hpp"

#include <algorithm>
#include <cmath>

#include "fitzkit/conjugate.hpp"
#include "fitzkit/errors.hpp"

namespace fitzkit {

MaxAffineFn phi_finite(const FiniteOperator& t) {
  if (t.pairs.empty()) throw InputError("phi_finite: empty operator");
  t.validate();
  MaxAffineFn f{2 * t.n(), {}, std::nullopt};
  for (const auto& p : t.pairs) {
    QVec slope = p.xstar;
    slope.insert(slope.end(), p.x.begin(), p.x.end());
    f.pieces.push_back(AffinePiece{std::move(slope), Rational(-pairing(p))});
  }
  return f;
}

GeneratorFn sigma_finite(const FiniteOperator& t) {
  if (t.pairs.empty()) throw InputError("sigma_finite: empty operator");
  t.validate();
  GeneratorFn f{2 * t.n(), {}};
  for (const auto& p : t.pairs) f.generators.push_back(Generator{p.joined(), pairing(p)});
  return f;
}

namespace {

// max over y in [c, d] of k·y + r, with unbounded ends allowed.
ExtRational linear_sup(const Rational& k, const Rational& r, const ExtRational& c, const ExtRational& d) {
  const int s = sgn(k);
  if (s > 0) return d.is_finite() ? ExtRational(Rational(k * d.value() + r)) : ExtRational::pos_inf();
  if (s < 0) return c.is_finite() ? ExtRational(Rational(k * c.value() + r)) : ExtRational::pos_inf();
  return ExtRational(r);
}

}  // namespace

ExtRational phi_pwl1d_eval(const PwlCurve1d& t, const Rational& x, const Rational& xstar) {
  if (!is_maximal_1d(t)) throw InputError("phi_pwl1d_eval: curve is not maximal monotone");
  ExtRational best = ExtRational::neg_inf();
  for (const auto& seg : t.segments) {
    ExtRational v;
    if (const auto* p = std::get_if<Sloped>(&seg)) {
      // −a y² + (a x + x* − b) y + b x over y in [from, to]
      const Rational lin = p->a * x + xstar - p->b;
      if (sgn(p->a) == 0) {
        v = linear_sup(lin, Rational(p->b * x), p->from, p->to);
      } else {
        Rational y = lin / (2 * p->a);
        if (p->from.is_finite() && y < p->from.value()) y = p->from.value();
        if (p->to.is_finite() && y > p->to.value()) y = p->to.value();
        v = ExtRational(Rational(-p->a * y * y + lin * y + p->b * x));
      }
    } else {
      const auto& s = std::get<Vertical>(seg);
      v = ExtRational(Rational(s.y * xstar)) + linear_sup(Rational(x - s.y), Rational(0), s.lo, s.hi);
    }
    best = std::max(best, v);
  }
  return best;
}

ExtRational j_delta_pwl1d_eval(const PwlCurve1d& t, const Rational& x, const Rational& xstar) {
  if (t.segments.empty()) throw InputError("curve has no segments");
  ExtRational best = ExtRational::neg_inf();
  for (const auto& seg : t.segments) {
    ExtRational v;
    if (const auto* p = std::get_if<Sloped>(&seg)) {
      v = linear_sup(Rational(p->a * x + xstar), Rational(p->b * x), p->from, p->to);
    } else {
      const auto& s = std::get<Vertical>(seg);
      v = linear_sup(x, Rational(s.y * xstar), s.lo, s.hi);
    }
    best = std::max(best, v);
  }
  return best;
}

ExtRational phi_linear_eval(const LinearOperator& t, std::span<const Rational> x, std::span<const Rational> xstar) {
  if (!linear_is_monotone(t)) throw InputError("phi_linear_eval: operator is not monotone");
  const std::size_t n = t.n();
  if (x.size() != n || xstar.size() != n) throw InputError("phi_linear_eval: dimension mismatch");
  QVec c(n), half(n);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = xstar[j];
    for (std::size_t i = 0; i < n; ++i) c[j] += t.m[i][j] * x[i];
    half[j] = c[j] / 2;
  }
  auto y = solve_linear(t.symmetric_part(), half);
  if (!y) return ExtRational::pos_inf();
  return ExtRational(Rational(dot(c, *y) / 2));
}

ExtRational sigma_linear_eval(const LinearOperator& t, std::span<const Rational> x, std::span<const Rational> xstar) {
  if (!linear_is_monotone(t)) throw InputError("sigma_linear_eval: operator is not monotone");
  QVec mx = t.apply(x);
  if (!std::equal(mx.begin(), mx.end(), xstar.begin(), xstar.end())) return ExtRational::pos_inf();
  return ExtRational(dot(x, mx));
}

namespace {

template <class Fn>
FamilyMembershipReport membership_exact(const Fn& h, const std::vector<QVec>& graph_points,
                                        const std::vector<QVec>& check_points, const Rational& tol) {
  FamilyMembershipReport r;
  r.max_deficit_below_pi = kNegInf;
  bool ok = true;
  for (const auto& z : check_points) {
    ++r.checked;
    const ExtRational v = h.eval(z);
    if (v.is_pos_inf()) continue;
    const Rational deficit = pairing(z) - v.value();
    r.max_deficit_below_pi = std::max(r.max_deficit_below_pi, deficit.get_d());
    if (deficit > tol) {
      ok = false;
      r.witnesses.push_back(z);
    }
  }
  for (const auto& z : graph_points) {
    ++r.checked;
    const ExtRational v = h.eval(z);
    if (!v.is_finite()) {
      ok = false;
      r.max_graph_gap = kPosInf;
      r.witnesses.push_back(z);
      continue;
    }
    const Rational gap = abs(v.value() - pairing(z));
    r.max_graph_gap = std::max(r.max_graph_gap, gap.get_d());
    if (gap > tol) {
      ok = false;
      r.witnesses.push_back(z);
    }
  }
  r.is_member = ok;
  return r;
}

double grid_pairing(const RVec& z) {
  const std::size_t n = z.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += z[i] * z[n + i];
  return s;
}

}  // namespace

FamilyMembershipReport family_membership(const MaxAffineFn& h, const std::vector<QVec>& graph_points,
                                         const std::vector<QVec>& check_points, const Rational& tol) {
  return membership_exact(h, graph_points, check_points, tol);
}

FamilyMembershipReport family_membership(const GeneratorFn& h, const std::vector<QVec>& graph_points,
                                         const std::vector<QVec>& check_points, const Rational& tol) {
  return membership_exact(h, graph_points, check_points, tol);
}

std::optional<std::size_t> discrete_convexity_violation(const GridFn& h, double tol) {
  const std::size_t d = h.spec.dim();
  const auto shape = h.spec.shape();
  std::vector<std::vector<int>> dirs;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<int> e(d, 0);
    e[i] = 1;
    dirs.push_back(e);
    for (std::size_t j = i + 1; j < d; ++j) {
      for (int sj : {1, -1}) {
        std::vector<int> f(d, 0);
        f[i] = 1;
        f[j] = sj;
        dirs.push_back(f);
      }
    }
  }
  std::vector<std::size_t> lo(d), hi(d);
  for (std::size_t flat = 0; flat < h.values.size(); ++flat) {
    const auto idx = h.spec.unravel(flat);
    for (const auto& e : dirs) {
      bool inside = true;
      for (std::size_t k = 0; k < d && inside; ++k) {
        const long a = static_cast<long>(idx[k]) - e[k], b = static_cast<long>(idx[k]) + e[k];
        if (a < 0 || b < 0 || a >= static_cast<long>(shape[k]) || b >= static_cast<long>(shape[k])) inside = false;
        lo[k] = static_cast<std::size_t>(a);
        hi[k] = static_cast<std::size_t>(b);
      }
      if (!inside) continue;
      const double fa = h.values[h.spec.ravel(lo)], fb = h.values[h.spec.ravel(hi)], fm = h.values[flat];
      if (fa == kPosInf || fb == kPosInf) continue;
      if (fm == kPosInf || fa + fb - 2 * fm < -tol) return flat;
    }
  }
  return std::nullopt;
}

FamilyMembershipReport family_membership(const GridFn& h, const std::vector<std::size_t>& graph_nodes,
                                         const std::vector<std::size_t>& check_nodes, double tol) {
  h.require_proper("family_membership");
  if (h.spec.dim() % 2 != 0) throw InputError("family_membership: grid must cover X×X*");
  if (auto bad = discrete_convexity_violation(h, tol))
    throw UnsupportedError("family_membership: grid function is not discretely convex near node " +
                           std::to_string(*bad) + "; membership presumes a convex h");
  FamilyMembershipReport r;
  r.max_deficit_below_pi = kNegInf;
  bool ok = true;
  auto check = [&](std::size_t i) {
    ++r.checked;
    if (h.values[i] == kPosInf) return;
    const RVec z = h.spec.point(i);
    const double deficit = grid_pairing(z) - h.values[i];
    r.max_deficit_below_pi = std::max(r.max_deficit_below_pi, deficit);
    if (deficit > tol) {
      ok = false;
      r.witnesses.push_back(to_qvec(z));
    }
  };
  if (check_nodes.empty()) {
    for (std::size_t i = 0; i < h.values.size(); ++i) check(i);
  } else {
    for (auto i : check_nodes) check(i);
  }
  for (auto i : graph_nodes) {
    ++r.checked;
    const RVec z = h.spec.point(i);
    const double gap = std::abs(h.values[i] - grid_pairing(z));
    r.max_graph_gap = std::max(r.max_graph_gap, gap);
    if (!(gap <= tol)) {
      ok = false;
      r.witnesses.push_back(to_qvec(z));
    }
  }
  r.is_member = ok;
  return r;
}

EnvelopeReport minimality_maximality_envelope(const FiniteOperator& t, const std::vector<QVec>& probes) {
  const MaxAffineFn phi = phi_finite(t);
  const GeneratorFn sigma = sigma_finite(t);
  const MaxAffineFn j_sigma = j_transform(sigma);
  EnvelopeReport r;
  r.piece_lists_equal = j_sigma.pieces == phi.pieces;
  for (const auto& z : probes) {
    ++r.probes;
    const ExtRational p = phi.eval(z);
    if (!(p <= sigma.eval(z))) {
      r.phi_le_sigma = false;
      if (!r.witness) r.witness = z;
    }
    if (!(p == j_sigma.eval(z))) {
      r.phi_eq_j_sigma = false;
      if (!r.witness) r.witness = z;
    }
  }
  return r;
}

GridFn phi_on_grid(const FiniteOperator& t, const GridSpec& spec) {
  const MaxAffineFn phi = phi_finite(t);
  if (spec.dim() != phi.dim) throw InputError("phi_on_grid: grid dimension must be 2n");
  std::vector<RVec> slopes;
  std::vector<double> offsets;
  for (const auto& p : phi.pieces) {
    slopes.push_back(to_rvec(p.slope));
    offsets.push_back(p.offset.get_d());
  }
  return sample(spec, [&](std::span<const double> z) {
    double best = kNegInf;
    for (std::size_t k = 0; k < slopes.size(); ++k) {
      double v = offsets[k];
      for (std::size_t i = 0; i < z.size(); ++i) v += slopes[k][i] * z[i];
      best = std::max(best, v);
    }
    return best;
  });
}

GridFn sigma_on_grid(const FiniteOperator& t, const GridSpec& spec) {
  const GeneratorFn sigma = sigma_finite(t);
  if (spec.dim() != sigma.dim) throw InputError("sigma_on_grid: grid dimension must be 2n");
  return sample(spec, [&](std::span<const double> z) { return to_double(sigma.eval(to_qvec(z))); });
}

GridFn phi_on_grid(const PwlCurve1d& t, const GridSpec& spec) {
  if (spec.dim() != 2) throw InputError("phi_on_grid: a curve needs a 2-axis grid");
  if (!is_maximal_1d(t)) throw InputError("phi_on_grid: curve is not maximal monotone");
  return sample(spec, [&](std::span<const double> z) {
    return to_double(phi_pwl1d_eval(t, from_double(z[0]), from_double(z[1])));
  });
}

GridFn phi_on_grid(const LinearOperator& t, const GridSpec& spec) {
  t.validate();
  const std::size_t n = t.n();
  if (spec.dim() != 2 * n) throw InputError("phi_on_grid: grid dimension must be 2n");
  if (!linear_is_monotone(t)) throw InputError("phi_on_grid: operator is not monotone");
  return sample(spec, [&](std::span<const double> z) {
    const QVec q = to_qvec(z);
    return to_double(phi_linear_eval(t, std::span(q).first(n), std::span(q).subspan(n)));
  });
}

}  // namespace fitzkit
