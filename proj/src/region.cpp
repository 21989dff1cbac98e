#include "fitzkit/region.hpp"

#include <algorithm>

#include "fitzkit/errors.hpp"
#include "fitzkit/lp.hpp"

namespace fitzkit {

namespace {

// Scales a face so its first nonzero coefficient has magnitude one.
HalfSpace normalized(HalfSpace h) {
  for (const auto& c : h.a) {
    if (sgn(c) != 0) {
      Rational scale = abs(c);
      for (auto& v : h.a) v /= scale;
      h.b /= scale;
      return h;
    }
  }
  return h;
}

bool is_zero(const QVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& v) { return sgn(v) == 0; });
}

// Drops duplicates (keeping the tightest right-hand side) and trivially
// satisfied 0 ≤ b rows; keeps a single 0 ≤ −1 row when infeasible.
std::vector<HalfSpace> tidy(std::vector<HalfSpace> faces) {
  std::vector<HalfSpace> out;
  bool infeasible = false;
  for (auto& f : faces) {
    if (is_zero(f.a)) {
      if (sgn(f.b) < 0) infeasible = true;
      continue;
    }
    HalfSpace n = normalized(std::move(f));
    auto same = std::find_if(out.begin(), out.end(), [&](const HalfSpace& o) { return o.a == n.a; });
    if (same == out.end()) {
      out.push_back(std::move(n));
    } else if (n.b < same->b) {
      same->b = n.b;
    }
  }
  if (infeasible && !out.empty()) {
    out.push_back(HalfSpace{QVec(out.front().a.size(), Rational(0)), Rational(-1)});
  } else if (infeasible) {
    out.push_back(HalfSpace{QVec{}, Rational(-1)});
  }
  return out;
}

void check_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) throw InputError(std::string(what) + ": dimension mismatch");
}

}  // namespace

bool HPolyhedron::contains(std::span<const Rational> z) const {
  check_dim(dim, z.size(), "HPolyhedron::contains");
  for (const auto& f : faces)
    if (dot(f.a, z) > f.b) return false;
  return true;
}

bool HPolyhedron::is_empty() const {
  HPolyhedron cur = *this;
  cur.faces = tidy(cur.faces);
  while (cur.dim > 0) cur = eliminate_variable(cur, cur.dim - 1);
  return std::any_of(cur.faces.begin(), cur.faces.end(), [](const HalfSpace& f) { return sgn(f.b) < 0; });
}

bool HPolyhedron::is_bounded() const {
  const HPolyhedron cone = recession_cone(*this);
  for (std::size_t i = 0; i < dim; ++i) {
    for (int sign : {1, -1}) {
      HPolyhedron probe = cone;
      QVec a(dim, Rational(0));
      a[i] = -sign;
      probe.faces.push_back(HalfSpace{a, Rational(-1)});
      if (!probe.is_empty()) return false;
    }
  }
  return true;
}

bool VPolytope::contains(std::span<const Rational> z) const {
  check_dim(dim, z.size(), "VPolytope::contains");
  return lp::in_convex_hull(vertices, QVec(z.begin(), z.end()));
}

bool NormBall::contains(std::span<const Rational> z) const {
  check_dim(center.size(), z.size(), "NormBall::contains");
  if (sgn(radius) < 0) throw InputError("NormBall radius must be nonnegative");
  Rational acc = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    Rational d = z[i] - center[i];
    acc += d * d;
  }
  return acc <= radius * radius;
}

std::size_t region_dim(const Region& c) {
  return std::visit(
      [](const auto& r) -> std::size_t {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, NormBall>) {
          return r.center.size();
        } else {
          return r.dim;
        }
      },
      c);
}

ExtRational indicator_eval(const Region& c, std::span<const Rational> z) {
  const bool inside = std::visit([&](const auto& r) { return r.contains(z); }, c);
  return inside ? ExtRational(Rational(0)) : ExtRational::pos_inf();
}

Rational support_function(const VPolytope& c, std::span<const Rational> s) {
  if (c.vertices.empty()) throw InputError("support_function: empty vertex list");
  Rational best = dot(c.vertices.front(), s);
  for (const auto& v : c.vertices) best = std::max(best, Rational(dot(v, s)));
  return best;
}

HPolyhedron recession_cone(const HPolyhedron& c) {
  if (c.is_empty()) throw InputError("recession_cone: polyhedron is empty");
  HPolyhedron cone{c.dim, {}};
  for (const auto& f : c.faces) cone.faces.push_back(HalfSpace{f.a, Rational(0)});
  cone.faces = tidy(std::move(cone.faces));
  return cone;
}

HPolyhedron eliminate_variable(const HPolyhedron& c, std::size_t k) {
  if (k >= c.dim) throw InputError("eliminate_variable: index out of range");
  auto drop_k = [k](const QVec& a) {
    QVec r;
    r.reserve(a.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != k) r.push_back(a[i]);
    return r;
  };
  std::vector<HalfSpace> pos, neg, out;
  for (const auto& f : c.faces) {
    check_dim(c.dim, f.a.size(), "eliminate_variable");
    const int s = sgn(f.a[k]);
    if (s > 0) {
      pos.push_back(f);
    } else if (s < 0) {
      neg.push_back(f);
    } else {
      out.push_back(HalfSpace{drop_k(f.a), f.b});
    }
  }
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      const Rational wp = -n.a[k];
      const Rational wn = p.a[k];
      QVec a(c.dim);
      for (std::size_t i = 0; i < c.dim; ++i) a[i] = wp * p.a[i] + wn * n.a[i];
      out.push_back(HalfSpace{drop_k(a), Rational(wp * p.b + wn * n.b)});
    }
  }
  return HPolyhedron{c.dim - 1, tidy(std::move(out))};
}

HPolyhedron project(const HPolyhedron& c, std::span<const std::size_t> keep) {
  for (auto k : keep)
    if (k >= c.dim) throw InputError("project: coordinate out of range");
  // Current position of each original coordinate as variables are removed.
  std::vector<std::size_t> alive(c.dim);
  for (std::size_t i = 0; i < c.dim; ++i) alive[i] = i;
  HPolyhedron cur = c;
  cur.faces = tidy(cur.faces);
  for (std::size_t orig = c.dim; orig-- > 0;) {
    if (std::find(keep.begin(), keep.end(), orig) != keep.end()) continue;
    auto pos = static_cast<std::size_t>(std::find(alive.begin(), alive.end(), orig) - alive.begin());
    cur = eliminate_variable(cur, pos);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  // Reorder to the requested coordinate order.
  HPolyhedron out{keep.size(), {}};
  for (const auto& f : cur.faces) {
    QVec a(keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) {
      auto pos = static_cast<std::size_t>(std::find(alive.begin(), alive.end(), keep[j]) - alive.begin());
      a[j] = f.a[pos];
    }
    out.faces.push_back(HalfSpace{std::move(a), f.b});
  }
  return out;
}

HPolyhedron box(std::span<const Rational> lo, std::span<const Rational> hi) {
  check_dim(lo.size(), hi.size(), "box");
  HPolyhedron out{lo.size(), {}};
  for (std::size_t i = 0; i < lo.size(); ++i) {
    QVec up(lo.size(), Rational(0)), down(lo.size(), Rational(0));
    up[i] = 1;
    down[i] = -1;
    out.faces.push_back(HalfSpace{up, hi[i]});
    out.faces.push_back(HalfSpace{down, Rational(-lo[i])});
  }
  return out;
}

bool in_cone(const std::vector<QVec>& generators, std::span<const Rational> u) {
  if (generators.empty()) {
    return std::all_of(u.begin(), u.end(), [](const Rational& v) { return sgn(v) == 0; });
  }
  std::vector<QVec> rows(u.size(), QVec(generators.size(), Rational(0)));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    check_dim(u.size(), generators[k].size(), "in_cone");
    for (std::size_t i = 0; i < u.size(); ++i) rows[i][k] = generators[k][i];
  }
  return lp::feasible(rows, QVec(u.begin(), u.end()));
}

namespace {

// Some z with A z ≤ b, and when `objective` is given also objective·z ≥ level.
std::optional<QVec> feasible_point(const HPolyhedron& c, const QVec* objective, const Rational& level) {
  const std::size_t d = c.dim;
  std::vector<HalfSpace> faces = c.faces;
  if (objective) {
    QVec a(d);
    for (std::size_t i = 0; i < d; ++i) a[i] = -(*objective)[i];
    faces.push_back(HalfSpace{a, Rational(-level)});
  }
  // z = z⁺ − z⁻ with one slack per face.
  const std::size_t m = faces.size(), vars = 2 * d + m;
  std::vector<QVec> rows(m, QVec(vars, Rational(0)));
  QVec rhs(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      rows[r][i] = faces[r].a[i];
      rows[r][d + i] = -faces[r].a[i];
    }
    rows[r][2 * d + r] = 1;
    rhs[r] = faces[r].b;
  }
  if (m == 0) return QVec(d, Rational(0));
  auto res = lp::minimize(rows, rhs, QVec(vars, Rational(0)));
  if (res.status != lp::Status::optimal) return std::nullopt;
  QVec z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = res.solution[i] - res.solution[d + i];
  return z;
}

}  // namespace

LinearMax max_linear(const HPolyhedron& c, std::span<const Rational> objective) {
  check_dim(c.dim, objective.size(), "max_linear");
  const std::size_t d = c.dim, m = c.faces.size(), vars = 2 * d + m;
  std::vector<QVec> rows(m, QVec(vars, Rational(0)));
  QVec rhs(m), cost(vars, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      rows[r][i] = c.faces[r].a[i];
      rows[r][d + i] = -c.faces[r].a[i];
    }
    rows[r][2 * d + r] = 1;
    rhs[r] = c.faces[r].b;
  }
  for (std::size_t i = 0; i < d; ++i) {
    cost[i] = -objective[i];
    cost[d + i] = objective[i];
  }
  const QVec obj(objective.begin(), objective.end());
  if (m == 0) {
    const bool zero = std::all_of(obj.begin(), obj.end(), [](const Rational& v) { return sgn(v) == 0; });
    if (zero) return LinearMax{ExtRational(Rational(0)), QVec(d, Rational(0))};
    return LinearMax{ExtRational::pos_inf(), *feasible_point(c, &obj, Rational(1))};
  }
  auto res = lp::minimize(rows, rhs, cost);
  if (res.status == lp::Status::infeasible) throw InputError("max_linear: polyhedron is empty");
  if (res.status == lp::Status::unbounded) {
    // Any level is reachable; report a point above 1 for witnesses.
    return LinearMax{ExtRational::pos_inf(), *feasible_point(c, &obj, Rational(1))};
  }
  QVec z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = res.solution[i] - res.solution[d + i];
  return LinearMax{ExtRational(Rational(-res.value)), z};
}

std::optional<QVec> inclusion_witness(const HPolyhedron& inner, const HPolyhedron& outer) {
  check_dim(inner.dim, outer.dim, "inclusion_witness");
  for (const auto& f : outer.faces) {
    const LinearMax lm = max_linear(inner, f.a);
    if (lm.value > ExtRational(f.b)) {
      if (lm.value.is_finite()) return lm.point;
      return feasible_point(inner, &f.a, Rational(f.b + 1));
    }
  }
  return std::nullopt;
}

}  // namespace fitzkit
