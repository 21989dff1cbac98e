#include "fitzkit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fitzkit/errors.hpp"

namespace fitzkit {

QVec PrimalDualPoint::joined() const {
  QVec z = x;
  z.insert(z.end(), xstar.begin(), xstar.end());
  return z;
}

PrimalDualPoint PrimalDualPoint::split(std::span<const Rational> z) {
  if (z.size() % 2 != 0) throw InputError("primal-dual point needs an even number of coordinates");
  const std::size_t n = z.size() / 2;
  return PrimalDualPoint{QVec(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n)),
                         QVec(z.begin() + static_cast<std::ptrdiff_t>(n), z.end())};
}

Rational pairing(const PrimalDualPoint& z) {
  if (z.x.size() != z.xstar.size()) throw InputError("pairing: x and x* differ in dimension");
  return dot(z.x, z.xstar);
}

Rational pairing(std::span<const Rational> z) { return pairing(PrimalDualPoint::split(z)); }

std::size_t FiniteOperator::n() const { return pairs.empty() ? 0 : pairs.front().n(); }

void FiniteOperator::validate() const {
  const std::size_t d = n();
  for (const auto& p : pairs)
    if (p.x.size() != d || p.xstar.size() != d) throw InputError("finite operator: inconsistent dimensions");
  std::set<PrimalDualPoint> seen;
  for (const auto& p : pairs)
    if (!seen.insert(p).second) throw InputError("finite operator: duplicate pair");
}

MonotoneReport is_monotone(const FiniteOperator& t) {
  const std::size_t d = t.n();
  for (const auto& p : t.pairs)
    if (p.x.size() != d || p.xstar.size() != d) throw InputError("is_monotone: inconsistent dimensions");
  const std::size_t n = t.pairs.size();
  std::vector<RVec> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = to_rvec(t.pairs[i].x);
    ys[i] = to_rvec(t.pairs[i].xstar);
  }
  auto exact = [&](std::size_t i, std::size_t j) {
    Rational acc = 0;
    for (std::size_t k = 0; k < d; ++k)
      acc += (t.pairs[i].x[k] - t.pairs[j].x[k]) * (t.pairs[i].xstar[k] - t.pairs[j].xstar[k]);
    return acc;
  };
  constexpr double kEps = 0x1p-53;
  MonotoneReport r;
  bool have_worst = false;
  double min_approx = kPosInf;
  std::pair<std::size_t, std::size_t> min_pair{0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double approx = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        approx += (xs[i][k] - xs[j][k]) * (ys[i][k] - ys[j][k]);
        scale += (std::abs(xs[i][k]) + std::abs(xs[j][k])) * (std::abs(ys[i][k]) + std::abs(ys[j][k]));
      }
      if (approx < min_approx) {
        min_approx = approx;
        min_pair = {i, j};
      }
      if (approx > 16 * kEps * scale) continue;
      Rational v = exact(i, j);
      if (!have_worst || v < r.worst) {
        r.worst = v;
        have_worst = true;
      }
      if (sgn(v) < 0 && !r.violator) {
        r.monotone = false;
        r.violator = std::make_pair(i, j);
      }
    }
  }
  if (!have_worst && n >= 2) r.worst = exact(min_pair.first, min_pair.second);
  return r;
}

namespace {

struct EndPoint {
  ExtRational y;
  ExtRational ys;
};

ExtRational affine_at(const Rational& a, const Rational& b, const ExtRational& y) {
  if (y.is_finite()) return ExtRational(Rational(a * y.value() + b));
  if (sgn(a) == 0) return ExtRational(b);
  return sgn(a) > 0 ? y : -y;
}

EndPoint start_of(const CurveSegment& s) {
  if (const auto* p = std::get_if<Sloped>(&s)) return {p->from, affine_at(p->a, p->b, p->from)};
  const auto& v = std::get<Vertical>(s);
  return {ExtRational(v.y), v.lo};
}

EndPoint end_of(const CurveSegment& s) {
  if (const auto* p = std::get_if<Sloped>(&s)) return {p->to, affine_at(p->a, p->b, p->to)};
  const auto& v = std::get<Vertical>(s);
  return {ExtRational(v.y), v.hi};
}

bool infinite(const EndPoint& e) { return !e.y.is_finite() || !e.ys.is_finite(); }

}  // namespace

bool is_maximal_1d(const PwlCurve1d& t) {
  const auto& segs = t.segments;
  if (segs.empty()) throw InputError("curve has no segments");
  bool monotone = true;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (const auto* p = std::get_if<Sloped>(&segs[k])) {
      if (p->from > p->to || p->from.is_pos_inf() || p->to.is_neg_inf())
        throw InputError("sloped segment " + std::to_string(k) + " has a reversed or degenerate-infinite interval");
      if (sgn(p->a) < 0) monotone = false;
    } else {
      const auto& v = std::get<Vertical>(segs[k]);
      if (v.lo > v.hi || v.lo.is_pos_inf() || v.hi.is_neg_inf())
        throw InputError("vertical segment " + std::to_string(k) + " has a reversed or degenerate-infinite interval");
    }
    if (k > 0 && infinite(start_of(segs[k])))
      throw InputError("segment " + std::to_string(k) + " starts at infinity but is not the first segment");
    if (k + 1 < segs.size() && infinite(end_of(segs[k])))
      throw InputError("segment " + std::to_string(k) + " ends at infinity but is not the last segment");
  }
  if (!monotone) return false;
  for (std::size_t k = 0; k + 1 < segs.size(); ++k) {
    const EndPoint e = end_of(segs[k]), s = start_of(segs[k + 1]);
    if (!(e.y == s.y) || !(e.ys == s.ys)) return false;
  }
  return infinite(start_of(segs.front())) && infinite(end_of(segs.back()));
}

std::pair<ExtRational, ExtRational> domain_interval(const PwlCurve1d& t) {
  if (t.segments.empty()) throw InputError("curve has no segments");
  ExtRational lo = ExtRational::pos_inf(), hi = ExtRational::neg_inf();
  for (const auto& s : t.segments) {
    lo = std::min(lo, start_of(s).y);
    hi = std::max(hi, end_of(s).y);
  }
  return {lo, hi};
}

std::pair<ExtRational, ExtRational> range_interval(const PwlCurve1d& t) {
  if (t.segments.empty()) throw InputError("curve has no segments");
  ExtRational lo = ExtRational::pos_inf(), hi = ExtRational::neg_inf();
  for (const auto& s : t.segments) {
    lo = std::min(lo, start_of(s).ys);
    hi = std::max(hi, end_of(s).ys);
  }
  return {lo, hi};
}

bool on_curve(const PwlCurve1d& t, const Rational& y, const Rational& ystar) {
  const ExtRational ey(y), es(ystar);
  for (const auto& s : t.segments) {
    if (const auto* p = std::get_if<Sloped>(&s)) {
      if (p->from <= ey && ey <= p->to && ystar == p->a * y + p->b) return true;
    } else {
      const auto& v = std::get<Vertical>(s);
      if (y == v.y && v.lo <= es && es <= v.hi) return true;
    }
  }
  return false;
}

void LinearOperator::validate() const {
  if (m.empty()) throw InputError("linear operator: empty matrix");
  for (const auto& row : m)
    if (row.size() != m.size()) throw InputError("linear operator: matrix must be square");
}

QVec LinearOperator::apply(std::span<const Rational> x) const {
  if (x.size() != n()) throw InputError("linear operator: dimension mismatch");
  QVec out(n());
  for (std::size_t i = 0; i < n(); ++i) out[i] = dot(m[i], x);
  return out;
}

std::vector<QVec> LinearOperator::symmetric_part() const {
  validate();
  std::vector<QVec> s(n(), QVec(n()));
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j) s[i][j] = (m[i][j] + m[j][i]) / 2;
  return s;
}

namespace {

Rational determinant(std::vector<QVec> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

}  // namespace

bool is_psd(const std::vector<QVec>& s) {
  const std::size_t n = s.size();
  if (n > 16) throw UnsupportedError("is_psd: matrix too large for principal-minor enumeration");
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) idx.push_back(i);
    std::vector<QVec> sub(idx.size(), QVec(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub[i][j] = s[idx[i]][idx[j]];
    if (sgn(determinant(sub)) < 0) return false;
  }
  return true;
}

bool linear_is_monotone(const LinearOperator& t) { return is_psd(t.symmetric_part()); }

bool Box::contains(std::span<const Rational> z) const {
  if (z.size() != lo.size() || lo.size() != hi.size()) throw InputError("box: dimension mismatch");
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] < lo[i] || z[i] > hi[i]) return false;
  return true;
}

namespace {

std::vector<Rational> equispaced(const Rational& a, const Rational& b, std::size_t count) {
  if (count <= 1 || a == b) return {count <= 1 ? Rational((a + b) / 2) : a};
  std::vector<Rational> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(a + (b - a) * Rational(i) / Rational(count - 1));
  return out;
}

void push_unique(FiniteOperator& out, std::set<PrimalDualPoint>& seen, PrimalDualPoint p) {
  if (seen.insert(p).second) out.pairs.push_back(std::move(p));
}

}  // namespace

FiniteOperator sample_graph(const PwlCurve1d& t, const Box& box, std::size_t count, std::size_t vertical_count) {
  if (count == 0) throw InputError("sample_graph: count must be at least 1");
  if (box.lo.size() != 2 || box.hi.size() != 2) throw InputError("sample_graph: curve box must be 2-dimensional");
  if (vertical_count == 0) vertical_count = count;
  FiniteOperator out;
  std::set<PrimalDualPoint> seen;
  for (const auto& s : t.segments) {
    if (const auto* p = std::get_if<Sloped>(&s)) {
      ExtRational lo = std::max(p->from, ExtRational(box.lo[0]));
      ExtRational hi = std::min(p->to, ExtRational(box.hi[0]));
      if (sgn(p->a) > 0) {
        lo = std::max(lo, ExtRational(Rational((box.lo[1] - p->b) / p->a)));
        hi = std::min(hi, ExtRational(Rational((box.hi[1] - p->b) / p->a)));
      } else if (sgn(p->a) < 0) {
        lo = std::max(lo, ExtRational(Rational((box.hi[1] - p->b) / p->a)));
        hi = std::min(hi, ExtRational(Rational((box.lo[1] - p->b) / p->a)));
      } else if (p->b < box.lo[1] || p->b > box.hi[1]) {
        continue;
      }
      if (lo > hi) continue;
      for (const auto& y : equispaced(lo.value(), hi.value(), count))
        push_unique(out, seen, PrimalDualPoint{{y}, {Rational(p->a * y + p->b)}});
    } else {
      const auto& v = std::get<Vertical>(s);
      if (v.y < box.lo[0] || v.y > box.hi[0]) continue;
      ExtRational lo = std::max(v.lo, ExtRational(box.lo[1]));
      ExtRational hi = std::min(v.hi, ExtRational(box.hi[1]));
      if (lo > hi) continue;
      for (const auto& ys : equispaced(lo.value(), hi.value(), vertical_count))
        push_unique(out, seen, PrimalDualPoint{{v.y}, {ys}});
    }
  }
  if (out.pairs.empty()) throw InputError("sample_graph: graph does not meet the region");
  return out;
}

FiniteOperator sample_graph(const LinearOperator& t, const Box& box, std::size_t count) {
  t.validate();
  const std::size_t n = t.n();
  if (count == 0) throw InputError("sample_graph: count must be at least 1");
  if (box.lo.size() != 2 * n || box.hi.size() != 2 * n) throw InputError("sample_graph: box must have 2n coordinates");
  std::vector<std::vector<Rational>> axes;
  for (std::size_t i = 0; i < n; ++i) axes.push_back(equispaced(box.lo[i], box.hi[i], count));
  FiniteOperator out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    QVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = axes[i][idx[i]];
    QVec y = t.apply(x);
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i)
      if (y[i] < box.lo[n + i] || y[i] > box.hi[n + i]) inside = false;
    if (inside) out.pairs.push_back(PrimalDualPoint{x, y});
    std::size_t k = n;
    while (k > 0 && ++idx[k - 1] == axes[k - 1].size()) idx[--k] = 0;
    if (k == 0) break;
  }
  if (out.pairs.empty()) throw InputError("sample_graph: graph does not meet the region");
  return out;
}

std::optional<QVec> solve_linear(std::vector<QVec> a, QVec r) {
  const std::size_t rows = a.size();
  if (r.size() != rows) throw InputError("solve_linear: dimension mismatch");
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    std::swap(r[p], r[row]);
    const Rational piv = a[row][c];
    for (auto& v : a[row]) v /= piv;
    r[row] /= piv;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == row || sgn(a[q][c]) == 0) continue;
      const Rational f = a[q][c];
      for (std::size_t k = 0; k < cols; ++k) a[q][k] -= f * a[row][k];
      r[q] -= f * r[row];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t q = row; q < rows; ++q)
    if (sgn(r[q]) != 0) return std::nullopt;
  QVec y(cols, Rational(0));
  for (std::size_t k = 0; k < pivot_col.size(); ++k) y[pivot_col[k]] = r[k];
  return y;
}

namespace {
const ExtRational kNeg = ExtRational::neg_inf();
const ExtRational kPos = ExtRational::pos_inf();
ExtRational q(long v) { return ExtRational(Rational(v)); }
}  // namespace

PwlCurve1d identity_curve() { return PwlCurve1d{{Sloped{kNeg, kPos, 1, 0}}}; }

PwlCurve1d sign_curve() {
  return PwlCurve1d{{Sloped{kNeg, q(0), 0, -1}, Vertical{0, q(-1), q(1)}, Sloped{q(0), kPos, 0, 1}}};
}

PwlCurve1d interval_normal_cone_curve() {
  return PwlCurve1d{{Vertical{-1, kNeg, q(0)}, Sloped{q(-1), q(1), 0, 0}, Vertical{1, q(0), kPos}}};
}

PwlCurve1d origin_normal_cone_curve() { return PwlCurve1d{{Vertical{0, kNeg, kPos}}}; }

PwlCurve1d clamp_curve() {
  return PwlCurve1d{{Sloped{kNeg, q(-1), 0, -1}, Sloped{q(-1), q(1), 1, 0}, Sloped{q(1), kPos, 0, 1}}};
}

LinearOperator rotation_operator() { return LinearOperator{{{0, -1}, {1, 0}}}; }

}  // namespace fitzkit
