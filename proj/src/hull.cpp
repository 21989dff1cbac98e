#include "fitzkit/hull.hpp"

#include <algorithm>

#include "fitzkit/errors.hpp"
#include "fitzkit/lp.hpp"

namespace fitzkit {

Rational cross(const QVec& a, const QVec& b, const QVec& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

namespace {

std::vector<QVec> unique_sorted(std::vector<QVec> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<QVec> hull_2d(const std::vector<QVec>& pts) {
  if (pts.size() <= 2) return pts;
  std::vector<QVec> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && sgn(cross(h[k - 2], h[k - 1], p)) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && sgn(cross(h[k - 2], h[k - 1], pts[i])) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

std::vector<QVec> hull_3d(const std::vector<QVec>& pts) {
  std::vector<QVec> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<QVec> others;
    others.reserve(pts.size() - 1);
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.push_back(pts[j]);
    if (others.empty() || !lp::in_convex_hull(others, pts[i])) out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

VPolytope convex_hull(const std::vector<QVec>& points) {
  if (points.empty()) throw InputError("convex_hull: empty point set");
  const std::size_t d = points.front().size();
  for (const auto& p : points)
    if (p.size() != d) throw InputError("convex_hull: dimension mismatch");
  if (d > 3) throw UnsupportedError("convex_hull: dimension " + std::to_string(d) + " > 3 is not supported");

  std::vector<QVec> pts = unique_sorted(points);
  VPolytope out{d, {}};
  if (d == 0) {
    out.vertices = {QVec{}};
  } else if (d == 1) {
    out.vertices.push_back(pts.front());
    if (pts.back() != pts.front()) out.vertices.push_back(pts.back());
  } else if (d == 2) {
    out.vertices = hull_2d(pts);
  } else {
    out.vertices = hull_3d(pts);
  }
  return out;
}

}  // namespace fitzkit
