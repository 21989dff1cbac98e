#include "fitzkit/projection.hpp"

#include <algorithm>
#include <cmath>

#include "fitzkit/errors.hpp"
#include "fitzkit/hull.hpp"

namespace fitzkit {

const char* block_name(Block b) { return b == Block::primal ? "primal" : "dual"; }

std::size_t GridProjection::count() const {
  return static_cast<std::size_t>(std::count(member.begin(), member.end(), std::uint8_t{1}));
}

std::vector<RVec> GridProjection::points() const {
  const GridSpec s = spec();
  std::vector<RVec> out;
  for (std::size_t i = 0; i < member.size(); ++i)
    if (member[i]) out.push_back(s.point(i));
  return out;
}

bool GridProjection::touches_boundary() const {
  const GridSpec s = spec();
  for (std::size_t i = 0; i < member.size(); ++i)
    if (member[i] && s.on_boundary(i)) return true;
  return false;
}

double GridProjection::max_norm() const {
  double best = kNegInf;
  for (const auto& p : points()) {
    double n2 = 0.0;
    for (double c : p) n2 += c * c;
    best = std::max(best, std::sqrt(n2));
  }
  return best;
}

GridProjection project_domain(const GridFn& h, Block block, std::span<const std::uint8_t> exclude) {
  h.require_proper("project_domain");
  const std::size_t d = h.spec.dim();
  if (d % 2 != 0) throw InputError("project_domain: grid must cover X×X*");
  if (!exclude.empty() && exclude.size() != h.values.size()) throw InputError("project_domain: mask size mismatch");
  const std::size_t n = d / 2;
  const std::size_t off = block == Block::primal ? 0 : n;
  GridProjection p;
  p.axes.assign(h.spec.axes.begin() + static_cast<std::ptrdiff_t>(off),
                h.spec.axes.begin() + static_cast<std::ptrdiff_t>(off + n));
  const GridSpec ps = p.spec();
  p.member.assign(ps.size(), 0);
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    if (h.values[i] == kPosInf || (!exclude.empty() && exclude[i])) continue;
    const auto idx = h.spec.unravel(i);
    p.member[ps.ravel(std::span<const std::size_t>(idx).subspan(off, n))] = 1;
  }
  return p;
}

Region project_domain(const MaxAffineFn& h, Block block) {
  h.validate();
  if (h.dim % 2 != 0) throw InputError("project_domain: function must live on X×X*");
  const std::size_t n = h.dim / 2;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) keep.push_back(block == Block::primal ? i : n + i);
  if (!h.domain) return HPolyhedron{n, {}};
  if (const auto* hp = std::get_if<HPolyhedron>(&*h.domain)) {
    if (hp->is_empty()) throw InputError("project_domain: empty domain (improper function)");
    return project(*hp, keep);
  }
  if (const auto* vp = std::get_if<VPolytope>(&*h.domain)) {
    std::vector<QVec> pts;
    for (const auto& v : vp->vertices) pts.push_back(block_of(v, block));
    return convex_hull(pts);
  }
  const auto& ball = std::get<NormBall>(*h.domain);
  return NormBall{block_of(ball.center, block), ball.radius};
}

VPolytope project_domain(const GeneratorFn& h, Block block) {
  h.validate();
  if (h.dim % 2 != 0) throw InputError("project_domain: function must live on X×X*");
  std::vector<QVec> pts;
  for (const auto& g : h.generators) pts.push_back(block_of(g.point, block));
  return convex_hull(pts);
}

}  // namespace fitzkit
