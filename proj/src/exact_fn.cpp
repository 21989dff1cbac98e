#include "fitzkit/exact_fn.hpp"

#include "fitzkit/errors.hpp"
#include "fitzkit/lp.hpp"

namespace fitzkit {

namespace {

void check_point(std::size_t dim, std::span<const Rational> z) {
  if (z.size() != dim) throw InputError("evaluation point has dimension " + std::to_string(z.size()) +
                                        ", expected " + std::to_string(dim));
}

// Envelope value at z of the generator list with entry `skip` left out.
ExtRational envelope(const std::vector<Generator>& gens, std::span<const Rational> z, std::size_t skip) {
  const std::size_t d = z.size();
  std::vector<QVec> rows(d + 1);
  QVec cost;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (k == skip) continue;
    for (std::size_t i = 0; i < d; ++i) rows[i].push_back(gens[k].point[i]);
    rows[d].push_back(Rational(1));
    cost.push_back(gens[k].value);
  }
  if (cost.empty()) return ExtRational::pos_inf();
  QVec rhs(z.begin(), z.end());
  rhs.push_back(Rational(1));
  auto r = lp::minimize(rows, rhs, cost);
  if (r.status == lp::Status::infeasible) return ExtRational::pos_inf();
  return ExtRational(r.value);
}

}  // namespace

void MaxAffineFn::validate() const {
  if (pieces.empty()) throw InputError("max-affine function needs at least one piece");
  for (const auto& p : pieces)
    if (p.slope.size() != dim) throw InputError("affine piece slope has wrong dimension");
  if (domain && region_dim(*domain) != dim) throw InputError("domain dimension mismatch");
}

ExtRational MaxAffineFn::eval(std::span<const Rational> z) const {
  check_point(dim, z);
  if (pieces.empty()) throw InputError("max-affine function needs at least one piece");
  if (domain && indicator_eval(*domain, z).is_pos_inf()) return ExtRational::pos_inf();
  Rational best = pieces.front().eval(z);
  for (std::size_t k = 1; k < pieces.size(); ++k) {
    Rational v = pieces[k].eval(z);
    if (v > best) best = v;
  }
  return ExtRational(best);
}

void GeneratorFn::validate() const {
  if (generators.empty()) throw InputError("generator function needs at least one generator");
  for (const auto& g : generators)
    if (g.point.size() != dim) throw InputError("generator point has wrong dimension");
}

ExtRational GeneratorFn::eval(std::span<const Rational> z) const {
  check_point(dim, z);
  if (generators.empty()) throw InputError("generator function needs at least one generator");
  return envelope(generators, z, generators.size());
}

MaxAffineFn prune(const MaxAffineFn& f) {
  f.validate();
  // Piece k is redundant iff (a_k, −b_k) lies in the epigraph of the
  // envelope of the other (a_i, −b_i).
  std::vector<Generator> dual;
  for (const auto& p : f.pieces) dual.push_back(Generator{p.slope, Rational(-p.offset)});
  std::vector<bool> keep(dual.size(), true);
  for (std::size_t k = 0; k < dual.size(); ++k) {
    std::vector<Generator> others;
    for (std::size_t i = 0; i < dual.size(); ++i)
      if (i != k && keep[i]) others.push_back(dual[i]);
    if (others.empty()) continue;
    if (envelope(others, dual[k].point, others.size()) <= ExtRational(dual[k].value)) keep[k] = false;
  }
  MaxAffineFn out{f.dim, {}, f.domain};
  for (std::size_t k = 0; k < f.pieces.size(); ++k)
    if (keep[k]) out.pieces.push_back(f.pieces[k]);
  return out;
}

GeneratorFn prune(const GeneratorFn& f) {
  f.validate();
  std::vector<bool> keep(f.generators.size(), true);
  for (std::size_t k = 0; k < f.generators.size(); ++k) {
    std::vector<Generator> others;
    for (std::size_t i = 0; i < f.generators.size(); ++i)
      if (i != k && keep[i]) others.push_back(f.generators[i]);
    if (others.empty()) continue;
    if (envelope(others, f.generators[k].point, others.size()) <= ExtRational(f.generators[k].value))
      keep[k] = false;
  }
  GeneratorFn out{f.dim, {}};
  for (std::size_t k = 0; k < f.generators.size(); ++k)
    if (keep[k]) out.generators.push_back(f.generators[k]);
  return out;
}

}  // namespace fitzkit
