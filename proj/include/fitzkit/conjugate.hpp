#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fitzkit/exact_fn.hpp"
#include "fitzkit/grid.hpp"

namespace fitzkit {

/// Grid conjugate. `saturation_mask[i]` is 1 when the discrete maximizer
/// chosen for dual node i lies on the boundary of the primal grid (or on a
/// node that was itself untrusted); the value there is exact for the
/// restricted function but not trusted as the analytic conjugate.
struct ConjugateResult {
  GridFn function;
  std::vector<std::uint8_t> saturation_mask;

  std::size_t masked_count() const;
};

/// Ground truth: at each dual node s, max over primal nodes z of s·z − f(z).
/// Among exact ties the maximizer that is trusted and interior wins, then
/// the smaller flat index. `untrusted` (optional, one flag per primal node)
/// marks samples whose own value is not trusted.
ConjugateResult conjugate_bruteforce(const GridFn& f, const GridSpec& dual,
                                     std::span<const std::uint8_t> untrusted = {});

/// One-axis transform: out[j] = max_i slopes[j]·coords[i] − values[i].
/// +∞ samples are ignored; if all are +∞ the result is −∞.
std::vector<double> llt_1d(std::span<const double> slopes, std::span<const double> coords,
                           std::span<const double> values);

/// Same values as conjugate_bruteforce, computed one axis at a time
/// (last axis first) with the linear-time transform.
ConjugateResult conjugate_grid(const GridFn& f, const GridSpec& dual,
                               std::span<const std::uint8_t> untrusted = {});

/// Dual grid whose per-axis range is the span of finite-difference slopes
/// realized by f along that axis, with the same node counts.
GridSpec default_dual_spec(const GridFn& f);

/// f*(s) restricted to the grid, at an arbitrary dual point s.
double conjugate_at(const GridFn& f, std::span<const double> s);

/// A-form with pieces (slope p_k, offset −v_k).
MaxAffineFn conjugate_exact(const GeneratorFn& f);
/// V-form with generators (a_k, −b_k). UnsupportedError if f has a domain.
GeneratorFn conjugate_exact(const MaxAffineFn& f);

/// (Jh)(x,x*) = h*(x*,x). The grid version requires swappable specs and
/// evaluates on `output` (default: the input spec).
ConjugateResult j_transform(const GridFn& h, std::span<const std::uint8_t> untrusted = {});
ConjugateResult j_transform(const GridFn& h, const GridSpec& output, std::span<const std::uint8_t> untrusted = {});
MaxAffineFn j_transform(const GeneratorFn& h);
GeneratorFn j_transform(const MaxAffineFn& h);

/// J²h = h** on the input grid, masks propagated through both passes.
ConjugateResult biconjugate(const GridFn& h);

/// f** on the input grid through default_dual_spec(f), for grids that are
/// not split into primal and dual blocks.
ConjugateResult biconjugate_plain(const GridFn& f);

/// Exchanges the first and second halves of a vector.
template <class V>
V swap_halves(const V& v) {
  V out(v.size());
  const std::size_t h = v.size() / 2;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[(i + h) % v.size()];
  return out;
}

}  // namespace fitzkit
