#include "fitzkit/conjugate.hpp"

#include <algorithm>
#include <cmath>

#include "fitzkit/errors.hpp"

namespace fitzkit {

std::size_t ConjugateResult::masked_count() const {
  return static_cast<std::size_t>(std::count(saturation_mask.begin(), saturation_mask.end(), std::uint8_t{1}));
}

namespace {

void check_sorted(std::span<const double> v, bool strict, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::isnan(v[i])) throw InputError(std::string(what) + " contains NaN");
    if (i > 0 && (strict ? !(v[i - 1] < v[i]) : !(v[i - 1] <= v[i])))
      throw InputError(std::string(what) + (strict ? " must be strictly increasing" : " must be sorted"));
  }
}

// Strided view into a flat array.
template <class T>
struct Strided {
  T* base;
  std::size_t stride;
  T& operator[](std::size_t i) const { return base[i * stride]; }
};

// Per-node trust flags; a null base trusts every node, and an inverted
// view reads a mask of untrusted nodes.
struct TrustView {
  const std::uint8_t* base = nullptr;
  std::size_t stride = 1;
  bool inverted = false;
  bool operator[](std::size_t i) const { return base == nullptr || ((base[i * stride] != 0) != inverted); }
};

// Where a pass writes: values are scaled by sign, and the flag is either
// "trusted" or, when as_mask is set, "saturated".
struct PassOut {
  Strided<double> values;
  Strided<std::uint8_t> flags;
  double sign;
  bool as_mask;
};

// One-axis pass: out[j] = max_i s_j·x_i − v_i together with whether the
// chosen maximizer is trusted and not at either end of the axis.
struct Pass {
  std::vector<std::uint32_t> hull;

  void run(std::span<const double> slopes, std::span<const double> x, Strided<const double> v, TrustView trusted,
           const PassOut& out) {
    const std::size_t n = x.size();
    hull.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = v[i];
      if (vi == kPosInf) continue;
      // Lower hull of (x_i, v_i); collinear points stay so every tied
      // maximizer is visible.
      while (hull.size() >= 2) {
        const std::size_t a = hull[hull.size() - 2], b = hull.back();
        const double c = (x[b] - x[a]) * (vi - v[a]) - (v[b] - v[a]) * (x[i] - x[a]);
        if (c < 0) {
          hull.pop_back();
        } else {
          break;
        }
      }
      hull.push_back(static_cast<std::uint32_t>(i));
    }
    if (hull.empty()) {
      for (std::size_t j = 0; j < slopes.size(); ++j) {
        out.values[j] = out.sign * kNegInf;
        out.flags[j] = out.as_mask ? 1 : 0;
      }
      return;
    }
    auto preferred = [&](std::size_t i) { return trusted[i] && i > 0 && i + 1 < n; };
    std::size_t k = 0;
    for (std::size_t j = 0; j < slopes.size(); ++j) {
      const double s = slopes[j];
      auto val = [&](std::size_t h) { return s * x[hull[h]] - v[hull[h]]; };
      while (k + 1 < hull.size() && val(k + 1) > val(k)) ++k;
      const double best = val(k);
      std::size_t pick = k;
      for (std::size_t t = k; t < hull.size() && val(t) == best && !preferred(hull[pick]); ++t)
        if (preferred(hull[t])) pick = t;
      out.values[j] = out.sign * best;
      out.flags[j] = preferred(hull[pick]) != out.as_mask ? 1 : 0;
    }
  }
};

std::vector<std::uint8_t> initial_trust(const GridFn& f, std::span<const std::uint8_t> untrusted) {
  if (!untrusted.empty() && untrusted.size() != f.values.size())
    throw InputError("untrusted mask size does not match grid");
  std::vector<std::uint8_t> t(f.values.size(), 1);
  for (std::size_t i = 0; i < untrusted.size(); ++i) t[i] = untrusted[i] ? 0 : 1;
  return t;
}

void fill_coords(std::vector<double>& c, const Axis& a) {
  c.resize(a.m);
  for (std::size_t i = 0; i < a.m; ++i) c[i] = a.coord(i);
}

struct Workspace {
  std::vector<double> cur, next;
  std::vector<std::uint8_t> trust, next_t;
  std::vector<double> x, slopes;
  Pass pass;
};

}  // namespace

std::vector<double> llt_1d(std::span<const double> slopes, std::span<const double> coords,
                           std::span<const double> values) {
  if (coords.size() != values.size()) throw InputError("llt_1d: coords and values differ in length");
  check_sorted(coords, true, "llt_1d coords");
  check_sorted(slopes, false, "llt_1d slopes");
  for (double v : values)
    if (std::isnan(v) || v == kNegInf) throw InputError("llt_1d: samples must be finite or +inf");
  Pass p;
  std::vector<double> out(slopes.size());
  std::vector<std::uint8_t> flags(slopes.size());
  p.run(slopes, coords, {values.data(), 1}, {}, {{out.data(), 1}, {flags.data(), 1}, 1.0, false});
  return out;
}

ConjugateResult conjugate_bruteforce(const GridFn& f, const GridSpec& dual, std::span<const std::uint8_t> untrusted) {
  f.require_proper("conjugate_bruteforce");
  dual.validate();
  if (dual.dim() != f.spec.dim()) throw InputError("conjugate: dual grid dimension differs from primal");
  const auto trusted = initial_trust(f, untrusted);
  const std::size_t d = f.spec.dim();

  std::vector<RVec> pts;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] == kPosInf) continue;
    pts.push_back(f.spec.point(i));
    ids.push_back(i);
  }
  ConjugateResult r{GridFn{dual, std::vector<double>(dual.size())}, std::vector<std::uint8_t>(dual.size())};
  for (std::size_t j = 0; j < dual.size(); ++j) {
    const RVec s = dual.point(j);
    double best = kNegInf;
    bool best_pref = false;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      double v = 0.0;
      for (std::size_t a = 0; a < d; ++a) v += s[a] * pts[k][a];
      v -= f.values[ids[k]];
      const bool pref = trusted[ids[k]] && !f.spec.on_boundary(ids[k]);
      if (v > best || (v == best && pref && !best_pref)) {
        best = v;
        best_pref = pref;
      }
    }
    r.function.values[j] = best;
    r.saturation_mask[j] = best_pref ? 0 : 1;
  }
  return r;
}

ConjugateResult conjugate_grid(const GridFn& f, const GridSpec& dual, std::span<const std::uint8_t> untrusted) {
  f.require_proper("conjugate_grid");
  dual.validate();
  const std::size_t d = f.spec.dim();
  if (dual.dim() != d) throw InputError("conjugate: dual grid dimension differs from primal");
  if (d > 4) throw UnsupportedError("conjugate_grid supports at most 4 axes");

  if (!untrusted.empty() && untrusted.size() != f.values.size())
    throw InputError("untrusted mask size does not match grid");

  // Scratch buffers are reused across calls on the same thread.
  thread_local Workspace ws;
  auto& [cur, next, trust, next_t, x, sl, pass] = ws;
  ConjugateResult r{GridFn{dual, std::vector<double>(dual.size())}, std::vector<std::uint8_t>(dual.size())};
  std::vector<std::size_t> shape = f.spec.shape();

  // Between axes the buffers hold v with the running conjugate equal to −v
  // (+∞ marks −∞) and per-node trust; the first axis reads the input and
  // the last writes the result directly.
  for (std::size_t a = d; a-- > 0;) {
    const bool first = a + 1 == d, last = a == 0;
    fill_coords(x, f.spec.axes[a]);
    fill_coords(sl, dual.axes[a]);
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < a; ++k) outer *= shape[k];
    for (std::size_t k = a + 1; k < d; ++k) inner *= shape[k];
    const std::size_t n = shape[a], m = sl.size();
    const double* src = first ? f.values.data() : cur.data();
    const std::uint8_t* src_t = first ? (untrusted.empty() ? nullptr : untrusted.data()) : trust.data();
    if (!last) {
      next.resize(outer * m * inner);
      next_t.resize(next.size());
    }
    double* dst = last ? r.function.values.data() : next.data();
    std::uint8_t* dst_t = last ? r.saturation_mask.data() : next_t.data();
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t c = 0; c < inner; ++c) {
        const std::size_t in = o * n * inner + c, to = o * m * inner + c;
        const TrustView tv{src_t == nullptr ? nullptr : src_t + in, inner, first};
        pass.run(sl, x, {src + in, inner}, tv, {{dst + to, inner}, {dst_t + to, inner}, last ? 1.0 : -1.0, last});
      }
    }
    if (!last) {
      std::swap(cur, next);
      std::swap(trust, next_t);
    }
    shape[a] = m;
  }
  return r;
}

GridSpec default_dual_spec(const GridFn& f) {
  f.require_proper("default_dual_spec");
  GridSpec dual = f.spec;
  const auto shape = f.spec.shape();
  const std::size_t d = shape.size();
  for (std::size_t a = 0; a < d; ++a) {
    std::size_t stride = 1;
    for (std::size_t k = a + 1; k < d; ++k) stride *= shape[k];
    const double step = f.spec.axes[a].step();
    double lo = kPosInf, hi = kNegInf;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if ((i / stride) % shape[a] + 1 == shape[a]) continue;
      const double u = f.values[i], w = f.values[i + stride];
      if (u == kPosInf || w == kPosInf) continue;
      const double slope = (w - u) / step;
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
    }
    if (!(lo < hi)) {
      const double c = lo == kPosInf ? 0.0 : lo;
      lo = c - 1.0;
      hi = c + 1.0;
    }
    dual.axes[a].lo = lo;
    dual.axes[a].hi = hi;
  }
  return dual;
}

double conjugate_at(const GridFn& f, std::span<const double> s) {
  f.require_proper("conjugate_at");
  if (s.size() != f.spec.dim()) throw InputError("conjugate_at: dimension mismatch");
  double best = kNegInf;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] == kPosInf) continue;
    const RVec z = f.spec.point(i);
    double v = 0.0;
    for (std::size_t a = 0; a < z.size(); ++a) v += s[a] * z[a];
    best = std::max(best, v - f.values[i]);
  }
  return best;
}

MaxAffineFn conjugate_exact(const GeneratorFn& f) {
  f.validate();
  MaxAffineFn out{f.dim, {}, std::nullopt};
  for (const auto& g : f.generators) out.pieces.push_back(AffinePiece{g.point, Rational(-g.value)});
  return out;
}

GeneratorFn conjugate_exact(const MaxAffineFn& f) {
  f.validate();
  if (f.domain) throw UnsupportedError("exact conjugation of a max-affine function with a restricted domain; use the grid path");
  GeneratorFn out{f.dim, {}};
  for (const auto& p : f.pieces) out.generators.push_back(Generator{p.slope, Rational(-p.offset)});
  return out;
}

ConjugateResult j_transform(const GridFn& h, std::span<const std::uint8_t> untrusted) {
  return j_transform(h, h.spec, untrusted);
}

ConjugateResult j_transform(const GridFn& h, const GridSpec& output, std::span<const std::uint8_t> untrusted) {
  if (!swappable(h.spec)) throw InputError("j_transform: primal and dual axes of the input grid must match");
  if (!swappable(output)) throw InputError("j_transform: primal and dual axes of the output grid must match");
  const GridSpec dual = swap_spec(output);
  ConjugateResult c = conjugate_grid(h, dual, untrusted);
  return ConjugateResult{swap_blocks(c.function), swap_blocks(dual, c.saturation_mask)};
}

MaxAffineFn j_transform(const GeneratorFn& h) {
  if (h.dim % 2 != 0) throw InputError("j_transform: odd dimension");
  MaxAffineFn f = conjugate_exact(h);
  for (auto& p : f.pieces) p.slope = swap_halves(p.slope);
  return f;
}

GeneratorFn j_transform(const MaxAffineFn& h) {
  if (h.dim % 2 != 0) throw InputError("j_transform: odd dimension");
  GeneratorFn g = conjugate_exact(h);
  for (auto& gen : g.generators) gen.point = swap_halves(gen.point);
  return g;
}

ConjugateResult biconjugate(const GridFn& h) {
  ConjugateResult first = j_transform(h);
  return j_transform(first.function, h.spec, first.saturation_mask);
}

ConjugateResult biconjugate_plain(const GridFn& f) {
  ConjugateResult first = conjugate_grid(f, default_dual_spec(f));
  return conjugate_grid(first.function, f.spec, first.saturation_mask);
}

}  // namespace fitzkit
