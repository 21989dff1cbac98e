#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fitzkit/ext_real.hpp"
#include "fitzkit/region.hpp"

namespace fitzkit {

/// z ↦ slope·z + offset
struct AffinePiece {
  QVec slope;
  Rational offset;

  Rational eval(std::span<const Rational> z) const { return dot(slope, z) + offset; }
  bool operator==(const AffinePiece&) const = default;
};

/// A-form: max of affine pieces, +∞ off the optional domain.
struct MaxAffineFn {
  std::size_t dim = 0;
  std::vector<AffinePiece> pieces;
  std::optional<Region> domain;

  ExtRational eval(std::span<const Rational> z) const;
  void validate() const;
};

struct Generator {
  QVec point;
  Rational value;
  bool operator==(const Generator&) const = default;
};

/// V-form: the largest convex function below the generator values,
/// min { Σλ_k v_k : λ convex weights, Σλ_k p_k = z }, +∞ outside conv{p_k}.
struct GeneratorFn {
  std::size_t dim = 0;
  std::vector<Generator> generators;

  ExtRational eval(std::span<const Rational> z) const;
  void validate() const;
};

/// Drops pieces that never attain the max strictly (each one is tested
/// against the pieces still kept). Evaluation is unchanged.
MaxAffineFn prune(const MaxAffineFn& f);

/// Drops generators lying on or above the envelope of the others.
GeneratorFn prune(const GeneratorFn& f);

}  // namespace fitzkit
