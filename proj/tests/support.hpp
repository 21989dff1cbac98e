#pragma once

#include <string>
#include <vector>

#include "fitzkit/operators.hpp"
#include "oracles.hpp"

inline fitzkit::Rational q(const char* s) { return fitzkit::parse_rational(s); }

inline fitzkit::FiniteOperator to_operator(const std::vector<oracle::Pair>& t) {
  fitzkit::FiniteOperator op;
  for (const auto& p : t) op.pairs.push_back({p.y, p.ystar});
  return op;
}

inline std::vector<oracle::Pair> to_pairs(const fitzkit::FiniteOperator& t) {
  std::vector<oracle::Pair> out;
  for (const auto& p : t.pairs) out.push_back({p.x, p.xstar});
  return out;
}
