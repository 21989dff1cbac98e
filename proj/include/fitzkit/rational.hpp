#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fitzkit {

using Rational = mpq_class;
using QVec = std::vector<Rational>;
using RVec = std::vector<double>;

/// Parses "7", "-3/4", "0.125", "1e-3" or "-2.5E2" into an exact rational.
Rational parse_rational(std::string_view text);

/// num/den in canonical form. mpq_class(num, den) alone is not reduced, and
/// GMP comparisons assume reduced operands.
Rational fraction(long num, long den);

/// Canonical "p/q" (or "p" for integers).
std::string to_string(const Rational& q);

/// Exact conversion; throws InputError for non-finite input.
Rational from_double(double v);
inline double to_double(const Rational& q) { return q.get_d(); }

QVec to_qvec(std::span<const double> v);
RVec to_rvec(std::span<const Rational> v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Rational squared_norm(std::span<const Rational> a);

}  // namespace fitzkit
