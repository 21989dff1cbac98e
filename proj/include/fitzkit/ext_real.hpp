#pragma once

#include <compare>
#include <limits>
#include <string>
#include <utility>

#include "fitzkit/errors.hpp"
#include "fitzkit/rational.hpp"

namespace fitzkit {

/// Grid sentinel for +∞. Grid code never stores a "large" float in its place.
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Extended real over an exact scalar: a finite value, +∞ or −∞.
///
/// Addition follows the convex-analysis convention r + ∞ = ∞ for r > −∞;
/// (+∞) + (−∞) is rejected since no proper function produces it.
template <class T>
class Extended {
 public:
  enum class Kind { finite, pos_inf, neg_inf };

  Extended() : kind_(Kind::finite), value_(0) {}
  Extended(T v) : kind_(Kind::finite), value_(std::move(v)) {}  // NOLINT

  static Extended pos_inf() { return Extended(Kind::pos_inf); }
  static Extended neg_inf() { return Extended(Kind::neg_inf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  const T& value() const {
    if (!is_finite()) throw InputError("value() on an infinite extended real");
    return value_;
  }

  friend Extended operator+(const Extended& a, const Extended& b) {
    if (a.is_pos_inf() || b.is_pos_inf()) {
      if (a.is_neg_inf() || b.is_neg_inf()) throw InputError("(+inf) + (-inf) is undefined");
      return pos_inf();
    }
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    return Extended(T(a.value_ + b.value_));
  }

  friend Extended operator-(const Extended& a) {
    if (a.is_pos_inf()) return neg_inf();
    if (a.is_neg_inf()) return pos_inf();
    return Extended(T(-a.value_));
  }

  friend Extended operator-(const Extended& a, const Extended& b) { return a + (-b); }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
    auto rank = [](Kind k) { return k == Kind::neg_inf ? 0 : (k == Kind::finite ? 1 : 2); };
    if (a.kind_ != b.kind_ || !a.is_finite()) return rank(a.kind_) <=> rank(b.kind_);
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  explicit Extended(Kind k) : kind_(k), value_(0) {}

  Kind kind_;
  T value_;
};

using ExtRational = Extended<Rational>;

/// "+inf", "-inf" or the canonical rational text.
std::string to_string(const ExtRational& v);
ExtRational parse_ext_rational(std::string_view text);
double to_double(const ExtRational& v);

}  // namespace fitzkit
