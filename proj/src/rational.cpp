#include "fitzkit/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "fitzkit/errors.hpp"
#include "fitzkit/ext_real.hpp"

namespace fitzkit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class pow10(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw InputError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    std::string num_digits = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? num.substr(1) : num;
    if (!all_digits(num_digits) || !all_digits(den))
      throw InputError("malformed rational literal '" + s + "'");
    if (num[0] == '+') num = num.substr(1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw InputError("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
  }

  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  std::string int_part, frac_part;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) int_part += s[i++];
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) frac_part += s[i++];
  }
  if (int_part.empty() && frac_part.empty()) throw InputError("malformed rational literal '" + s + "'");
  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::string exp_text;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) exp_text += s[i++];
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    if (digits.empty() || digits.size() > 6) throw InputError("malformed exponent in '" + s + "'");
    exponent = std::stol(exp_text + digits);
  }
  if (i != s.size()) throw InputError("trailing characters in rational literal '" + s + "'");

  mpz_class mantissa(int_part + frac_part, 10);
  exponent -= static_cast<long>(frac_part.size());
  Rational q;
  if (exponent >= 0) {
    q = Rational(mantissa * pow10(exponent));
  } else {
    q = Rational(mantissa, pow10(-exponent));
    q.canonicalize();
  }
  return negative ? Rational(-q) : q;
}

Rational fraction(long num, long den) {
  if (den == 0) throw InputError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational from_double(double v) {
  if (!std::isfinite(v)) throw InputError("cannot convert a non-finite double to a rational");
  return Rational(v);
}

QVec to_qvec(std::span<const double> v) {
  QVec out;
  out.reserve(v.size());
  for (double d : v) out.push_back(from_double(d));
  return out;
}

RVec to_rvec(std::span<const Rational> v) {
  RVec out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw InputError("dot: dimension mismatch");
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Rational squared_norm(std::span<const Rational> a) { return dot(a, a); }

std::string to_string(const ExtRational& v) {
  if (v.is_pos_inf()) return "+inf";
  if (v.is_neg_inf()) return "-inf";
  return to_string(v.value());
}

ExtRational parse_ext_rational(std::string_view text) {
  std::string s(text);
  if (s == "+inf" || s == "inf" || s == "Infinity" || s == "+Infinity") return ExtRational::pos_inf();
  if (s == "-inf" || s == "-Infinity") return ExtRational::neg_inf();
  return ExtRational(parse_rational(s));
}

double to_double(const ExtRational& v) {
  if (v.is_pos_inf()) return kPosInf;
  if (v.is_neg_inf()) return kNegInf;
  return v.value().get_d();
}

}  // namespace fitzkit
