#include "subrqa/rational.hpp"

#include <cmath>
#include <sstream>

#include "subrqa/errors.hpp"

namespace subrqa {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

Integer ipow(std::uint64_t base, unsigned exponent) {
  Integer result;
  mpz_ui_pow_ui(result.get_mpz_t(), base, exponent);
  return result;
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_string(const RationalOrInfinity& r) {
  return r.infinite ? std::string("inf") : r.value.get_str();
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw ParseError("not a rational number: '" + text + "'", 0);
  }
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + text + "'", 0);
  r.canonicalize();
  return r;
}

namespace {

// Simplest rational in [lo, hi] for 0 <= lo <= hi, by recursion on the
// continued fraction expansion.
Rational simplest_nonnegative(const Rational& lo, const Rational& hi) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return Rational(fl);
  // lo is not an integer: if an integer lies in (lo, hi], take the smallest.
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  // Same integer part: recurse on the reciprocals of the fractional parts.
  Rational lo_frac = lo - fl;
  Rational hi_frac = hi - fl;
  Rational inner = simplest_nonnegative(1 / hi_frac, 1 / lo_frac);
  Rational result = fl + 1 / inner;
  result.canonicalize();
  return result;
}

}  // namespace

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw DomainError("simplest_rational_between: empty interval");
  if (lo <= 0 && hi >= 0) return Rational(0);
  if (hi < 0) return -simplest_nonnegative(-hi, -lo);
  return simplest_nonnegative(lo, hi);
}

std::optional<Rational> snap_rational(double value, double tolerance,
                                      const Integer& max_denominator) {
  if (!std::isfinite(value) || !(tolerance >= 0)) return std::nullopt;
  Rational lo(value - tolerance);
  Rational hi(value + tolerance);
  Rational r = simplest_rational_between(lo, hi);
  if (r.get_den() > max_denominator) return std::nullopt;
  return r;
}

}  // namespace subrqa
