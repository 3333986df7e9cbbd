#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace subrqa {

/// Exact rational with arbitrary-precision numerator and denominator.
/// Values are always kept in canonical form.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// q^e as an exact integer.
Integer ipow(std::uint64_t base, unsigned exponent);

double to_double(const Rational& r);
std::string to_string(const Rational& r);

/// Parses "a/b" or "a".
Rational parse_rational(const std::string& text);

/// The rational with the smallest denominator in the closed interval
/// [lo, hi] (Stern–Brocot descent via continued fractions). Requires lo <= hi.
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

/// Simplest rational within `tolerance` of `value`, or nothing if its
/// denominator exceeds `max_denominator`.
std::optional<Rational> snap_rational(double value, double tolerance,
                                      const Integer& max_denominator);

/// A rational quantity that may be +infinity (average line length when the
/// line density vanishes).
struct RationalOrInfinity {
  bool infinite = false;
  Rational value;

  static RationalOrInfinity infinity() { return {true, Rational(0)}; }
  static RationalOrInfinity finite(Rational v) { return {false, std::move(v)}; }

  bool operator==(const RationalOrInfinity& other) const {
    return infinite == other.infinite && (infinite || value == other.value);
  }
};

std::string to_string(const RationalOrInfinity& r);

}  // namespace subrqa
