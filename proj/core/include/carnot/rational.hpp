#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace carnot {

// All coordinates, durations and certified bounds in this library are exact
// arbitrary-precision rationals. No floating point is used anywhere.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p" or "p/q" with an optional leading minus sign; the result is in
// canonical reduced form. Throws carnot::Error (MalformedInput) on anything
// else, including a zero denominator.
Rational parse_rational(const std::string& text);

// Canonical "p" or "p/q" form, accepted back by parse_rational.
std::string to_string(const Rational& value);

Rational pow_rational(const Rational& base, unsigned exponent);

Rational abs_rational(const Rational& value);

// If value is the square of a rational, returns the nonnegative root.
std::optional<Rational> exact_sqrt(const Rational& value);

// Largest e with 2^e <= value; requires value > 0.
long floor_log2(const Rational& value);

// 2^e for possibly negative e.
Rational pow2(long e);

// Largest dyadic rational m * 2^k with a `bits`-bit mantissa that is <= the
// given positive value. Useful for replacing an unwieldy exact rational by
// a nearby one whose numerator and denominator stay small.
Rational dyadic_floor(const Rational& value, int bits);

}  // namespace carnot
