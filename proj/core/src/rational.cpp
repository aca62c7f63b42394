#include "carnot/rational.hpp"

#include <cctype>

#include "carnot/error.hpp"

namespace carnot {

Rational parse_rational(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  const std::string body = text.substr(begin, end - begin);

  // Accept exactly [-]digits[/digits]; mpq_set_str is laxer than we want.
  std::size_t pos = 0;
  if (pos < body.size() && body[pos] == '-') ++pos;
  std::size_t digits = 0;
  while (pos < body.size() && std::isdigit(static_cast<unsigned char>(body[pos]))) {
    ++pos;
    ++digits;
  }
  if (digits == 0) throw Error(ErrorCode::MalformedInput, "bad rational literal '" + text + "'");
  if (pos < body.size()) {
    if (body[pos] != '/') throw Error(ErrorCode::MalformedInput, "bad rational literal '" + text + "'");
    ++pos;
    std::size_t den_digits = 0;
    while (pos < body.size() && std::isdigit(static_cast<unsigned char>(body[pos]))) {
      ++pos;
      ++den_digits;
    }
    if (den_digits == 0 || pos != body.size()) {
      throw Error(ErrorCode::MalformedInput, "bad rational literal '" + text + "'");
    }
  }

  Rational value(body);
  if (value.get_den() == 0) {
    throw Error(ErrorCode::MalformedInput, "zero denominator in '" + text + "'");
  }
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) {
  Rational canonical = value;
  canonical.canonicalize();
  return canonical.get_str();
}

Rational pow_rational(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational factor = base;
  unsigned e = exponent;
  while (e > 0) {
    if (e & 1u) result *= factor;
    factor *= factor;
    e >>= 1u;
  }
  return result;
}

Rational abs_rational(const Rational& value) { return value < 0 ? Rational(-value) : value; }

std::optional<Rational> exact_sqrt(const Rational& value) {
  if (value < 0) return std::nullopt;
  Rational canonical = value;
  canonical.canonicalize();
  const Integer num = canonical.get_num();
  const Integer den = canonical.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  Integer num_root, den_root;
  mpz_sqrt(num_root.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(den_root.get_mpz_t(), den.get_mpz_t());
  Rational root(num_root, den_root);
  root.canonicalize();
  return root;
}

long floor_log2(const Rational& value) {
  if (value <= 0) throw Error(ErrorCode::MalformedInput, "floor_log2 requires a positive value");
  Rational canonical = value;
  canonical.canonicalize();
  const Integer num = canonical.get_num();
  const Integer den = canonical.get_den();
  // bit sizes bracket the ratio within a factor of two; fix up exactly below
  const long guess = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                     static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  long e = guess;
  while (pow2(e) > canonical) --e;
  while (pow2(e + 1) <= canonical) ++e;
  return e;
}

Rational pow2(long e) {
  Integer big(1);
  if (e >= 0) {
    mpz_mul_2exp(big.get_mpz_t(), big.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(big);
  }
  mpz_mul_2exp(big.get_mpz_t(), big.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  Rational value(1, big);
  value.canonicalize();
  return value;
}

Rational dyadic_floor(const Rational& value, int bits) {
  if (value <= 0) throw Error(ErrorCode::MalformedInput, "dyadic_floor requires a positive value");
  if (bits < 1) throw Error(ErrorCode::MalformedInput, "dyadic_floor requires at least one bit");
  const long k = floor_log2(value) - bits + 1;
  Rational scaled = Rational(value / pow2(k));
  scaled.canonicalize();
  Integer mantissa = scaled.get_num() / scaled.get_den();
  Rational result = Rational(mantissa) * pow2(k);
  result.canonicalize();
  return result;
}

}  // namespace carnot
