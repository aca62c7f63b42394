#include "carnot/norm.hpp"

#include <vector>

namespace carnot {

namespace {

void require_first_layer(const LieVector& v) {
  if (!v.algebra()) throw Error(ErrorCode::MalformedInput, "vector has no algebra attached");
  if (!v.is_zero() && v.highest_layer() > 1) {
    throw Error(ErrorCode::WrongLayer, "norms are defined on first-layer vectors only");
  }
}

unsigned long small_exponent(const Integer& value, const char* what) {
  if (value <= 0 || value > 1024) {
    throw Error(ErrorCode::MalformedInput, std::string(what) + " must lie in [1, 1024]");
  }
  return value.get_ui();
}

Rational int_pow(const Rational& base, unsigned long exponent) {
  return pow_rational(base, static_cast<unsigned>(exponent));
}

// Exact t^(a/b) when it is rational (t >= 0).
std::optional<Rational> root_pow_exact(const Rational& t, unsigned long a, unsigned long b) {
  if (t == 0) return Rational(0);
  const Rational power = int_pow(t, a);
  Integer num_root, den_root;
  const int num_exact =
      mpz_root(num_root.get_mpz_t(), power.get_num().get_mpz_t(), static_cast<unsigned long>(b));
  if (num_exact == 0) return std::nullopt;
  const int den_exact =
      mpz_root(den_root.get_mpz_t(), power.get_den().get_mpz_t(), static_cast<unsigned long>(b));
  if (den_exact == 0) return std::nullopt;
  Rational root(num_root, den_root);
  root.canonicalize();
  return root;
}

// Rational enclosure lo <= t^(a/b) <= hi with hi - lo <= precision; exact
// roots collapse to a point. Bisection preserves lo^b <= t^a <= hi^b.
std::pair<Rational, Rational> root_pow_bounds(const Rational& t, unsigned long a, unsigned long b,
                                              const Rational& precision) {
  if (t == 0) return {Rational(0), Rational(0)};
  if (auto exact = root_pow_exact(t, a, b)) return {*exact, *exact};
  const Rational target = int_pow(t, a);
  const long e = floor_log2(target);
  // 2^floor(e/b) and 2^ceil((e+1)/b) bracket target^(1/b)
  long lo_exp = e >= 0 ? e / static_cast<long>(b)
                       : -((-e + static_cast<long>(b) - 1) / static_cast<long>(b));
  long hi_exp = (e + 1) >= 0
                    ? (e + 1 + static_cast<long>(b) - 1) / static_cast<long>(b)
                    : -((-(e + 1)) / static_cast<long>(b));
  Rational lo = pow2(lo_exp);
  Rational hi = pow2(hi_exp);
  while (hi - lo > precision) {
    Rational mid = (lo + hi) / 2;
    if (int_pow(mid, b) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

struct PExponent {
  unsigned long a = 0;  // p = a/b in lowest terms, a > b >= 1
  unsigned long b = 0;
};

PExponent p_exponent(const FirstLayerNorm& norm) {
  Rational p = norm.p;
  p.canonicalize();
  PExponent pe;
  pe.a = small_exponent(p.get_num(), "p-norm numerator");
  pe.b = small_exponent(p.get_den(), "p-norm denominator");
  return pe;
}

// Scale out the largest absolute coordinate. Working on the normalized
// vector makes every computation a pure function of (v / mu, tolerance / mu),
// which yields exact homogeneity of the certified bounds.
struct Normalized {
  Rational mu;                    // positive scale, zero only for v = 0
  std::vector<Rational> coords;   // |c| / mu, the largest equal to 1
};

Normalized normalize(const LieVector& v) {
  Normalized n;
  n.mu = 0;
  for (const auto& [index, coeff] : v.coords()) {
    (void)index;
    const Rational magnitude = abs_rational(coeff);
    if (magnitude > n.mu) n.mu = magnitude;
  }
  if (n.mu == 0) return n;
  for (const auto& [index, coeff] : v.coords()) {
    (void)index;
    n.coords.push_back(abs_rational(coeff) / n.mu);
  }
  return n;
}

// Enclosure of |v| for a normalized coordinate list, refined until its width
// is at most `tolerance`. The running upper end is a minimum over refinement
// stages, so tightening the tolerance can never increase the result.
CertifiedBound lp_upper(const PExponent& pe, const Normalized& n, const Rational& tolerance) {
  // exact fast path: every power and the final root rational
  {
    Rational sum(0);
    bool all_exact = true;
    for (const Rational& c : n.coords) {
      if (auto exact = root_pow_exact(c, pe.a, pe.b)) {
        sum += *exact;
      } else {
        all_exact = false;
        break;
      }
    }
    if (all_exact) {
      if (auto exact = root_pow_exact(sum, pe.b, pe.a)) {
        return CertifiedBound{n.mu * *exact, n.mu * tolerance, true};
      }
    }
  }

  const auto terms = static_cast<unsigned long>(n.coords.size());
  Rational best_hi;
  Rational best_lo(0);
  bool have_hi = false;
  Rational precision(1);
  for (int stage = 0;; ++stage) {
    if (stage > 0) precision /= 16;
    Rational sum_lo(0), sum_hi(0);
    const Rational term_precision = precision / Rational(terms);
    for (const Rational& c : n.coords) {
      const auto [lo, hi] = root_pow_bounds(c, pe.a, pe.b, term_precision);
      sum_lo += lo;
      sum_hi += hi;
    }
    const auto [lo, discard] = root_pow_bounds(sum_lo, pe.b, pe.a, precision);
    (void)discard;
    const auto [discard2, hi] = root_pow_bounds(sum_hi, pe.b, pe.a, precision);
    (void)discard2;
    if (!have_hi || hi < best_hi) {
      best_hi = hi;
      have_hi = true;
    }
    if (lo > best_lo) best_lo = lo;
    if (best_hi - best_lo <= tolerance) break;
  }
  return CertifiedBound{n.mu * best_hi, n.mu * tolerance, false};
}

CertifiedBound euclidean_upper(const Normalized& n, const Rational& tolerance) {
  Rational sum(0);
  for (const Rational& c : n.coords) sum += c * c;
  if (auto root = exact_sqrt(sum)) {
    return CertifiedBound{n.mu * *root, n.mu * tolerance, true};
  }
  // max |c| and sum |c| bracket the Euclidean norm
  Rational lo(1);
  Rational hi(0);
  for (const Rational& c : n.coords) hi += c;
  while (hi - lo > tolerance) {
    Rational mid = (lo + hi) / 2;
    if (mid * mid <= sum) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return CertifiedBound{n.mu * hi, n.mu * tolerance, false};
}

}  // namespace

FirstLayerNorm make_norm(NormFamily family, std::optional<Rational> parameter) {
  if (family == NormFamily::Euclidean) {
    if (parameter.has_value()) {
      throw Error(ErrorCode::MalformedInput, "the Euclidean family takes no parameter");
    }
    return FirstLayerNorm{NormFamily::Euclidean, Rational(2)};
  }
  if (!parameter.has_value()) {
    throw Error(ErrorCode::MalformedInput, "the l^p family needs a rational exponent p");
  }
  Rational p = *parameter;
  p.canonicalize();
  if (p <= 1) {
    throw Error(ErrorCode::NotStrictlyConvex,
                "p = " + to_string(p) + " is not strictly convex (need 1 < p < infinity)");
  }
  FirstLayerNorm norm{NormFamily::Lp, p};
  p_exponent(norm);  // range validation
  return norm;
}

CertifiedBound certified_norm_upper(const FirstLayerNorm& norm, const LieVector& v,
                                    const Rational& tolerance) {
  require_first_layer(v);
  if (tolerance <= 0) throw Error(ErrorCode::MalformedInput, "tolerance must be positive");
  const Normalized n = normalize(v);
  if (n.mu == 0) return CertifiedBound{Rational(0), tolerance, true};
  if (n.coords.size() == 1) {
    // single support: |c e_k| = |c| in both families
    return CertifiedBound{n.mu, tolerance, true};
  }
  if (norm.family == NormFamily::Euclidean) return euclidean_upper(n, tolerance / n.mu);
  return lp_upper(p_exponent(norm), n, tolerance / n.mu);
}

bool check_upper_bound(const FirstLayerNorm& norm, const LieVector& v, const Rational& q) {
  require_first_layer(v);
  if (q < 0) return false;
  if (norm.family == NormFamily::Euclidean) {
    Rational sum(0);
    for (const auto& [index, coeff] : v.coords()) {
      (void)index;
      sum += coeff * coeff;
    }
    return q * q >= sum;
  }
  const PExponent pe = p_exponent(norm);
  const Normalized n = normalize(v);
  if (n.mu == 0) return true;
  const Rational scaled = q / n.mu;
  const Rational power = int_pow(scaled, pe.a);
  Rational precision(1);
  for (int stage = 0; stage < 64; ++stage, precision /= 16) {
    Rational sum_lo(0), sum_hi(0);
    const Rational term_precision = precision / Rational(n.coords.size());
    for (const Rational& c : n.coords) {
      const auto [lo, hi] = root_pow_bounds(c, pe.a, pe.b, term_precision);
      sum_lo += lo;
      sum_hi += hi;
    }
    // q >= |v|  iff  (q/mu)^a >= (sum |c/mu|^p)^b
    if (power >= int_pow(sum_hi, pe.b)) return true;
    if (power < int_pow(sum_lo, pe.b)) return false;
    if (sum_lo == sum_hi) return power >= int_pow(sum_lo, pe.b);
  }
  return false;  // undecided at maximal refinement: reject conservatively
}

std::string norm_tag(const FirstLayerNorm& norm) {
  if (norm.family == NormFamily::Euclidean) return "euclidean";
  return "lp:" + to_string(norm.p);
}

FirstLayerNorm parse_norm(const std::string& tag) {
  if (tag == "euclidean") return make_norm(NormFamily::Euclidean);
  if (tag.rfind("lp:", 0) == 0) {
    const std::string parameter = tag.substr(3);
    if (parameter == "inf" || parameter == "infinity") {
      throw Error(ErrorCode::NotStrictlyConvex,
                  "the sup norm unit sphere contains segments (need 1 < p < infinity)");
    }
    return make_norm(NormFamily::Lp, parse_rational(parameter));
  }
  throw Error(ErrorCode::MalformedInput, "unknown norm tag '" + tag + "'");
}

}  // namespace carnot
