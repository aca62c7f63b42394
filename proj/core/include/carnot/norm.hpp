#pragma once

#include <optional>

#include "carnot/algebra.hpp"

namespace carnot {

enum class NormFamily { Euclidean, Lp };

// Strictly convex norm on the first layer, expressed in the V1 basis
// coordinates of whatever algebra a vector lives in. Only analytic families
// are supported: Euclidean and l^p with rational p in (1, infinity); both
// are strictly convex by construction.
struct FirstLayerNorm {
  NormFamily family = NormFamily::Euclidean;
  Rational p = Rational(2);  // meaningful for the Lp family only
};

FirstLayerNorm make_norm(NormFamily family, std::optional<Rational> parameter = std::nullopt);

// One-sided certified enclosure: value >= |v| and value - |v| <= tolerance,
// both statements exact. When `exact` is set the value equals |v|.
struct CertifiedBound {
  Rational value;
  Rational tolerance;
  bool exact = false;
};

// Smallest practical rational q with q >= |v|, within `tolerance` of |v|.
// Deterministic; monotone in tolerance (a smaller tolerance never returns a
// larger q); exactly homogeneous: the bound for (lambda v, lambda t) is
// lambda times the bound for (v, t), for rational lambda > 0.
CertifiedBound certified_norm_upper(const FirstLayerNorm& norm, const LieVector& v,
                                    const Rational& tolerance);

// Exact soundness check that q >= |v|; used by certificate verification.
// For the Euclidean family this is a single exact comparison; for l^p the
// claim is decided through refining rational enclosures and returns false
// if undecidable at maximal refinement (never accepts a false claim).
bool check_upper_bound(const FirstLayerNorm& norm, const LieVector& v, const Rational& q);

// Serialization tag: "euclidean" or "lp:<p>"; parse_norm accepts the same.
std::string norm_tag(const FirstLayerNorm& norm);
FirstLayerNorm parse_norm(const std::string& tag);

}  // namespace carnot
