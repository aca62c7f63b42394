// Replacement curves that beat the corner: the step-2 six-segment shortcut,
// the correction solver, horizontal realization of vertical elements, and
// the recursive assembly that certifies a shorter candidate at every step.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/path.hpp"

namespace carnot {

// Correction elements in the next-to-top layer.  Inserting their scaled
// exponentials at the start, middle and end of the candidate cancels the
// lift discrepancy exactly.
struct CorrectionTriple {
  LieVector y1;
  LieVector y2;
  LieVector y3;
};

// Everything needed to replay one certified comparison: which corner, in
// which algebra, under which norm, the candidate path that beats it, both
// certified length bounds, and the identities checked along the way.
struct ShortcutCertificate {
  AlgebraHandle algebra;
  FirstLayerNorm norm;
  LieVector x1;
  LieVector x2;
  Rational eta;      // selected dilation parameter
  Rational epsilon;  // eta^(step-1), the corner cutting scale
  HorizontalPath candidate;
  CertifiedBound corner_bound;     // on |x1| + |x2|
  CertifiedBound candidate_bound;  // on the candidate's length
  Rational margin;                 // corner_bound.value - candidate_bound.value
  bool endpoint_ok = false;        // exact endpoint identity was checked
  std::vector<std::string> transcript;
};

struct ShortcutConfig {
  FirstLayerNorm norm = make_norm(NormFamily::Euclidean);
  // When set, skip the search at the entry level and use this eta as given.
  std::optional<Rational> fixed_eta;
  Rational eta_start = Rational(1, 4);
  int max_halvings = 40;
  // Required margin for the certificate at the entry level; 0 means any
  // strictly positive certified margin is accepted.
  Rational margin_threshold = Rational(1, 1000000);
  // Slack budget for each certified bound.
  Rational tolerance = Rational(1, 1000000000);
};

// Six-segment replacement of the corner in a step-2 algebra, developed from
// exp(X1): runs within distance epsilon of the corner point and returns to
// exp(X2) exactly.  Needs 0 < epsilon < 1/2 and independent generators.
HorizontalPath heisenberg_shortcut(const LieVector& x1, const LieVector& x2,
                                   const Rational& epsilon);

// Exact solution (W1, W2) in the next-to-top layer of
//   [x1, W1] + [x2, W2] = z,   z in the top layer.
// The system is underdetermined; the solution is the one produced by a
// fixed pivoting order with free coordinates set to zero, so it is
// reproducible and minimizes support with respect to that order.
std::pair<LieVector, LieVector> bracket_decompose(const LieVector& z, const LieVector& x1,
                                                  const LieVector& x2);

// Correction triple for a central discrepancy h with log(h) in the top
// layer: with (W1, W2) = bracket_decompose(log h, x1, x2) returns
//   Y1 = W1,  Y2 = -2 W1 - 2 W2,  Y3 = W1 + 2 W2,
// which satisfies Y1 + Y2 + Y3 = 0 and [x1, Y1] + [x2, Y2/2 + Y3] = log h
// exactly; both identities are rechecked before returning.
CorrectionTriple solve_correction(const GroupPoint& h, const LieVector& x1,
                                  const LieVector& x2);

// Horizontal word from the identity whose endpoint is exactly exp(y), for y
// concentrated in a single layer j >= 2.  Built from nested group-commutator
// words with exact residue correction layer by layer.
HorizontalPath realize_vertical(const LieVector& y);

// General form: exact horizontal word for an arbitrary group point.
HorizontalPath realize_group(const GroupPoint& g);

// The seven-part candidate at step s >= 3: three dilated correction words
// around the two corner legs and a dilated copy of the lifted inner
// candidate, developed from exp(x1) and ending at exp(x2) exactly.
// `inner` must certify the projected corner in the top-layer quotient.
HorizontalPath build_candidate(const LieVector& x1, const LieVector& x2, const Rational& eta,
                               const ShortcutCertificate& inner);

// Full certified construction: normalizes the generators by certified
// division, recurses through the top-layer quotients down to step 2, and
// searches the halving schedule for an eta whose certified margin meets the
// configured requirement.
ShortcutCertificate recursive_shortcut(const LieVector& x1, const LieVector& x2,
                                       const ShortcutConfig& config);

// True when the two certified bounds alone prove the candidate strictly
// shorter than the corner: the candidate's upper bound must undercut the
// corner's certified lower bound, which is its value when exact and its
// value minus its tolerance otherwise.
bool certifies_shorter(const CertifiedBound& corner_bound, const CertifiedBound& candidate_bound);

}  // namespace carnot
