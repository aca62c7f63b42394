#include "carnot/shortcut.hpp"

#include <functional>
#include <iterator>
#include <sstream>
#include <utility>
#include <vector>

#include "carnot/bch.hpp"
#include "carnot/error.hpp"
#include "carnot/linalg.hpp"

namespace carnot {
namespace {

void require_first_layer_pair(const LieVector& x1, const LieVector& x2) {
  require_same_algebra(x1, x2);
  if (!x1.algebra()) {
    throw Error(ErrorCode::MalformedInput, "generators must be attached to an algebra");
  }
  if (x1.is_zero() || x1.highest_layer() > 1 || x2.is_zero() || x2.highest_layer() > 1) {
    throw Error(ErrorCode::WrongLayer, "generators must be nonzero first-layer vectors");
  }
  const AlgebraHandle& algebra = x1.algebra();
  Matrix rows(2, std::vector<Rational>(algebra->rank(), Rational(0)));
  for (const auto& [index, value] : x1.coords()) rows[0][index] = value;
  for (const auto& [index, value] : x2.coords()) rows[1][index] = value;
  if (matrix_rank(rows) < 2) {
    throw Error(ErrorCode::LinearlyDependent, "generators are linearly dependent");
  }
}

// Power of two whose exponent is about log2(magnitude) / depth.  A
// commutator word for c[b, U] splits the scale c between the generator leg
// and the recursively realized arm; distributing it evenly across the
// nesting depth keeps both factors moderate, which keeps the certified
// length of the word small.  Powers of two keep every coordinate rational.
Rational balanced_factor(const Rational& magnitude, int depth) {
  const long e = floor_log2(magnitude);
  long m = e / depth;
  if (e < 0 && e % depth != 0) m -= 1;
  return pow2(m);
}

std::vector<Segment> raw_word(const LieVector& v);

// Group commutator of exp(leg * generator) and the raw word for `arm`,
// spelled out as segments: leg out, arm word, leg back, arm word reversed.
std::vector<Segment> commutator_word(const AlgebraHandle& algebra, int generator_index,
                                     const Rational& leg, const LieVector& arm) {
  LieVector generator_move = leg * basis_vector(algebra, generator_index);
  std::vector<Segment> arm_word = raw_word(arm);
  std::vector<Segment> word;
  word.reserve(arm_word.size() * 2 + 2);
  word.push_back({generator_move, Rational(1)});
  word.insert(word.end(), arm_word.begin(), arm_word.end());
  word.push_back({-generator_move, Rational(1)});
  for (auto it = arm_word.rbegin(); it != arm_word.rend(); ++it) {
    word.push_back({-it->direction, it->duration});
  }
  return word;
}

// Horizontal word developing to exp(v) modulo layers above v's own layer.
// The single-layer input is decomposed as a combination of brackets of a
// generator with a basis element one layer below; each term becomes a
// commutator word whose arm is realized by recursion one layer down, so the
// recursion bottoms out at the first layer.  Whatever the word picks up in
// higher layers is cleaned up afterwards by the caller's residue loop.
std::vector<Segment> raw_word(const LieVector& v) {
  if (v.is_zero()) return {};
  const AlgebraHandle& algebra = v.algebra();
  const int layer = v.lowest_layer();
  if (v.highest_layer() != layer) {
    throw Error(ErrorCode::InvariantViolation, "raw realization word needs a single-layer input");
  }
  if (layer == 1) {
    return {{v, Rational(1)}};
  }
  const int rank = algebra->rank();
  const int below_start = algebra->layer_start(layer - 1);
  const int below_dim = algebra->layer_dim(layer - 1);
  const int here_start = algebra->layer_start(layer);
  const int here_dim = algebra->layer_dim(layer);
  Matrix system(here_dim,
                std::vector<Rational>(static_cast<size_t>(rank) * below_dim, Rational(0)));
  for (int i = 0; i < rank; ++i) {
    for (int t = 0; t < below_dim; ++t) {
      for (const auto& [k, c] : algebra->table(i, below_start + t)) {
        system[k - here_start][i * below_dim + t] = c;
      }
    }
  }
  std::vector<Rational> target(here_dim, Rational(0));
  for (const auto& [k, c] : v.coords()) target[k - here_start] = c;
  auto solution = solve_linear(system, target);
  if (!solution) {
    throw Error(ErrorCode::InvariantViolation,
                "layer escapes the brackets of the layer below; the algebra is not stratified");
  }
  std::vector<Segment> word;
  for (int i = 0; i < rank; ++i) {
    for (int t = 0; t < below_dim; ++t) {
      const Rational& c = (*solution)[i * below_dim + t];
      if (c == 0) continue;
      const Rational leg = balanced_factor(abs_rational(c), layer);
      LieVector arm = Rational(c / leg) * basis_vector(algebra, below_start + t);
      std::vector<Segment> piece = commutator_word(algebra, i, leg, arm);
      word.insert(word.end(), std::make_move_iterator(piece.begin()),
                  std::make_move_iterator(piece.end()));
    }
  }
  return word;
}

// Word for exp(v + residue) whose residue starts two layers above v instead
// of one.  Negating every direction of a word applies the grading
// automorphism that scales layer m by (-1)^m, so doubling the word for v/2
// with its direction-flipped copy (even layer) or order-reversed copy (odd
// layer) cancels the first residue layer outright.  The expensive cleanup
// words one layer up never need to be emitted, which keeps the certified
// length of the realization small.
std::vector<Segment> sym_word(const LieVector& v, int layer) {
  std::vector<Segment> half = raw_word(Rational(1, 2) * v);
  std::vector<Segment> word = half;
  word.reserve(half.size() * 2);
  if (layer % 2 == 0) {
    for (const Segment& segment : half) {
      word.push_back({-segment.direction, segment.duration});
    }
  } else {
    word.insert(word.end(), half.rbegin(), half.rend());
  }
  return word;
}

// Representation cleanup: a segment whose direction is a positive multiple
// of its predecessor's extends the predecessor.  Endpoint and length are
// unchanged, exactly.
std::vector<Segment> merge_parallel(std::vector<Segment> segments) {
  std::vector<Segment> merged;
  merged.reserve(segments.size());
  for (auto& segment : segments) {
    if (segment.duration == 0 || segment.direction.is_zero()) continue;
    if (!merged.empty()) {
      Segment& last = merged.back();
      const auto& previous_coords = last.direction.coords();
      const auto& next_coords = segment.direction.coords();
      if (previous_coords.size() == next_coords.size() &&
          previous_coords.begin()->first == next_coords.begin()->first) {
        Rational scale(next_coords.begin()->second / previous_coords.begin()->second);
        if (scale > 0 && segment.direction == scale * last.direction) {
          last.duration += scale * segment.duration;
          continue;
        }
      }
    }
    merged.push_back(std::move(segment));
  }
  return merged;
}

GroupPoint develop(const AlgebraHandle& algebra, const std::vector<Segment>& word) {
  GroupPoint point = identity(algebra);
  for (const Segment& segment : word) {
    LieVector move = segment.direction;
    move *= segment.duration;
    point = bch_product(point, exp_point(move));
  }
  return point;
}

Rational bound_slack(const CertifiedBound& bound) {
  return bound.exact ? Rational(0) : bound.tolerance;
}

std::string describe_bound(const CertifiedBound& bound) {
  std::ostringstream out;
  out << to_string(bound.value);
  if (bound.exact) {
    out << " (exact)";
  } else {
    out << " (slack <= " << to_string(bound.tolerance) << ")";
  }
  return out.str();
}

}  // namespace

HorizontalPath realize_group(const GroupPoint& g) {
  const AlgebraHandle& algebra = g.algebra();
  if (!algebra) {
    throw Error(ErrorCode::MalformedInput, "realization needs a point attached to an algebra");
  }
  std::vector<Segment> segments;
  GroupPoint remaining = g;
  int previous_layer = 0;
  // Each pass emits a word matching the lowest remaining layer exactly; the
  // exact residue it leaves sits strictly higher, so the loop climbs
  // through the layers and stops at the step.  Top-layer words are already
  // exact, so the symmetrized doubling is skipped there.
  while (!remaining.is_identity()) {
    const int layer = remaining.log.lowest_layer();
    if (layer <= previous_layer) {
      throw Error(ErrorCode::InvariantViolation, "realization residue failed to climb layers");
    }
    previous_layer = layer;
    LieVector component = layer_component(remaining.log, layer);
    std::vector<Segment> word =
        layer == algebra->step() ? raw_word(component) : sym_word(component, layer);
    remaining = bch_product(invert(develop(algebra, word)), remaining);
    segments.insert(segments.end(), std::make_move_iterator(word.begin()),
                    std::make_move_iterator(word.end()));
  }
  return HorizontalPath(algebra, merge_parallel(std::move(segments)));
}

HorizontalPath realize_vertical(const LieVector& y) {
  if (!y.algebra()) {
    throw Error(ErrorCode::MalformedInput, "realization needs a vector attached to an algebra");
  }
  if (y.is_zero()) {
    return HorizontalPath(y.algebra(), {});
  }
  if (y.lowest_layer() != y.highest_layer()) {
    throw Error(ErrorCode::MixedLayers,
                "realization input spans several layers; decompose it first");
  }
  if (y.lowest_layer() == 1) {
    throw Error(ErrorCode::WrongLayer,
                "first-layer vectors are horizontal already; realization corrects layers >= 2");
  }
  return realize_group(exp_point(y));
}

HorizontalPath heisenberg_shortcut(const LieVector& x1, const LieVector& x2,
                                   const Rational& epsilon) {
  require_first_layer_pair(x1, x2);
  if (x1.algebra()->step() != 2) {
    throw Error(ErrorCode::MalformedInput, "the six-segment shortcut lives in step-2 algebras");
  }
  if (epsilon <= 0 || epsilon >= Rational(1, 2)) {
    throw Error(ErrorCode::EpsilonOutOfRange, "the six-segment shortcut needs 0 < epsilon < 1/2");
  }
  const Rational one(1);
  const Rational half(1, 2);
  std::vector<Segment> pieces;
  pieces.push_back({-x1, Rational(one - epsilon)});
  pieces.push_back({x2 - x1, epsilon});
  pieces.push_back({x2, Rational(half - epsilon)});
  pieces.push_back({-x1, Rational(epsilon * epsilon)});
  pieces.push_back({x2, half});
  pieces.push_back({x1, Rational(epsilon * epsilon)});
  return HorizontalPath(x1.algebra(), std::move(pieces));
}

std::pair<LieVector, LieVector> bracket_decompose(const LieVector& z, const LieVector& x1,
                                                  const LieVector& x2) {
  require_first_layer_pair(x1, x2);
  const AlgebraHandle& algebra = x1.algebra();
  if (algebra->rank() != 2) {
    throw Error(ErrorCode::UnsupportedRank, "the decomposition works in the rank-2 reduction");
  }
  const int s = algebra->step();
  if (s < 3) {
    throw Error(ErrorCode::MalformedInput, "the decomposition needs step >= 3");
  }
  if (!z.is_zero()) {
    require_same_algebra(z, x1);
    if (z.lowest_layer() != s || z.highest_layer() != s) {
      throw Error(ErrorCode::WrongLayer, "the decomposed vector must lie in the top layer");
    }
  }
  const int below_start = algebra->layer_start(s - 1);
  const int below_dim = algebra->layer_dim(s - 1);
  const int top_start = algebra->layer_start(s);
  const int top_dim = algebra->layer_dim(s);
  // Unknowns: the next-to-top coordinates of W1, then those of W2.  The
  // fixed column order plus zero free coordinates makes the solution
  // reproducible and supported on the earliest usable basis elements.
  Matrix system(top_dim,
                std::vector<Rational>(2 * static_cast<size_t>(below_dim), Rational(0)));
  for (int which = 0; which < 2; ++which) {
    const LieVector& x = which == 0 ? x1 : x2;
    for (int t = 0; t < below_dim; ++t) {
      LieVector column = bracket(x, basis_vector(algebra, below_start + t));
      for (const auto& [k, c] : column.coords()) {
        system[k - top_start][which * below_dim + t] = c;
      }
    }
  }
  std::vector<Rational> target(top_dim, Rational(0));
  for (const auto& [k, c] : z.coords()) target[k - top_start] = c;
  auto solution = solve_linear(system, target);
  if (!solution) {
    throw Error(ErrorCode::InvariantViolation,
                "top layer escapes [x1, .] + [x2, .]; the first layer does not generate");
  }
  LieVector w1 = zero_vector(algebra);
  LieVector w2 = zero_vector(algebra);
  for (int t = 0; t < below_dim; ++t) {
    w1.set_coord(below_start + t, (*solution)[t]);
    w2.set_coord(below_start + t, (*solution)[below_dim + t]);
  }
  if (!(LieVector(bracket(x1, w1) + bracket(x2, w2)) == z)) {
    throw Error(ErrorCode::InvariantViolation, "decomposition back-substitution failed");
  }
  return {w1, w2};
}

CorrectionTriple solve_correction(const GroupPoint& h, const LieVector& x1,
                                  const LieVector& x2) {
  if (!h.algebra()) {
    throw Error(ErrorCode::MalformedInput, "the discrepancy must be attached to an algebra");
  }
  const int s = h.algebra()->step();
  if (!h.is_identity() && (h.log.lowest_layer() != s || h.log.highest_layer() != s)) {
    throw Error(ErrorCode::WrongLayer, "the discrepancy logarithm must lie in the top layer");
  }
  auto [w1, w2] = bracket_decompose(h.log, x1, x2);
  CorrectionTriple triple;
  triple.y1 = w1;
  triple.y2 = Rational(-2) * LieVector(w1 + w2);
  triple.y3 = w1 + Rational(2) * w2;
  if (!LieVector(triple.y1 + triple.y2 + triple.y3).is_zero()) {
    throw Error(ErrorCode::InvariantViolation, "correction triple does not sum to zero");
  }
  LieVector weighted = Rational(1, 2) * triple.y2 + triple.y3;
  if (!(LieVector(bracket(x1, triple.y1) + bracket(x2, weighted)) == h.log)) {
    throw Error(ErrorCode::InvariantViolation, "correction triple misses the discrepancy");
  }
  return triple;
}

HorizontalPath build_candidate(const LieVector& x1, const LieVector& x2, const Rational& eta,
                               const ShortcutCertificate& inner) {
  require_first_layer_pair(x1, x2);
  const AlgebraHandle& algebra = x1.algebra();
  if (algebra->rank() != 2) {
    throw Error(ErrorCode::UnsupportedRank, "the assembly works in the rank-2 reduction");
  }
  const int s = algebra->step();
  if (s < 3) {
    throw Error(ErrorCode::MalformedInput,
                "the seven-part assembly starts at step 3; step 2 uses the six-segment shortcut");
  }
  if (eta <= 0) {
    throw Error(ErrorCode::EtaOutOfRange, "eta must be positive");
  }
  const Rational epsilon = pow_rational(eta, static_cast<unsigned>(s - 1));
  const Rational lambda = pow_rational(eta, static_cast<unsigned>(s));
  if (epsilon >= Rational(1, 2)) {
    throw Error(ErrorCode::EtaOutOfRange, "eta^(step-1) must stay below 1/2");
  }
  QuotientMapHandle map = quotient_map(algebra);
  if (!inner.algebra || !same_algebra(inner.algebra, map.target())) {
    throw Error(ErrorCode::MixedAlgebras,
                "the inner certificate does not live in the top-layer quotient");
  }
  if (!(inner.x1 == map.project(x1)) || !(inner.x2 == map.project(x2))) {
    throw Error(ErrorCode::MalformedInput, "the inner certificate certifies a different corner");
  }
  if (inner.candidate_bound.value >= inner.corner_bound.value) {
    throw Error(ErrorCode::InnerNotShorter,
                "the inner candidate is not certified shorter than its corner");
  }

  // Lift the inner candidate and read off the discrepancy it leaves in the
  // top layer; by construction the dilated copy of the lifted path then
  // develops to exp(-eps x1) * dilate(eps, h)^-1 * exp(eps x2) exactly.
  HorizontalPath lifted = lift_path(map, inner.candidate);
  GroupPoint reached = endpoint(lifted, exp_point(x1));
  GroupPoint h = bch_product(exp_point(x2), invert(reached));
  if (!h.is_identity() && h.log.lowest_layer() != s) {
    throw Error(ErrorCode::EndpointMismatch,
                "the lifted inner path misses the corner endpoint below the top layer");
  }
  CorrectionTriple triple = solve_correction(h, x1, x2);

  const Rational one(1);
  const Rational half(1, 2);
  // Three dilated correction words wrapped around the two corner legs and
  // the dilated inner candidate.  The scaled corrections conjugate to a
  // product that cancels the dilated discrepancy exactly, so the whole
  // concatenation develops from exp(x1) to exp(x2).
  HorizontalPath candidate = dilate_path(lambda, realize_group(exp_point(triple.y1)));
  candidate = concat(candidate, make_segment(-x1, Rational(one - epsilon)));
  candidate = concat(candidate, dilate_path(epsilon, lifted));
  candidate = concat(candidate, make_segment(x2, Rational(half - epsilon)));
  candidate = concat(candidate, dilate_path(lambda, realize_group(exp_point(triple.y2))));
  candidate = concat(candidate, make_segment(x2, half));
  candidate = concat(candidate, dilate_path(lambda, realize_group(exp_point(triple.y3))));
  return candidate;
}

bool certifies_shorter(const CertifiedBound& corner_bound, const CertifiedBound& candidate_bound) {
  // The candidate's upper bound must undercut what the corner bound proves
  // as a lower bound: its value when exact, else value minus tolerance.
  const Rational floor_value = corner_bound.exact ? Rational(0) : corner_bound.tolerance;
  return Rational(corner_bound.value - candidate_bound.value) > floor_value;
}

namespace {

ShortcutCertificate shortcut_recurse(const LieVector& x1, const LieVector& x2,
                                     const ShortcutConfig& config, int depth);

struct EtaOption {
  Rational eta;
  Rational margin;
  int halvings = 0;
};

// Candidate etas in schedule order; the margin evaluator is exact, so the
// scan costs one closed-form evaluation per halving.
std::vector<EtaOption> scan_schedule(const ShortcutConfig& config,
                                     const std::function<Rational(const Rational&)>& margin_at,
                                     const std::function<bool(const Rational&)>& valid) {
  std::vector<EtaOption> options;
  Rational eta = config.eta_start;
  for (int k = 0; k <= config.max_halvings; ++k) {
    if (valid(eta)) {
      options.push_back({eta, margin_at(eta), k});
    }
    eta /= 2;
  }
  return options;
}

// The margin is a polynomial a*eta^(s-1) - b*eta^s with certified rational
// coefficients, so its maximizer eta = a(s-1)/(bs) is itself rational and
// can join the scanned candidates.  At the tiny margins of deep recursion
// the halving grid straddles the peak; the vertex lands on it.  The exact
// maximizer inherits the certified coefficients' enormous numerators, and
// every path coordinate downstream would inherit them in turn; since the
// polynomial is flat to second order at its peak, rounding down to a short
// dyadic mantissa gives up a relative margin of about (s * 2^-48)^2 and
// keeps all later arithmetic small.
void add_vertex_option(std::vector<EtaOption>& options, const Rational& linear,
                       const Rational& leading, int s,
                       const std::function<Rational(const Rational&)>& margin_at,
                       const std::function<bool(const Rational&)>& valid) {
  if (!(linear > 0) || !(leading > 0)) return;
  Rational vertex = dyadic_floor(Rational(linear * (s - 1) / (leading * s)), 48);
  if (!valid(vertex)) return;
  options.push_back({vertex, margin_at(vertex), -1});
}

// Take the eta with the largest certified margin; the top level additionally
// requires the configured threshold, and inner levels only need a strict
// win so the enclosing level inherits maximal headroom.
const EtaOption& select_eta(const std::vector<EtaOption>& options, const ShortcutConfig& config,
                            int depth, const CertifiedBound& corner) {
  const Rational floor_value = corner.exact ? Rational(0) : corner.tolerance;
  const EtaOption* chosen = nullptr;
  for (const EtaOption& option : options) {
    if (!(option.margin > floor_value)) continue;
    if (depth == 0 && option.margin < config.margin_threshold) continue;
    if (chosen == nullptr || option.margin > chosen->margin) {
      chosen = &option;
    }
  }
  if (chosen == nullptr) {
    std::ostringstream message;
    message << "no eta in " << (config.max_halvings + 1) << " halvings from "
            << to_string(config.eta_start) << " certifies the required margin; "
            << "the tolerance may be too coarse or more halvings are needed";
    throw Error(ErrorCode::EpsilonSearchExhausted, message.str());
  }
  return *chosen;
}

std::string describe_pick(const EtaOption& picked) {
  if (picked.halvings < 0) {
    return "at the exact peak of the margin polynomial";
  }
  std::ostringstream text;
  text << "after " << picked.halvings << " halvings";
  return text.str();
}

void append_indented(std::vector<std::string>& transcript, const std::vector<std::string>& inner) {
  for (const std::string& line : inner) {
    transcript.push_back("  " + line);
  }
}

ShortcutCertificate step2_certificate(const LieVector& x1, const LieVector& x2,
                                      const ShortcutConfig& config, int depth) {
  const Rational half_tolerance = Rational(config.tolerance / 2);
  CertifiedBound b1 = certified_norm_upper(config.norm, x1, half_tolerance);
  CertifiedBound b2 = certified_norm_upper(config.norm, x2, half_tolerance);
  CertifiedBound corner{Rational(b1.value + b2.value), config.tolerance, b1.exact && b2.exact};
  CertifiedBound cross = certified_norm_upper(config.norm, LieVector(x2 - x1), config.tolerance);
  // Certified per-leg lengths of the six pieces:
  //   (1-e)|x1| + e|x2-x1| + (1/2-e)|x2| + e^2|x1| + |x2|/2 + e^2|x1|
  // so the margin against |x1|+|x2| is e*(corner - cross) - 2e^2*|x1|.
  const Rational gap = Rational(corner.value - cross.value);
  auto margin_at = [&](const Rational& eps) {
    return Rational(eps * gap - 2 * eps * eps * b1.value);
  };

  EtaOption picked;
  if (depth == 0 && config.fixed_eta) {
    picked = {*config.fixed_eta, margin_at(*config.fixed_eta), 0};
  } else {
    auto valid = [](const Rational& eps) { return eps > 0 && eps < Rational(1, 2); };
    std::vector<EtaOption> options = scan_schedule(config, margin_at, valid);
    add_vertex_option(options, gap, Rational(2 * b1.value), 2, margin_at, valid);
    picked = select_eta(options, config, depth, corner);
  }

  HorizontalPath candidate = heisenberg_shortcut(x1, x2, picked.eta);
  if (!(endpoint(candidate, exp_point(x1)) == exp_point(x2))) {
    throw Error(ErrorCode::InvariantViolation, "six-segment endpoint identity failed");
  }

  const Rational eps = picked.eta;
  Rational slack = Rational((1 - eps + 2 * eps * eps) * bound_slack(b1)) +
                   Rational(eps * bound_slack(cross)) + Rational((1 - eps) * bound_slack(b2));
  CertifiedBound candidate_bound{Rational(corner.value - picked.margin),
                                 slack == 0 ? config.tolerance : slack,
                                 b1.exact && b2.exact && cross.exact};

  ShortcutCertificate certificate;
  certificate.algebra = x1.algebra();
  certificate.norm = config.norm;
  certificate.x1 = x1;
  certificate.x2 = x2;
  certificate.eta = picked.eta;
  certificate.epsilon = picked.eta;
  certificate.candidate = candidate;
  certificate.corner_bound = corner;
  certificate.candidate_bound = candidate_bound;
  certificate.margin = picked.margin;
  certificate.endpoint_ok = true;
  certificate.transcript.push_back("checked: generators independent and in the first layer");
  certificate.transcript.push_back("corner bound |x1| + |x2| <= " + describe_bound(corner));
  certificate.transcript.push_back("cross leg bound |x2 - x1| <= " + describe_bound(cross));
  {
    std::ostringstream line;
    line << "selected epsilon = " << to_string(picked.eta) << " " << describe_pick(picked)
         << ", certified margin = " << to_string(picked.margin);
    certificate.transcript.push_back(line.str());
  }
  certificate.transcript.push_back(
      "checked: endpoint identity exp(x1) * candidate = exp(x2), exact");
  return certificate;
}

ShortcutCertificate stepN_certificate(const LieVector& x1, const LieVector& x2,
                                      const ShortcutConfig& config, int depth) {
  const AlgebraHandle& algebra = x1.algebra();
  const int s = algebra->step();
  const Rational half_tolerance = Rational(config.tolerance / 2);
  CertifiedBound b1 = certified_norm_upper(config.norm, x1, half_tolerance);
  CertifiedBound b2 = certified_norm_upper(config.norm, x2, half_tolerance);
  CertifiedBound corner{Rational(b1.value + b2.value), config.tolerance, b1.exact && b2.exact};

  QuotientMapHandle map = quotient_map(algebra);
  ShortcutConfig inner_config = config;
  inner_config.fixed_eta.reset();
  ShortcutCertificate inner =
      shortcut_recurse(map.project(x1), map.project(x2), inner_config, depth + 1);
  if (inner.candidate_bound.value >= corner.value) {
    throw Error(ErrorCode::InnerNotShorter,
                "the inner candidate is not certified shorter than the corner");
  }

  // The lift discrepancy and the correction words do not depend on eta, so
  // the scan below prices every eta with one exact formula.
  HorizontalPath lifted = lift_path(map, inner.candidate);
  GroupPoint reached = endpoint(lifted, exp_point(x1));
  GroupPoint h = bch_product(exp_point(x2), invert(reached));
  if (!h.is_identity() && h.log.lowest_layer() != s) {
    throw Error(ErrorCode::EndpointMismatch,
                "the lifted inner path misses the corner endpoint below the top layer");
  }
  CorrectionTriple triple = solve_correction(h, x1, x2);
  HorizontalPath word1 = realize_group(exp_point(triple.y1));
  HorizontalPath word2 = realize_group(exp_point(triple.y2));
  HorizontalPath word3 = realize_group(exp_point(triple.y3));
  CertifiedBound c1 = length_upper_bound(word1, config.norm, config.tolerance);
  CertifiedBound c2 = length_upper_bound(word2, config.norm, config.tolerance);
  CertifiedBound c3 = length_upper_bound(word3, config.norm, config.tolerance);
  const Rational corrections = Rational(c1.value + c2.value + c3.value);
  const Rational headroom = Rational(corner.value - inner.candidate_bound.value);

  // Candidate pieces are bounded by
  //   (1-e)|x1| + e*D + (1-e)|x2| + lambda*(C1+C2+C3),
  // D the inner certified bound, e = eta^(s-1), lambda = eta^s, giving the
  // margin below against |x1| + |x2|.
  auto margin_at = [&](const Rational& eta) {
    const Rational eps = pow_rational(eta, static_cast<unsigned>(s - 1));
    const Rational lam = pow_rational(eta, static_cast<unsigned>(s));
    return Rational(eps * headroom - lam * corrections);
  };
  EtaOption picked;
  if (depth == 0 && config.fixed_eta) {
    picked = {*config.fixed_eta, margin_at(*config.fixed_eta), 0};
  } else {
    auto valid = [&](const Rational& eta) {
      return eta > 0 && pow_rational(eta, static_cast<unsigned>(s - 1)) < Rational(1, 2);
    };
    std::vector<EtaOption> options = scan_schedule(config, margin_at, valid);
    add_vertex_option(options, headroom, corrections, s, margin_at, valid);
    picked = select_eta(options, config, depth, corner);
  }

  const Rational epsilon = pow_rational(picked.eta, static_cast<unsigned>(s - 1));
  const Rational lambda = pow_rational(picked.eta, static_cast<unsigned>(s));
  HorizontalPath candidate = build_candidate(x1, x2, picked.eta, inner);
  if (!(endpoint(candidate, exp_point(x1)) == exp_point(x2))) {
    throw Error(ErrorCode::InvariantViolation, "seven-part endpoint identity failed");
  }

  // Conjugation identity at the selected epsilon: the three scaled
  // corrections, conjugated by the points they are inserted at, compose to
  // the dilated discrepancy.
  {
    const Rational eps_s = pow_rational(epsilon, static_cast<unsigned>(s));
    GroupPoint left = conjugate(exp_point(x1), exp_point(Rational(eps_s) * triple.y1));
    GroupPoint middle =
        conjugate(exp_point(Rational(1, 2) * x2), exp_point(Rational(eps_s) * triple.y2));
    GroupPoint right = conjugate(exp_point(x2), exp_point(Rational(eps_s) * triple.y3));
    GroupPoint together = bch_product(bch_product(left, middle), right);
    if (!(together == dilate(epsilon, h))) {
      throw Error(ErrorCode::InvariantViolation,
                  "scaled corrections do not compose to the dilated discrepancy");
    }
  }

  Rational slack = Rational((1 - epsilon) * Rational(bound_slack(b1) + bound_slack(b2))) +
                   Rational(epsilon * bound_slack(inner.candidate_bound)) +
                   Rational(lambda * Rational(bound_slack(c1) + bound_slack(c2) + bound_slack(c3)));
  CertifiedBound candidate_bound{Rational(corner.value - picked.margin),
                                 slack == 0 ? config.tolerance : slack,
                                 b1.exact && b2.exact && inner.candidate_bound.exact &&
                                     c1.exact && c2.exact && c3.exact};

  ShortcutCertificate certificate;
  certificate.algebra = algebra;
  certificate.norm = config.norm;
  certificate.x1 = x1;
  certificate.x2 = x2;
  certificate.eta = picked.eta;
  certificate.epsilon = epsilon;
  certificate.candidate = candidate;
  certificate.corner_bound = corner;
  certificate.candidate_bound = candidate_bound;
  certificate.margin = picked.margin;
  certificate.endpoint_ok = true;

  certificate.transcript.push_back("checked: generators independent and in the first layer");
  certificate.transcript.push_back("corner bound |x1| + |x2| <= " + describe_bound(corner));
  {
    std::ostringstream line;
    line << "quotient certificate at step " << (s - 1) << ": candidate bound "
         << describe_bound(inner.candidate_bound);
    certificate.transcript.push_back(line.str());
  }
  append_indented(certificate.transcript, inner.transcript);
  certificate.transcript.push_back("checked: lift discrepancy is central with top-layer logarithm");
  certificate.transcript.push_back(
      "checked: y1 + y2 + y3 = 0 and [x1, y1] + [x2, y2/2 + y3] = log(h), exact");
  {
    std::ostringstream line;
    line << "correction word bounds: " << to_string(c1.value) << ", " << to_string(c2.value)
         << ", " << to_string(c3.value);
    certificate.transcript.push_back(line.str());
  }
  {
    std::ostringstream line;
    line << "selected eta = " << to_string(picked.eta) << " " << describe_pick(picked)
         << ": epsilon = " << to_string(epsilon)
         << ", certified margin = " << to_string(picked.margin);
    certificate.transcript.push_back(line.str());
  }
  certificate.transcript.push_back(
      "checked: scaled corrections conjugate to the dilated discrepancy, exact");
  certificate.transcript.push_back(
      "checked: endpoint identity exp(x1) * candidate = exp(x2), exact");
  return certificate;
}

ShortcutCertificate shortcut_recurse(const LieVector& x1, const LieVector& x2,
                                     const ShortcutConfig& config, int depth) {
  require_first_layer_pair(x1, x2);
  const AlgebraHandle& algebra = x1.algebra();
  if (algebra->step() == 1) {
    throw Error(ErrorCode::AbelianStep1,
                "in a step-1 group segments are minimizing and the corner cannot be shortened");
  }
  if (algebra->rank() != 2) {
    throw Error(ErrorCode::UnsupportedRank,
                "the construction uses the rank-2 reduction; restrict to a rank-2 subgroup first");
  }
  if (algebra->step() == 2) {
    return step2_certificate(x1, x2, config, depth);
  }
  return stepN_certificate(x1, x2, config, depth);
}

}  // namespace

ShortcutCertificate recursive_shortcut(const LieVector& x1, const LieVector& x2,
                                       const ShortcutConfig& config) {
  require_first_layer_pair(x1, x2);
  if (config.tolerance <= 0) {
    throw Error(ErrorCode::MalformedInput, "the tolerance must be positive");
  }
  if (config.eta_start <= 0) {
    throw Error(ErrorCode::EtaOutOfRange, "the eta schedule must start positive");
  }
  if (config.max_halvings < 0) {
    throw Error(ErrorCode::MalformedInput, "the halving budget must be nonnegative");
  }
  // Normalize by certified division.  For exactly-unit generators this is
  // the identity; otherwise the certificate states the generators it
  // actually certifies and the transcript records the factors.
  CertifiedBound n1 = certified_norm_upper(config.norm, x1, config.tolerance);
  CertifiedBound n2 = certified_norm_upper(config.norm, x2, config.tolerance);
  LieVector u1 = Rational(1 / n1.value) * x1;
  LieVector u2 = Rational(1 / n2.value) * x2;
  ShortcutCertificate certificate = shortcut_recurse(u1, u2, config, 0);
  std::vector<std::string> transcript;
  transcript.push_back("normalized generators by certified division: factors " +
                       to_string(n1.value) + " and " + to_string(n2.value));
  transcript.insert(transcript.end(), certificate.transcript.begin(),
                    certificate.transcript.end());
  certificate.transcript = std::move(transcript);
  return certificate;
}

}  // namespace carnot
