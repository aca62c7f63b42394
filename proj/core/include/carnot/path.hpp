// Horizontal paths: piecewise-constant first-layer controls with exact
// rational endpoints and certified length bounds.
#pragma once

#include <vector>

#include "carnot/group.hpp"
#include "carnot/norm.hpp"

namespace carnot {

// One constant-control piece: the path moves in the direction of a fixed
// first-layer vector for the given amount of time.  The traversed group
// element is exp(duration * direction) and the piece contributes
// duration * |direction| to the length.
struct Segment {
  LieVector direction;
  Rational duration;
};

// An ordered list of segments sharing one algebra.  Construction validates
// that every direction lies in the first layer, that all segments agree on
// the algebra, and that durations are nonnegative; pieces that traverse
// nothing (zero duration or zero direction) are dropped.
class HorizontalPath {
 public:
  HorizontalPath() = default;
  HorizontalPath(AlgebraHandle algebra, std::vector<Segment> segments);

  const AlgebraHandle& algebra() const { return algebra_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  int size() const { return static_cast<int>(segments_.size()); }

 private:
  AlgebraHandle algebra_;
  std::vector<Segment> segments_;
};

// The concatenation of the two one-second pieces exp(-X1) and exp(X2): the
// path that runs from exp(X1) through the identity to exp(X2).  Requires
// linearly independent first-layer vectors.
HorizontalPath make_corner(const LieVector& x1, const LieVector& x2);

// Single-piece path traversing exp(duration * direction).
HorizontalPath make_segment(const LieVector& direction, const Rational& duration);

// Exact endpoint of the path developed from the given base point (the
// product base * exp(d_1 t_1) * ... * exp(d_n t_n)).
GroupPoint endpoint(const HorizontalPath& path, const GroupPoint& base);
GroupPoint endpoint(const HorizontalPath& path);

// Image of the path under the dilation of the given positive factor:
// directions scale linearly (they live in the first layer), durations are
// kept, the endpoint map commutes with the dilation and the length scales
// by the same factor.
HorizontalPath dilate_path(const Rational& epsilon, const HorizontalPath& path);

HorizontalPath concat(const HorizontalPath& a, const HorizontalPath& b);

// The same trace run backwards: reversed segment order with negated
// directions.  Develops to the inverse group element.
HorizontalPath reverse_path(const HorizontalPath& path);

// Transport along a top-layer quotient.  Directions live in the first
// layer, which the quotient identifies, so both maps preserve lengths and
// segment counts exactly.
HorizontalPath project_path(const QuotientMapHandle& map, const HorizontalPath& path);
HorizontalPath lift_path(const QuotientMapHandle& map, const HorizontalPath& path);

// Certified upper bound on the length of the path: the sum of
// duration * (certified bound on |direction|) with the tolerance budget
// split across segments so the total slack stays within `tolerance`.
// Scaling the path by a dilation factor and the tolerance by the same
// factor scales the bound by exactly that factor.
CertifiedBound length_upper_bound(const HorizontalPath& path, const FirstLayerNorm& norm,
                                  const Rational& tolerance);

}  // namespace carnot
