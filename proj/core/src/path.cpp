#include "carnot/path.hpp"

#include <utility>

#include "carnot/error.hpp"
#include "carnot/linalg.hpp"

namespace carnot {

HorizontalPath::HorizontalPath(AlgebraHandle algebra, std::vector<Segment> segments)
    : algebra_(std::move(algebra)) {
  if (!algebra_) {
    throw Error(ErrorCode::MalformedInput, "path needs an algebra");
  }
  segments_.reserve(segments.size());
  for (auto& segment : segments) {
    if (!segment.direction.algebra() || !same_algebra(segment.direction.algebra(), algebra_)) {
      throw Error(ErrorCode::MixedAlgebras,
                  "segment direction does not belong to the path's algebra");
    }
    if (segment.duration < 0) {
      throw Error(ErrorCode::MalformedInput, "segment duration must be nonnegative");
    }
    if (segment.duration == 0 || segment.direction.is_zero()) {
      continue;  // traverses nothing
    }
    if (segment.direction.highest_layer() > 1) {
      throw Error(ErrorCode::WrongLayer,
                  "segment direction must lie in the first layer to be horizontal");
    }
    segments_.push_back(std::move(segment));
  }
}

HorizontalPath make_corner(const LieVector& x1, const LieVector& x2) {
  require_same_algebra(x1, x2);
  const AlgebraHandle& algebra = x1.algebra();
  if (x1.is_zero() || x2.is_zero() || x1.highest_layer() > 1 || x2.highest_layer() > 1) {
    throw Error(ErrorCode::WrongLayer, "corner generators must be nonzero first-layer vectors");
  }
  // Independence: the 2 x rank coordinate matrix must have rank 2.
  Matrix rows(2, std::vector<Rational>(algebra->rank(), Rational(0)));
  for (const auto& [index, value] : x1.coords()) rows[0][index] = value;
  for (const auto& [index, value] : x2.coords()) rows[1][index] = value;
  if (matrix_rank(rows) < 2) {
    throw Error(ErrorCode::LinearlyDependent,
                "corner generators are linearly dependent; the path has no corner");
  }
  return HorizontalPath(algebra, {{-x1, Rational(1)}, {x2, Rational(1)}});
}

HorizontalPath make_segment(const LieVector& direction, const Rational& duration) {
  if (!direction.algebra()) {
    throw Error(ErrorCode::MalformedInput, "segment direction needs an algebra");
  }
  return HorizontalPath(direction.algebra(), {{direction, duration}});
}

GroupPoint endpoint(const HorizontalPath& path, const GroupPoint& base) {
  GroupPoint point = base;
  for (const Segment& segment : path.segments()) {
    LieVector move = segment.direction;
    move *= segment.duration;
    point = bch_product(point, exp_point(move));
  }
  return point;
}

GroupPoint endpoint(const HorizontalPath& path) {
  if (!path.algebra()) {
    throw Error(ErrorCode::MalformedInput, "endpoint of a detached empty path is undefined");
  }
  return endpoint(path, identity(path.algebra()));
}

HorizontalPath dilate_path(const Rational& epsilon, const HorizontalPath& path) {
  if (epsilon <= 0) {
    throw Error(ErrorCode::EpsilonOutOfRange, "dilation factor must be positive");
  }
  std::vector<Segment> scaled;
  scaled.reserve(path.segments().size());
  for (const Segment& segment : path.segments()) {
    scaled.push_back({epsilon * segment.direction, segment.duration});
  }
  return HorizontalPath(path.algebra(), std::move(scaled));
}

HorizontalPath concat(const HorizontalPath& a, const HorizontalPath& b) {
  if (!a.algebra()) return b;
  if (!b.algebra()) return a;
  if (!same_algebra(a.algebra(), b.algebra())) {
    throw Error(ErrorCode::MixedAlgebras, "cannot concatenate paths over different algebras");
  }
  std::vector<Segment> joined = a.segments();
  joined.insert(joined.end(), b.segments().begin(), b.segments().end());
  return HorizontalPath(a.algebra(), std::move(joined));
}

HorizontalPath reverse_path(const HorizontalPath& path) {
  std::vector<Segment> reversed;
  reversed.reserve(path.segments().size());
  for (auto it = path.segments().rbegin(); it != path.segments().rend(); ++it) {
    reversed.push_back({-it->direction, it->duration});
  }
  return HorizontalPath(path.algebra(), std::move(reversed));
}

HorizontalPath project_path(const QuotientMapHandle& map, const HorizontalPath& path) {
  std::vector<Segment> projected;
  projected.reserve(path.segments().size());
  for (const Segment& segment : path.segments()) {
    projected.push_back({map.project(segment.direction), segment.duration});
  }
  return HorizontalPath(map.target(), std::move(projected));
}

HorizontalPath lift_path(const QuotientMapHandle& map, const HorizontalPath& path) {
  std::vector<Segment> lifted;
  lifted.reserve(path.segments().size());
  for (const Segment& segment : path.segments()) {
    lifted.push_back({map.lift(segment.direction), segment.duration});
  }
  return HorizontalPath(map.source(), std::move(lifted));
}

CertifiedBound length_upper_bound(const HorizontalPath& path, const FirstLayerNorm& norm,
                                  const Rational& tolerance) {
  if (tolerance <= 0) {
    throw Error(ErrorCode::MalformedInput, "length tolerance must be positive");
  }
  if (path.empty()) {
    return CertifiedBound{Rational(0), tolerance, true};
  }
  // Each segment contributes duration * |direction|.  Giving segment k a
  // norm tolerance of tolerance / (n * duration_k) caps its contribution's
  // slack at tolerance / n, so the sum overshoots by at most `tolerance`.
  // The split also scales linearly under dilation, which keeps the bound
  // exactly equivariant: dilating the path and the tolerance by the same
  // factor multiplies every per-segment computation by that factor.
  const Rational count(path.size());
  Rational total(0);
  bool exact = true;
  for (const Segment& segment : path.segments()) {
    Rational share = tolerance / (count * segment.duration);
    CertifiedBound piece = certified_norm_upper(norm, segment.direction, share);
    Rational contribution = segment.duration * piece.value;
    total += contribution;
    exact = exact && piece.exact;
  }
  return CertifiedBound{total, tolerance, exact};
}

}  // namespace carnot
