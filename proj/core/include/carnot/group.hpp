#pragma once

#include "carnot/algebra.hpp"
#include "carnot/bch.hpp"

namespace carnot {

// Group element of the simply connected nilpotent Lie group of an algebra,
// in exponential coordinates of the first kind: the element is exp(log).
// Representation is unique, so equality is exact coordinate equality.
struct GroupPoint {
  LieVector log;

  const AlgebraHandle& algebra() const { return log.algebra(); }
  bool is_identity() const { return log.is_zero(); }
  friend bool operator==(const GroupPoint& a, const GroupPoint& b) { return a.log == b.log; }
};

GroupPoint identity(const AlgebraHandle& algebra);
GroupPoint exp_point(const LieVector& log);

// Exact truncated BCH product.
GroupPoint bch_product(const GroupPoint& a, const GroupPoint& b);

GroupPoint invert(const GroupPoint& a);

// p q p^{-1}, computed by definition via two products.
GroupPoint conjugate(const GroupPoint& p, const GroupPoint& q);

// Group automorphism scaling layer j by epsilon^j; epsilon > 0 rational.
LieVector dilate_vector(const Rational& epsilon, const LieVector& v);
GroupPoint dilate(const Rational& epsilon, const GroupPoint& a);

// Central quotient by exp(V_s): the target algebra is the source with its
// top layer deleted (same basis indices below), and projection drops the
// top-layer coordinates, a group homomorphism with isometric first layer.
class QuotientMapHandle {
 public:
  QuotientMapHandle(AlgebraHandle source, AlgebraHandle target)
      : source_(std::move(source)), target_(std::move(target)) {}

  const AlgebraHandle& source() const { return source_; }
  const AlgebraHandle& target() const { return target_; }

  LieVector project(const LieVector& v) const;
  GroupPoint project(const GroupPoint& a) const;

  // The canonical linear section of the projection (top-layer component
  // zero); project(lift(v)) = v exactly.
  LieVector lift(const LieVector& v) const;
  GroupPoint lift(const GroupPoint& a) const;

 private:
  AlgebraHandle source_;
  AlgebraHandle target_;
};

QuotientMapHandle quotient_map(const AlgebraHandle& algebra);

}  // namespace carnot
