#pragma once

#include <utility>
#include <vector>

#include "carnot/algebra.hpp"

namespace carnot {

// log(exp(a) exp(b)) in the common algebra of a and b, exact. The universal
// series is derived once per step and evaluated through the target algebra's
// bracket table, which is valid in every nilpotent Lie algebra of that step.
LieVector bch_log(const LieVector& a, const LieVector& b);

namespace detail {

// Universal series for two letters: log(exp x1 exp x2) written in the Lyndon
// basis of the free nilpotent algebra of rank 2 and the given step.
struct BchSeries {
  AlgebraHandle free2;
  std::vector<std::pair<int, Rational>> terms;  // (basis index, coefficient)
};

// Built lazily, cached per step, immutable afterwards; safe for concurrent
// readers.
const BchSeries& bch_series(int step);

}  // namespace detail

}  // namespace carnot
