#pragma once

// Internal: truncated free associative algebra on a small alphabet, used to
// derive structure constants of free nilpotent algebras and the BCH series.
// Not installed; the public API never exposes these types.

#include <map>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot::detail {

using Word = std::vector<int>;  // letters 0..rank-1; empty word = scalar unit

struct TensorPoly {
  int maxdeg = 0;
  std::map<Word, Rational> terms;  // zero coefficients are never stored
};

TensorPoly tp_scalar(int maxdeg, const Rational& value);
TensorPoly tp_letter(int maxdeg, int letter);
void tp_axpy(TensorPoly& acc, const Rational& scale, const TensorPoly& other);
TensorPoly tp_mul(const TensorPoly& a, const TensorPoly& b);
TensorPoly tp_commutator(const TensorPoly& a, const TensorPoly& b);

// exp of a polynomial with no constant term.
TensorPoly tp_exp(const TensorPoly& nilpotent);

// log of a polynomial with constant term exactly 1.
TensorPoly tp_log(const TensorPoly& near_unit);

}  // namespace carnot::detail
