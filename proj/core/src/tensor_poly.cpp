#include "tensor_poly.hpp"

#include "carnot/error.hpp"

namespace carnot::detail {

TensorPoly tp_scalar(int maxdeg, const Rational& value) {
  TensorPoly p;
  p.maxdeg = maxdeg;
  if (value != 0) p.terms[Word{}] = value;
  return p;
}

TensorPoly tp_letter(int maxdeg, int letter) {
  TensorPoly p;
  p.maxdeg = maxdeg;
  if (maxdeg >= 1) p.terms[Word{letter}] = Rational(1);
  return p;
}

void tp_axpy(TensorPoly& acc, const Rational& scale, const TensorPoly& other) {
  if (scale == 0) return;
  for (const auto& [word, coeff] : other.terms) {
    auto it = acc.terms.find(word);
    if (it == acc.terms.end()) {
      acc.terms.emplace(word, scale * coeff);
    } else {
      it->second += scale * coeff;
      if (it->second == 0) acc.terms.erase(it);
    }
  }
}

TensorPoly tp_mul(const TensorPoly& a, const TensorPoly& b) {
  TensorPoly p;
  p.maxdeg = a.maxdeg;
  for (const auto& [wa, ca] : a.terms) {
    for (const auto& [wb, cb] : b.terms) {
      if (wa.size() + wb.size() > static_cast<std::size_t>(p.maxdeg)) continue;
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      auto it = p.terms.find(w);
      if (it == p.terms.end()) {
        p.terms.emplace(std::move(w), ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second == 0) p.terms.erase(it);
      }
    }
  }
  return p;
}

TensorPoly tp_commutator(const TensorPoly& a, const TensorPoly& b) {
  TensorPoly p = tp_mul(a, b);
  tp_axpy(p, Rational(-1), tp_mul(b, a));
  return p;
}

TensorPoly tp_exp(const TensorPoly& nilpotent) {
  if (nilpotent.terms.count(Word{}) != 0) {
    throw Error(ErrorCode::InvariantViolation, "tp_exp requires a zero constant term");
  }
  TensorPoly sum = tp_scalar(nilpotent.maxdeg, Rational(1));
  TensorPoly power = tp_scalar(nilpotent.maxdeg, Rational(1));
  Rational factorial(1);
  for (int k = 1; k <= nilpotent.maxdeg; ++k) {
    power = tp_mul(power, nilpotent);
    if (power.terms.empty()) break;
    factorial *= k;
    tp_axpy(sum, Rational(1) / factorial, power);
  }
  return sum;
}

TensorPoly tp_log(const TensorPoly& near_unit) {
  auto unit = near_unit.terms.find(Word{});
  if (unit == near_unit.terms.end() || unit->second != 1) {
    throw Error(ErrorCode::InvariantViolation, "tp_log requires a unit constant term");
  }
  TensorPoly u = near_unit;
  u.terms.erase(Word{});
  TensorPoly sum = tp_scalar(near_unit.maxdeg, Rational(0));
  TensorPoly power = tp_scalar(near_unit.maxdeg, Rational(1));
  for (int k = 1; k <= near_unit.maxdeg; ++k) {
    power = tp_mul(power, u);
    if (power.terms.empty()) break;
    const Rational sign = (k % 2 == 1) ? Rational(1) : Rational(-1);
    tp_axpy(sum, sign / Rational(k), power);
  }
  return sum;
}

}  // namespace carnot::detail
