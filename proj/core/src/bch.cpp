#include "carnot/bch.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "tensor_poly.hpp"

namespace carnot {

namespace detail {

namespace {

BchSeries derive_series(int step) {
  BchSeries series;
  series.free2 = build_free_nilpotent(2, step);

  // log(exp x1 exp x2) in the truncated tensor algebra on two letters.
  const TensorPoly x1 = tp_letter(step, 0);
  const TensorPoly x2 = tp_letter(step, 1);
  TensorPoly product = tp_mul(tp_exp(x1), tp_exp(x2));
  TensorPoly logarithm = tp_log(product);

  // Rewrite in the Lyndon basis by repeatedly clearing the lexicographically
  // least word with the matching standard bracketing. Words are cleared via
  // the same tensor expansion used to build the structure table, so a
  // nonzero final residual would mean the logarithm is not a Lie element.
  const StratifiedAlgebra& algebra = *series.free2;
  std::vector<TensorPoly> tau(static_cast<std::size_t>(algebra.dim()));
  std::map<Word, int> index_of;
  for (int i = 0; i < algebra.dim(); ++i) {
    const auto [li, ri] = algebra.children(i);
    if (li < 0) {
      const int letter = algebra.basis_label(i) == "1" ? 0 : 1;
      tau[static_cast<std::size_t>(i)] = tp_letter(step, letter);
      index_of.emplace(Word{letter}, i);
    } else {
      tau[static_cast<std::size_t>(i)] =
          tp_commutator(tau[static_cast<std::size_t>(li)], tau[static_cast<std::size_t>(ri)]);
      index_of.emplace(tau[static_cast<std::size_t>(i)].terms.begin()->first, i);
    }
  }

  std::map<int, Rational> coords;
  while (!logarithm.terms.empty()) {
    const auto& [word, coeff] = *logarithm.terms.begin();
    auto found = index_of.find(word);
    if (found == index_of.end() ||
        tau[static_cast<std::size_t>(found->second)].terms.begin()->first != word) {
      throw Error(ErrorCode::InvariantViolation, "BCH logarithm is not a Lie element");
    }
    coords[found->second] += coeff;
    tp_axpy(logarithm, -coeff, tau[static_cast<std::size_t>(found->second)]);
  }
  series.terms.assign(coords.begin(), coords.end());
  return series;
}

}  // namespace

const BchSeries& bch_series(int step) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<BchSeries>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(step);
  if (it == cache.end()) {
    it = cache.emplace(step, std::make_unique<BchSeries>(derive_series(step))).first;
  }
  return *it->second;
}

}  // namespace detail

LieVector bch_log(const LieVector& a, const LieVector& b) {
  require_same_algebra(a, b);
  const AlgebraHandle& algebra = a.algebra();
  const int step = algebra->step();
  if (step == 1) return a + b;

  const detail::BchSeries& series = detail::bch_series(step);
  const StratifiedAlgebra& free2 = *series.free2;

  // Evaluate every basis bracketing of the series' free algebra on (a, b)
  // inside the target algebra; universality of the series makes this exact
  // for any stratified algebra of the same step.
  std::vector<LieVector> value(static_cast<std::size_t>(free2.dim()), LieVector(algebra));
  for (int i = 0; i < free2.dim(); ++i) {
    const auto [li, ri] = free2.children(i);
    if (li < 0) {
      value[static_cast<std::size_t>(i)] = (free2.basis_label(i) == "1") ? a : b;
    } else {
      value[static_cast<std::size_t>(i)] =
          bracket(value[static_cast<std::size_t>(li)], value[static_cast<std::size_t>(ri)]);
    }
  }

  LieVector result(algebra);
  for (const auto& [index, coeff] : series.terms) {
    LieVector term = value[static_cast<std::size_t>(index)];
    term *= coeff;
    result += term;
  }
  return result;
}

}  // namespace carnot
