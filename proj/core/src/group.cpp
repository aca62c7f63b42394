#include "carnot/group.hpp"

namespace carnot {

GroupPoint identity(const AlgebraHandle& algebra) { return GroupPoint{zero_vector(algebra)}; }

GroupPoint exp_point(const LieVector& log) { return GroupPoint{log}; }

GroupPoint bch_product(const GroupPoint& a, const GroupPoint& b) {
  return GroupPoint{bch_log(a.log, b.log)};
}

GroupPoint invert(const GroupPoint& a) {
  // exp(X)^{-1} = exp(-X) along the one-parameter subgroup of X
  return GroupPoint{-a.log};
}

GroupPoint conjugate(const GroupPoint& p, const GroupPoint& q) {
  return bch_product(bch_product(p, q), invert(p));
}

LieVector dilate_vector(const Rational& epsilon, const LieVector& v) {
  if (epsilon <= 0) throw Error(ErrorCode::EpsilonOutOfRange, "dilation factor must be positive");
  if (!v.algebra()) throw Error(ErrorCode::MalformedInput, "vector has no algebra attached");
  const StratifiedAlgebra& algebra = *v.algebra();
  LieVector result(v.algebra());
  std::vector<Rational> powers(static_cast<std::size_t>(algebra.step() + 1), Rational(1));
  for (int j = 1; j <= algebra.step(); ++j) {
    powers[static_cast<std::size_t>(j)] = powers[static_cast<std::size_t>(j - 1)] * epsilon;
  }
  for (const auto& [index, coeff] : v.coords()) {
    result.set_coord(index, coeff * powers[static_cast<std::size_t>(algebra.layer_of(index))]);
  }
  return result;
}

GroupPoint dilate(const Rational& epsilon, const GroupPoint& a) {
  return GroupPoint{dilate_vector(epsilon, a.log)};
}

LieVector QuotientMapHandle::project(const LieVector& v) const {
  if (!same_algebra(v.algebra(), source_)) {
    throw Error(ErrorCode::MixedAlgebras, "vector is not over the quotient source algebra");
  }
  LieVector result(target_);
  const int top = source_->step();
  for (const auto& [index, coeff] : v.coords()) {
    if (source_->layer_of(index) < top) result.set_coord(index, coeff);
  }
  return result;
}

GroupPoint QuotientMapHandle::project(const GroupPoint& a) const {
  return GroupPoint{project(a.log)};
}

LieVector QuotientMapHandle::lift(const LieVector& v) const {
  if (!same_algebra(v.algebra(), target_)) {
    throw Error(ErrorCode::MixedAlgebras, "vector is not over the quotient target algebra");
  }
  LieVector result(source_);
  for (const auto& [index, coeff] : v.coords()) result.set_coord(index, coeff);
  return result;
}

GroupPoint QuotientMapHandle::lift(const GroupPoint& a) const { return GroupPoint{lift(a.log)}; }

QuotientMapHandle quotient_map(const AlgebraHandle& algebra) {
  if (!algebra) throw Error(ErrorCode::MalformedInput, "no algebra given");
  if (algebra->step() < 2) {
    throw Error(ErrorCode::MalformedInput, "quotient by the top layer needs step >= 2");
  }

  // Rebuild the truncated algebra through the validating loader; dropping a
  // whole layer preserves every invariant, so this cannot fail on valid
  // input, and basis indices below the top layer are unchanged.
  AlgebraDescription description;
  description.layer_dims.assign(algebra->layer_dims().begin(),
                                algebra->layer_dims().end() - 1);
  const int target_dim = algebra->dim() - algebra->layer_dim(algebra->step());
  description.basis_labels.reserve(static_cast<std::size_t>(target_dim));
  for (int i = 0; i < target_dim; ++i) description.basis_labels.push_back(algebra->basis_label(i));
  for (int i = 0; i < target_dim; ++i) {
    for (int j = i + 1; j < target_dim; ++j) {
      const auto& row = algebra->table(i, j);
      std::map<int, Rational> kept;
      for (const auto& [k, c] : row) {
        if (k < target_dim) kept.emplace(k, c);
      }
      if (!kept.empty()) description.brackets.push_back(BracketEntry{i, j, std::move(kept)});
    }
  }
  return QuotientMapHandle(algebra, load_stratified(description));
}

}  // namespace carnot
