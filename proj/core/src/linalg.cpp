#include "carnot/linalg.hpp"

#include <cstddef>

namespace carnot {

namespace {

// Forward elimination; returns pivot (row, column) pairs. Mutates m (and b
// when given) in place.
std::vector<std::pair<std::size_t, std::size_t>> eliminate(Matrix& m, std::vector<Rational>* b) {
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[row]);
    if (b != nullptr) std::swap((*b)[pivot], (*b)[row]);
    for (std::size_t r = row + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      const Rational factor = m[r][col] / m[row][col];
      for (std::size_t c = col; c < cols; ++c) {
        m[r][c] -= factor * m[row][c];
      }
      if (b != nullptr) (*b)[r] -= factor * (*b)[row];
    }
    pivots.emplace_back(row, col);
    ++row;
  }
  return pivots;
}

}  // namespace

int matrix_rank(Matrix m) {
  return static_cast<int>(eliminate(m, nullptr).size());
}

std::optional<std::vector<Rational>> solve_linear(Matrix a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  const auto pivots = eliminate(a, &b);
  for (std::size_t r = pivots.size(); r < rows; ++r) {
    if (b[r] != 0) return std::nullopt;
  }
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const auto [row, col] = pivots[k];
    Rational acc = b[row];
    for (std::size_t c = col + 1; c < cols; ++c) {
      acc -= a[row][c] * x[c];
    }
    x[col] = acc / a[row][col];
  }
  return x;
}

}  // namespace carnot
