// Independent cross-checks for the unit and acceptance suites: Lyndon word
// enumeration, necklace counts, a bisection bound for square roots, and a
// faithful triangular-matrix model of the rank-2 step-3 group built on the
// truncated word algebra. Nothing here reads the library's bracket tables
// or series, so agreement between the two sides is meaningful evidence.
#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/rational.hpp"

namespace oracles {

// All Lyndon words over {0, ..., rank-1} of length at most max_len,
// generated by Duval's algorithm in lexicographic order.
inline std::vector<std::vector<int>> lyndon_words(int rank, int max_len) {
  std::vector<std::vector<int>> words;
  std::vector<int> word{0};
  while (true) {
    words.push_back(word);
    std::vector<int> extended;
    extended.reserve(static_cast<std::size_t>(max_len));
    for (int i = 0; i < max_len; ++i) {
      extended.push_back(word[static_cast<std::size_t>(i) % word.size()]);
    }
    while (!extended.empty() && extended.back() == rank - 1) extended.pop_back();
    if (extended.empty()) break;
    ++extended.back();
    word = std::move(extended);
  }
  return words;
}

// counts[l - 1] = number of Lyndon words of length l.
inline std::vector<int> lyndon_counts(int rank, int max_len) {
  std::vector<int> counts(static_cast<std::size_t>(max_len), 0);
  for (const auto& word : lyndon_words(rank, max_len)) {
    ++counts[word.size() - 1];
  }
  return counts;
}

// Necklace count (1/n) sum_{d | n} mu(d) rank^(n/d), the expected dimension
// of the degree-n piece of a free Lie algebra on `rank` generators.
inline long witt_count(int rank, int length) {
  auto mobius = [](int n) {
    int sign = 1;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
      }
    }
    return n > 1 ? -sign : sign;
  };
  long total = 0;
  for (int d = 1; d <= length; ++d) {
    if (length % d != 0) continue;
    long power = 1;
    for (int i = 0; i < length / d; ++i) power *= rank;
    total += mobius(d) * power;
  }
  return total / length;
}

// Plain bisection: a rational q with q*q >= value whose distance to the
// true square root is at most tol.
inline carnot::Rational sqrt_upper(const carnot::Rational& value, const carnot::Rational& tol) {
  using carnot::Rational;
  if (value <= 0) return Rational(0);
  Rational low(0);
  Rational high = value < 1 ? Rational(1) : Rational(value);
  while (Rational(high - low) > tol) {
    Rational mid = Rational((low + high) / 2);
    if (Rational(mid * mid) >= value) {
      high = mid;
    } else {
      low = mid;
    }
  }
  return high;
}

// ---------------------------------------------------------------------
// Truncated word algebra on two letters, degree <= 3.
//
// Rational polynomials in noncommuting letters 'a' and 'b' with all words
// beyond length three dropped. Since every generator has degree >= 1,
// exp and log are finite sums here, and left multiplication by a group
// element is a unipotent triangular matrix in the degree-ordered word
// basis. That gives a faithful 15-dimensional matrix model of the rank-2
// step-3 group that shares no code with the library.

struct WordPoly {
  std::map<std::string, carnot::Rational> coeff;

  void add_term(const std::string& word, const carnot::Rational& value) {
    carnot::Rational sum = carnot::Rational(coeff[word] + value);
    if (sum == 0) {
      coeff.erase(word);
    } else {
      coeff[word] = sum;
    }
  }

  friend bool operator==(const WordPoly& x, const WordPoly& y) { return x.coeff == y.coeff; }
};

inline WordPoly wp_one() {
  WordPoly p;
  p.coeff[""] = carnot::Rational(1);
  return p;
}

inline WordPoly wp_letter(int index) {
  WordPoly p;
  p.coeff[std::string(1, static_cast<char>('a' + index))] = carnot::Rational(1);
  return p;
}

inline WordPoly wp_add(const WordPoly& x, const WordPoly& y) {
  WordPoly out = x;
  for (const auto& [word, value] : y.coeff) out.add_term(word, value);
  return out;
}

inline WordPoly wp_scale(const carnot::Rational& scale, const WordPoly& x) {
  WordPoly out;
  if (scale == 0) return out;
  for (const auto& [word, value] : x.coeff) {
    out.coeff[word] = carnot::Rational(scale * value);
  }
  return out;
}

inline WordPoly wp_sub(const WordPoly& x, const WordPoly& y) {
  return wp_add(x, wp_scale(carnot::Rational(-1), y));
}

inline WordPoly wp_mul(const WordPoly& x, const WordPoly& y) {
  WordPoly out;
  for (const auto& [wx, cx] : x.coeff) {
    for (const auto& [wy, cy] : y.coeff) {
      if (wx.size() + wy.size() <= 3) {
        out.add_term(wx + wy, carnot::Rational(cx * cy));
      }
    }
  }
  return out;
}

// exp for elements with no constant term: 1 + u + u^2/2 + u^3/6.
inline WordPoly wp_exp(const WordPoly& u) {
  assert(u.coeff.find("") == u.coeff.end());
  WordPoly square = wp_mul(u, u);
  WordPoly cube = wp_mul(square, u);
  WordPoly out = wp_add(wp_one(), u);
  out = wp_add(out, wp_scale(carnot::Rational(1, 2), square));
  out = wp_add(out, wp_scale(carnot::Rational(1, 6), cube));
  return out;
}

// log for elements with constant term 1: v - v^2/2 + v^3/3 on v = g - 1.
inline WordPoly wp_log(const WordPoly& g) {
  WordPoly v = wp_sub(g, wp_one());
  WordPoly square = wp_mul(v, v);
  WordPoly cube = wp_mul(square, v);
  WordPoly out = wp_sub(v, wp_scale(carnot::Rational(1, 2), square));
  out = wp_add(out, wp_scale(carnot::Rational(1, 3), cube));
  return out;
}

// The 15 words of length <= 3 ordered by (length, lexicographic).
inline const std::vector<std::string>& word_basis() {
  static const std::vector<std::string> basis = [] {
    std::vector<std::string> all{""};
    std::vector<std::string> current{""};
    for (int length = 1; length <= 3; ++length) {
      std::vector<std::string> longer;
      for (const std::string& word : current) {
        longer.push_back(word + 'a');
        longer.push_back(word + 'b');
      }
      // children were appended in lex order of the parent, so re-sorting
      // keeps the order stable and explicit
      std::sort(longer.begin(), longer.end());
      for (const std::string& word : longer) all.push_back(word);
      current = std::move(longer);
    }
    return all;
  }();
  return basis;
}

using RationalMatrix = std::vector<std::vector<carnot::Rational>>;

// Matrix of left multiplication by p in the word basis.
inline RationalMatrix left_multiplication_matrix(const WordPoly& p) {
  const auto& basis = word_basis();
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) index[basis[i]] = i;
  RationalMatrix m(basis.size(), std::vector<carnot::Rational>(basis.size(), carnot::Rational(0)));
  for (int column = 0; column < static_cast<int>(basis.size()); ++column) {
    WordPoly unit;
    unit.coeff[basis[static_cast<std::size_t>(column)]] = carnot::Rational(1);
    WordPoly image = wp_mul(p, unit);
    for (const auto& [word, value] : image.coeff) {
      m[static_cast<std::size_t>(index.at(word))][static_cast<std::size_t>(column)] = value;
    }
  }
  return m;
}

inline RationalMatrix matrix_multiply(const RationalMatrix& x, const RationalMatrix& y) {
  const std::size_t n = x.size();
  RationalMatrix out(n, std::vector<carnot::Rational>(n, carnot::Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (x[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[k][j] == 0) continue;
        out[i][j] = carnot::Rational(out[i][j] + x[i][k] * y[k][j]);
      }
    }
  }
  return out;
}

// Left multiplication by exp(u) only lengthens words, so in the
// degree-ordered basis the matrix must be lower triangular with unit
// diagonal. Checked, not assumed.
inline bool is_unipotent_lower_triangular(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i][i] != 1) return false;
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m[i][j] != 0) return false;
    }
  }
  return true;
}

// The image of the empty word under the matrix, read back as a polynomial:
// for a left-multiplication matrix this recovers the represented element.
inline WordPoly column_poly(const RationalMatrix& m) {
  const auto& basis = word_basis();
  WordPoly out;
  for (std::size_t row = 0; row < basis.size(); ++row) {
    if (m[row][0] != 0) out.coeff[basis[row]] = m[row][0];
  }
  return out;
}

// Expansion of a canonical basis element of a rank-2 algebra into the word
// algebra, following the bracketing recorded by the construction. The
// expansion map is injective on the free Lie algebra, so word-level
// equality decides Lie-level equality.
inline WordPoly expand_basis(const carnot::AlgebraHandle& algebra, int index) {
  const auto kids = algebra->children(index);
  if (kids.first < 0) return wp_letter(index);
  WordPoly left = expand_basis(algebra, kids.first);
  WordPoly right = expand_basis(algebra, kids.second);
  return wp_sub(wp_mul(left, right), wp_mul(right, left));
}

inline WordPoly expand_vector(const carnot::LieVector& v) {
  WordPoly out;
  for (const auto& [index, value] : v.coords()) {
    out = wp_add(out, wp_scale(value, expand_basis(v.algebra(), index)));
  }
  return out;
}

// log(exp(u) exp(v)) computed wholly inside the matrix model. The two
// factors are represented as 15x15 unipotent triangular matrices, the
// matrices are multiplied, and the product's group element is read off the
// image of the empty word.
inline WordPoly matrix_bch(const carnot::LieVector& u, const carnot::LieVector& v,
                           bool* triangular_ok = nullptr) {
  RationalMatrix left = left_multiplication_matrix(wp_exp(expand_vector(u)));
  RationalMatrix right = left_multiplication_matrix(wp_exp(expand_vector(v)));
  if (triangular_ok != nullptr) {
    *triangular_ok =
        is_unipotent_lower_triangular(left) && is_unipotent_lower_triangular(right);
  }
  return wp_log(column_poly(matrix_multiply(left, right)));
}

}  // namespace oracles
