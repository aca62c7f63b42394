#include "carnot/algebra.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "carnot/linalg.hpp"
#include "tensor_poly.hpp"

namespace carnot {

namespace {

using detail::TensorPoly;
using detail::Word;

// A word is Lyndon iff it is strictly smaller than every proper suffix.
bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  for (std::size_t start = 1; start < w.size(); ++start) {
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + start, w.end())) {
      return false;
    }
  }
  return true;
}

std::vector<Word> lyndon_words(int rank, int maxlen) {
  std::vector<Word> result;
  Word w;
  // depth-first enumeration of all words, filtered by the definition
  auto enumerate = [&](auto&& self) -> void {
    if (!w.empty() && is_lyndon(w)) result.push_back(w);
    if (static_cast<int>(w.size()) == maxlen) return;
    for (int letter = 0; letter < rank; ++letter) {
      w.push_back(letter);
      self(self);
      w.pop_back();
    }
  };
  enumerate(enumerate);
  std::sort(result.begin(), result.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return result;
}

// Standard factorization w = uv with v the lexicographically least proper
// suffix; both factors of a Lyndon word are again Lyndon.
std::size_t standard_split(const Word& w) {
  std::size_t best = 1;
  for (std::size_t start = 2; start < w.size(); ++start) {
    if (std::lexicographical_compare(w.begin() + start, w.end(), w.begin() + best, w.end())) {
      best = start;
    }
  }
  return best;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char byte : data) {
    h ^= byte;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

using Sparse = std::map<int, Rational>;

void sparse_axpy(Sparse& acc, const Rational& scale, const Sparse& other) {
  if (scale == 0) return;
  for (const auto& [index, coeff] : other) {
    auto it = acc.find(index);
    if (it == acc.end()) {
      acc.emplace(index, scale * coeff);
    } else {
      it->second += scale * coeff;
      if (it->second == 0) acc.erase(it);
    }
  }
}

// Bracket of sparse coordinate maps against a raw table (used during
// construction, before an AlgebraHandle exists).
Sparse raw_bracket(const std::vector<Sparse>& table, int dim, const Sparse& x, const Sparse& y) {
  Sparse result;
  for (const auto& [i, ci] : x) {
    for (const auto& [j, cj] : y) {
      sparse_axpy(result, ci * cj, table[static_cast<std::size_t>(i * dim + j)]);
    }
  }
  return result;
}

std::string digest_of(const std::vector<int>& layer_dims, const std::vector<Sparse>& table,
                      int dim) {
  std::ostringstream canon;
  canon << "dims";
  for (int d : layer_dims) canon << ':' << d;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const Sparse& row = table[static_cast<std::size_t>(i * dim + j)];
      if (row.empty()) continue;
      canon << ';' << i << ',' << j;
      for (const auto& [k, c] : row) canon << ':' << k << '=' << to_string(c);
    }
  }
  return hex64(fnv1a(canon.str()));
}

// Writes a Lie element of the truncated tensor algebra in the Lyndon basis.
// Relies on triangularity: the expansion of a standard bracketing starts at
// its own word with coefficient 1, followed by lexicographically larger
// words of the same degree. A nonzero residual means the input was not a
// Lie element (or the basis machinery is broken), so it is fatal.
Sparse project_onto_basis(TensorPoly residual, const std::map<Word, int>& index_of,
                          const std::vector<TensorPoly>& tau) {
  Sparse result;
  while (!residual.terms.empty()) {
    const auto& [word, coeff] = *residual.terms.begin();
    auto found = index_of.find(word);
    if (found == index_of.end()) {
      throw Error(ErrorCode::InvariantViolation,
                  "tensor element is not in the span of the Lyndon basis");
    }
    const int index = found->second;
    result[index] += coeff;
    if (result[index] == 0) result.erase(index);
    detail::tp_axpy(residual, -coeff, tau[static_cast<std::size_t>(index)]);
  }
  return result;
}

}  // namespace

int StratifiedAlgebra::layer_of(int basis_index) const {
  if (basis_index < 0 || basis_index >= dim()) {
    throw Error(ErrorCode::MalformedInput,
                "basis index " + std::to_string(basis_index) + " out of range");
  }
  return layer_of_[static_cast<std::size_t>(basis_index)];
}

int StratifiedAlgebra::layer_start(int layer) const {
  if (layer < 1 || layer > step()) {
    throw Error(ErrorCode::WrongLayer, "layer " + std::to_string(layer) + " out of range");
  }
  return layer_start_[static_cast<std::size_t>(layer - 1)];
}

int StratifiedAlgebra::layer_dim(int layer) const {
  if (layer < 1 || layer > step()) {
    throw Error(ErrorCode::WrongLayer, "layer " + std::to_string(layer) + " out of range");
  }
  return layer_dims_[static_cast<std::size_t>(layer - 1)];
}

const std::string& StratifiedAlgebra::basis_label(int basis_index) const {
  layer_of(basis_index);  // bounds check
  return labels_[static_cast<std::size_t>(basis_index)];
}

const std::map<int, Rational>& StratifiedAlgebra::table(int i, int j) const {
  layer_of(i);
  layer_of(j);
  return table_[static_cast<std::size_t>(i * dim() + j)];
}

std::pair<int, int> StratifiedAlgebra::children(int basis_index) const {
  layer_of(basis_index);
  return children_[static_cast<std::size_t>(basis_index)];
}

AlgebraHandle build_free_nilpotent(int rank, int step) {
  if (rank < 2) throw Error(ErrorCode::MalformedInput, "free nilpotent construction needs rank >= 2");
  if (step < 1) throw Error(ErrorCode::MalformedInput, "step must be at least 1");
  double words = 1;
  for (int i = 0; i < step; ++i) words *= rank;
  if (words > (1 << 22)) {
    throw Error(ErrorCode::MalformedInput, "rank^step beyond supported scale");
  }

  const std::vector<Word> basis_words = lyndon_words(rank, step);
  const int dim = static_cast<int>(basis_words.size());
  std::map<Word, int> index_of;
  for (int i = 0; i < dim; ++i) index_of.emplace(basis_words[static_cast<std::size_t>(i)], i);

  auto algebra = std::shared_ptr<StratifiedAlgebra>(new StratifiedAlgebra());
  algebra->layer_dims_.assign(static_cast<std::size_t>(step), 0);
  algebra->layer_of_.resize(static_cast<std::size_t>(dim));
  algebra->layer_start_.assign(static_cast<std::size_t>(step), 0);
  algebra->children_.resize(static_cast<std::size_t>(dim));
  algebra->labels_.resize(static_cast<std::size_t>(dim));

  for (int i = 0; i < dim; ++i) {
    const Word& w = basis_words[static_cast<std::size_t>(i)];
    const int layer = static_cast<int>(w.size());
    if (algebra->layer_dims_[static_cast<std::size_t>(layer - 1)] == 0) {
      algebra->layer_start_[static_cast<std::size_t>(layer - 1)] = i;
    }
    algebra->layer_dims_[static_cast<std::size_t>(layer - 1)] += 1;
    algebra->layer_of_[static_cast<std::size_t>(i)] = layer;
    if (w.size() == 1) {
      algebra->children_[static_cast<std::size_t>(i)] = {-1, -1};
      algebra->labels_[static_cast<std::size_t>(i)] = std::to_string(w[0] + 1);
    } else {
      const std::size_t split = standard_split(w);
      const Word left(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(split));
      const Word right(w.begin() + static_cast<std::ptrdiff_t>(split), w.end());
      if (!is_lyndon(left) || !is_lyndon(right)) {
        throw Error(ErrorCode::InvariantViolation, "standard factorization is not Lyndon");
      }
      const int li = index_of.at(left);
      const int ri = index_of.at(right);
      algebra->children_[static_cast<std::size_t>(i)] = {li, ri};
      algebra->labels_[static_cast<std::size_t>(i)] =
          "[" + algebra->labels_[static_cast<std::size_t>(li)] + "," +
          algebra->labels_[static_cast<std::size_t>(ri)] + "]";
    }
  }

  // Expand each standard bracketing in the tensor algebra, children first
  // (they always precede their parent in (length, lex) order).
  std::vector<TensorPoly> tau(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const auto [li, ri] = algebra->children_[static_cast<std::size_t>(i)];
    if (li < 0) {
      tau[static_cast<std::size_t>(i)] =
          detail::tp_letter(step, basis_words[static_cast<std::size_t>(i)][0]);
    } else {
      tau[static_cast<std::size_t>(i)] = detail::tp_commutator(
          tau[static_cast<std::size_t>(li)], tau[static_cast<std::size_t>(ri)]);
    }
  }

  algebra->table_.resize(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      TensorPoly commutator = detail::tp_commutator(tau[static_cast<std::size_t>(i)],
                                                    tau[static_cast<std::size_t>(j)]);
      Sparse coords = project_onto_basis(std::move(commutator), index_of, tau);
      Sparse negated;
      for (const auto& [k, c] : coords) negated.emplace(k, -c);
      algebra->table_[static_cast<std::size_t>(i * dim + j)] = std::move(coords);
      algebra->table_[static_cast<std::size_t>(j * dim + i)] = std::move(negated);
    }
  }

  algebra->display_name_ =
      "free-nilpotent(rank " + std::to_string(rank) + ", step " + std::to_string(step) + ")";
  algebra->digest_ = digest_of(algebra->layer_dims_, algebra->table_, dim);
  return algebra;
}

AlgebraHandle load_stratified(const AlgebraDescription& description) {
  const auto& dims = description.layer_dims;
  if (dims.empty()) throw Error(ErrorCode::MalformedInput, "no layers given");
  int dim = 0;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (dims[j] < 1) {
      throw Error(ErrorCode::MalformedInput,
                  "layer " + std::to_string(j + 1) + " has nonpositive dimension");
    }
    dim += dims[j];
  }
  const int step = static_cast<int>(dims.size());

  std::vector<int> layer_of(static_cast<std::size_t>(dim));
  std::vector<int> layer_start(static_cast<std::size_t>(step));
  {
    int index = 0;
    for (int j = 0; j < step; ++j) {
      layer_start[static_cast<std::size_t>(j)] = index;
      for (int k = 0; k < dims[static_cast<std::size_t>(j)]; ++k) {
        layer_of[static_cast<std::size_t>(index++)] = j + 1;
      }
    }
  }

  std::vector<Sparse> table(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  std::vector<bool> given(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), false);
  std::vector<std::string> report;
  auto complain = [&report](ErrorCode code, const std::string& what) {
    report.push_back(std::string(error_code_name(code)) + ": " + what);
    return code;
  };
  std::vector<ErrorCode> codes;

  for (const auto& entry : description.brackets) {
    if (entry.i < 0 || entry.i >= dim || entry.j < 0 || entry.j >= dim) {
      codes.push_back(complain(ErrorCode::MalformedInput,
                               "bracket entry (" + std::to_string(entry.i) + "," +
                                   std::to_string(entry.j) + ") out of range"));
      continue;
    }
    const std::size_t slot = static_cast<std::size_t>(entry.i * dim + entry.j);
    if (given[slot]) {
      codes.push_back(complain(ErrorCode::MalformedInput,
                               "duplicate bracket entry (" + std::to_string(entry.i) + "," +
                                   std::to_string(entry.j) + ")"));
      continue;
    }
    given[slot] = true;
    Sparse coords;
    bool ok = true;
    for (const auto& [k, c] : entry.coords) {
      if (k < 0 || k >= dim) {
        codes.push_back(complain(ErrorCode::MalformedInput,
                                 "bracket coordinate index " + std::to_string(k) +
                                     " out of range in entry (" + std::to_string(entry.i) + "," +
                                     std::to_string(entry.j) + ")"));
        ok = false;
        break;
      }
      if (c != 0) coords[k] = c;
    }
    if (ok) table[slot] = std::move(coords);
  }

  // Fill unspecified opposite orientations by antisymmetry; diagonal must
  // be zero; doubly specified pairs are checked, not overwritten.
  for (int i = 0; i < dim; ++i) {
    const std::size_t diag = static_cast<std::size_t>(i * dim + i);
    if (given[diag] && !table[diag].empty()) {
      codes.push_back(complain(ErrorCode::AntisymmetryViolation,
                               "[b" + std::to_string(i + 1) + ",b" + std::to_string(i + 1) +
                                   "] must be zero"));
      table[diag].clear();
    }
    for (int j = i + 1; j < dim; ++j) {
      const std::size_t upper = static_cast<std::size_t>(i * dim + j);
      const std::size_t lower = static_cast<std::size_t>(j * dim + i);
      if (given[upper] && given[lower]) {
        Sparse expected;
        for (const auto& [k, c] : table[upper]) expected.emplace(k, -c);
        if (expected != table[lower]) {
          codes.push_back(complain(ErrorCode::AntisymmetryViolation,
                                   "[b" + std::to_string(i + 1) + ",b" + std::to_string(j + 1) +
                                       "] and [b" + std::to_string(j + 1) + ",b" +
                                       std::to_string(i + 1) + "] are not opposite"));
        }
      } else if (given[upper]) {
        for (const auto& [k, c] : table[upper]) table[lower].emplace(k, -c);
      } else if (given[lower]) {
        for (const auto& [k, c] : table[lower]) table[upper].emplace(k, -c);
      }
    }
  }

  // Grading: [V_a, V_b] lands exactly in V_{a+b}, vanishing beyond the step.
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const Sparse& row = table[static_cast<std::size_t>(i * dim + j)];
      if (row.empty()) continue;
      const int target = layer_of[static_cast<std::size_t>(i)] + layer_of[static_cast<std::size_t>(j)];
      for (const auto& [k, c] : row) {
        (void)c;
        if (target > step || layer_of[static_cast<std::size_t>(k)] != target) {
          codes.push_back(complain(ErrorCode::GradingViolation,
                                   "[b" + std::to_string(i + 1) + ",b" + std::to_string(j + 1) +
                                       "] has a component in layer " +
                                       std::to_string(layer_of[static_cast<std::size_t>(k)]) +
                                       ", expected layer " + std::to_string(target)));
          break;
        }
      }
    }
  }

  // Jacobi on all basis triples.
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      for (int k = j + 1; k < dim; ++k) {
        Sparse sum = raw_bracket(table, dim, table[static_cast<std::size_t>(i * dim + j)],
                                 Sparse{{k, Rational(1)}});
        sparse_axpy(sum, Rational(1),
                    raw_bracket(table, dim, table[static_cast<std::size_t>(j * dim + k)],
                                Sparse{{i, Rational(1)}}));
        sparse_axpy(sum, Rational(1),
                    raw_bracket(table, dim, table[static_cast<std::size_t>(k * dim + i)],
                                Sparse{{j, Rational(1)}}));
        if (!sum.empty()) {
          codes.push_back(complain(ErrorCode::JacobiViolation,
                                   "Jacobi fails on triple (b" + std::to_string(i + 1) + ",b" +
                                       std::to_string(j + 1) + ",b" + std::to_string(k + 1) + ")"));
        }
      }
    }
  }

  // Generation: V_{j+1} = [V_1, V_j], checked by exact rank.
  for (int j = 1; j < step; ++j) {
    Matrix span;
    for (int a = 0; a < dims[0]; ++a) {
      for (int c = 0; c < dims[static_cast<std::size_t>(j - 1)]; ++c) {
        const int bi = layer_start[0] + a;
        const int bj = layer_start[static_cast<std::size_t>(j - 1)] + c;
        const Sparse& row = table[static_cast<std::size_t>(bi * dim + bj)];
        std::vector<Rational> dense(static_cast<std::size_t>(dims[static_cast<std::size_t>(j)]),
                                    Rational(0));
        for (const auto& [k, coeff] : row) {
          if (layer_of[static_cast<std::size_t>(k)] == j + 1) {
            dense[static_cast<std::size_t>(k - layer_start[static_cast<std::size_t>(j)])] = coeff;
          }
        }
        span.push_back(std::move(dense));
      }
    }
    if (matrix_rank(span) != dims[static_cast<std::size_t>(j)]) {
      codes.push_back(complain(ErrorCode::NotGenerated,
                               "layer " + std::to_string(j + 1) +
                                   " is not spanned by brackets [V1, V" + std::to_string(j) + "]"));
    }
  }

  if (!codes.empty()) {
    std::string message = "algebra validation failed:";
    for (const auto& line : report) message += "\n  " + line;
    throw Error(codes.front(), message);
  }

  auto algebra = std::shared_ptr<StratifiedAlgebra>(new StratifiedAlgebra());
  algebra->layer_dims_ = dims;
  algebra->layer_of_ = std::move(layer_of);
  algebra->layer_start_ = std::move(layer_start);
  algebra->children_.assign(static_cast<std::size_t>(dim), {-1, -1});
  if (static_cast<int>(description.basis_labels.size()) == dim) {
    algebra->labels_ = description.basis_labels;
  } else {
    algebra->labels_.resize(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      algebra->labels_[static_cast<std::size_t>(i)] = "b" + std::to_string(i + 1);
    }
  }
  algebra->table_ = std::move(table);
  std::ostringstream name;
  name << "stratified(";
  for (std::size_t j = 0; j < dims.size(); ++j) name << (j ? "," : "") << dims[j];
  name << ")";
  algebra->display_name_ = name.str();
  algebra->digest_ = digest_of(algebra->layer_dims_, algebra->table_, dim);
  return algebra;
}

AlgebraDescription describe(const StratifiedAlgebra& algebra) {
  AlgebraDescription description;
  description.layer_dims = algebra.layer_dims();
  description.basis_labels.reserve(static_cast<std::size_t>(algebra.dim()));
  for (int i = 0; i < algebra.dim(); ++i) description.basis_labels.push_back(algebra.basis_label(i));
  for (int i = 0; i < algebra.dim(); ++i) {
    for (int j = i + 1; j < algebra.dim(); ++j) {
      const auto& row = algebra.table(i, j);
      if (row.empty()) continue;
      description.brackets.push_back(BracketEntry{i, j, row});
    }
  }
  return description;
}

Rational LieVector::coord(int basis_index) const {
  auto it = coords_.find(basis_index);
  return it == coords_.end() ? Rational(0) : it->second;
}

void LieVector::set_coord(int basis_index, const Rational& value) {
  if (!algebra_) throw Error(ErrorCode::MalformedInput, "vector has no algebra attached");
  algebra_->layer_of(basis_index);  // bounds check
  if (value == 0) {
    coords_.erase(basis_index);
  } else {
    coords_[basis_index] = value;
  }
}

int LieVector::lowest_layer() const {
  if (coords_.empty()) return 0;
  return algebra_->layer_of(coords_.begin()->first);
}

int LieVector::highest_layer() const {
  if (coords_.empty()) return 0;
  return algebra_->layer_of(coords_.rbegin()->first);
}

LieVector& LieVector::operator+=(const LieVector& other) {
  require_same_algebra(*this, other);
  for (const auto& [index, coeff] : other.coords_) {
    auto it = coords_.find(index);
    if (it == coords_.end()) {
      coords_.emplace(index, coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) coords_.erase(it);
    }
  }
  return *this;
}

LieVector& LieVector::operator-=(const LieVector& other) {
  require_same_algebra(*this, other);
  for (const auto& [index, coeff] : other.coords_) {
    auto it = coords_.find(index);
    if (it == coords_.end()) {
      coords_.emplace(index, -coeff);
    } else {
      it->second -= coeff;
      if (it->second == 0) coords_.erase(it);
    }
  }
  return *this;
}

LieVector& LieVector::operator*=(const Rational& scale) {
  if (scale == 0) {
    coords_.clear();
    return *this;
  }
  for (auto& [index, coeff] : coords_) {
    (void)index;
    coeff *= scale;
  }
  return *this;
}

bool operator==(const LieVector& a, const LieVector& b) {
  if (a.algebra() && b.algebra()) require_same_algebra(a, b);
  return a.coords_ == b.coords_;
}

LieVector zero_vector(const AlgebraHandle& algebra) { return LieVector(algebra); }

LieVector basis_vector(const AlgebraHandle& algebra, int basis_index) {
  LieVector v(algebra);
  v.set_coord(basis_index, Rational(1));
  return v;
}

bool same_algebra(const AlgebraHandle& a, const AlgebraHandle& b) {
  if (!a || !b) return false;
  return a == b || a->digest() == b->digest();
}

void require_same_algebra(const LieVector& a, const LieVector& b) {
  if (!same_algebra(a.algebra(), b.algebra())) {
    throw Error(ErrorCode::MixedAlgebras, "operands belong to different algebras");
  }
}

LieVector bracket(const LieVector& a, const LieVector& b) {
  require_same_algebra(a, b);
  const StratifiedAlgebra& algebra = *a.algebra();
  LieVector result(a.algebra());
  for (const auto& [i, ci] : a.coords()) {
    for (const auto& [j, cj] : b.coords()) {
      const auto& row = algebra.table(i, j);
      if (row.empty()) continue;
      const Rational scale = ci * cj;
      for (const auto& [k, ck] : row) {
        const Rational updated = result.coord(k) + scale * ck;
        result.set_coord(k, updated);
      }
    }
  }
  return result;
}

LieVector layer_component(const LieVector& v, int layer) {
  if (!v.algebra()) throw Error(ErrorCode::MalformedInput, "vector has no algebra attached");
  const StratifiedAlgebra& algebra = *v.algebra();
  if (layer < 1 || layer > algebra.step()) {
    throw Error(ErrorCode::WrongLayer, "layer " + std::to_string(layer) + " out of range");
  }
  LieVector result(v.algebra());
  for (const auto& [index, coeff] : v.coords()) {
    if (algebra.layer_of(index) == layer) result.set_coord(index, coeff);
  }
  return result;
}

}  // namespace carnot
