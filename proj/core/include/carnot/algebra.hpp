#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/rational.hpp"

namespace carnot {

class StratifiedAlgebra;

// Algebras are immutable after construction and shared by handle; every
// dependent value (vectors, group points, paths) keeps one of these alive.
using AlgebraHandle = std::shared_ptr<const StratifiedAlgebra>;

// One row of a structure table: [b_i, b_j] = sum_k coords[k] * b_k.
// Basis indices are 0-based in memory (serialized forms are 1-based).
struct BracketEntry {
  int i = 0;
  int j = 0;
  std::map<int, Rational> coords;
};

struct AlgebraDescription {
  std::vector<int> layer_dims;
  std::vector<BracketEntry> brackets;
  std::vector<std::string> basis_labels;  // optional, purely informational
};

// A stratified nilpotent Lie algebra g = V_1 + ... + V_s presented by exact
// rational structure constants on a layer-graded basis. Instances are built
// by build_free_nilpotent or load_stratified and are fully validated:
// antisymmetry, Jacobi, grading [V_i,V_j] in V_{i+j}, and the generation
// property V_{j+1} = [V_1, V_j] all hold exactly.
class StratifiedAlgebra {
 public:
  int step() const { return static_cast<int>(layer_dims_.size()); }
  int dim() const { return static_cast<int>(layer_of_.size()); }
  int rank() const { return layer_dims_[0]; }
  const std::vector<int>& layer_dims() const { return layer_dims_; }

  // Layers are numbered 1..step.
  int layer_of(int basis_index) const;
  int layer_start(int layer) const;
  int layer_dim(int layer) const;

  const std::string& basis_label(int basis_index) const;
  const std::string& display_name() const { return display_name_; }

  // Stable fingerprint of the content (layers plus structure constants);
  // used to detect mixed-algebra operands across (de)serialization.
  const std::string& digest() const { return digest_; }

  // Coordinates of [b_i, b_j]; empty map means zero.
  const std::map<int, Rational>& table(int i, int j) const;

  // For algebras produced by build_free_nilpotent: the two children of the
  // standard (Lyndon) bracketing of basis element i, or (-1,-1) for a
  // generator. Loaded algebras report (-1,-1) everywhere.
  std::pair<int, int> children(int basis_index) const;

 private:
  StratifiedAlgebra() = default;
  friend AlgebraHandle build_free_nilpotent(int rank, int step);
  friend AlgebraHandle load_stratified(const AlgebraDescription& description);

  std::vector<int> layer_dims_;
  std::vector<int> layer_of_;     // basis index -> layer (1-based)
  std::vector<int> layer_start_;  // layer (1-based) -> first basis index
  std::vector<std::string> labels_;
  std::vector<std::pair<int, int>> children_;
  // full antisymmetric table, dim x dim, row-major; zero rows stay empty
  std::vector<std::map<int, Rational>> table_;
  std::string display_name_;
  std::string digest_;
};

// Exact rational coordinate vector over an algebra basis; sparse, zero
// entries are never stored so equality is plain map comparison.
class LieVector {
 public:
  LieVector() = default;
  explicit LieVector(AlgebraHandle algebra) : algebra_(std::move(algebra)) {}

  const AlgebraHandle& algebra() const { return algebra_; }
  bool is_zero() const { return coords_.empty(); }
  const std::map<int, Rational>& coords() const { return coords_; }
  Rational coord(int basis_index) const;
  void set_coord(int basis_index, const Rational& value);

  // Lowest/highest layer holding a nonzero coordinate; 0 for the zero vector.
  int lowest_layer() const;
  int highest_layer() const;

  LieVector& operator+=(const LieVector& other);
  LieVector& operator-=(const LieVector& other);
  LieVector& operator*=(const Rational& scale);
  friend LieVector operator+(LieVector a, const LieVector& b) { return a += b; }
  friend LieVector operator-(LieVector a, const LieVector& b) { return a -= b; }
  friend LieVector operator*(const Rational& scale, LieVector v) { return v *= scale; }
  friend LieVector operator-(LieVector v) { return v *= Rational(-1); }
  friend bool operator==(const LieVector& a, const LieVector& b);

 private:
  AlgebraHandle algebra_;
  std::map<int, Rational> coords_;
};

// Free nilpotent Lie algebra on `rank` generators truncated at `step`,
// over the canonical Lyndon-word basis ordered by (length, lexicographic).
AlgebraHandle build_free_nilpotent(int rank, int step);

// Validates a user-supplied description exhaustively. The thrown Error's
// message reports every violated invariant with the offending basis
// pair/triple; the code is the first failing category.
AlgebraHandle load_stratified(const AlgebraDescription& description);

// Inverse of load_stratified up to entry ordering: canonical description
// (upper-triangular entries, i < j, sorted) of an existing algebra.
AlgebraDescription describe(const StratifiedAlgebra& algebra);

LieVector zero_vector(const AlgebraHandle& algebra);
LieVector basis_vector(const AlgebraHandle& algebra, int basis_index);

bool same_algebra(const AlgebraHandle& a, const AlgebraHandle& b);
void require_same_algebra(const LieVector& a, const LieVector& b);

// Bilinear extension of the structure table.
LieVector bracket(const LieVector& a, const LieVector& b);

// Projection onto V_j (1 <= j <= step); the sum over all layers recovers v.
LieVector layer_component(const LieVector& v, int layer);

}  // namespace carnot
