#pragma once

#include <optional>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

// Dense exact rational linear algebra. Dimensions here are tiny (at most a
// few dozen), so plain Gaussian elimination is all we need.
using Matrix = std::vector<std::vector<Rational>>;

int matrix_rank(Matrix m);

// Particular solution of A x = b with every free variable set to zero,
// eliminating columns left to right (deterministic pivoting). Returns
// nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve_linear(Matrix a, std::vector<Rational> b);

}  // namespace carnot
