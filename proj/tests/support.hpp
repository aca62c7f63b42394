// Shared helpers for the test binaries: a deterministic random stream for
// rationals, vectors and paths, and a wrapper that captures thrown error
// codes so tests can assert on the category instead of message text.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/path.hpp"

namespace testutil {

// Splitmix-style generator. The suites need reproducible streams across
// runs and platforms, not statistical quality, so this avoids the
// implementation-defined std::uniform_int_distribution.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t mixed = state_;
    mixed = (mixed ^ (mixed >> 30)) * 0xbf58476d1ce4e5b9ull;
    mixed = (mixed ^ (mixed >> 27)) * 0x94d049bb133111ebull;
    return mixed ^ (mixed >> 31);
  }

  // Integer in [lo, hi]; the slight modulo bias is irrelevant here.
  int pick(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  carnot::Rational rational(int numerator_bound, int denominator_bound) {
    carnot::Rational value(pick(-numerator_bound, numerator_bound), pick(1, denominator_bound));
    value.canonicalize();
    return value;
  }

  carnot::Rational positive_rational(int numerator_bound, int denominator_bound) {
    carnot::Rational value(pick(1, numerator_bound), pick(1, denominator_bound));
    value.canonicalize();
    return value;
  }

  // Strictly between 0 and 1.
  carnot::Rational unit_interval_rational(int denominator_bound) {
    int denominator = pick(2, denominator_bound);
    carnot::Rational value(pick(1, denominator - 1), denominator);
    value.canonicalize();
    return value;
  }

  carnot::LieVector vector(const carnot::AlgebraHandle& algebra, int numerator_bound = 9,
                           int denominator_bound = 7) {
    carnot::LieVector v(algebra);
    for (int i = 0; i < algebra->dim(); ++i) {
      v.set_coord(i, rational(numerator_bound, denominator_bound));
    }
    return v;
  }

  carnot::LieVector layer_vector(const carnot::AlgebraHandle& algebra, int layer,
                                 int numerator_bound = 9, int denominator_bound = 7) {
    carnot::LieVector v(algebra);
    const int start = algebra->layer_start(layer);
    for (int i = 0; i < algebra->layer_dim(layer); ++i) {
      v.set_coord(start + i, rational(numerator_bound, denominator_bound));
    }
    return v;
  }

  carnot::GroupPoint point(const carnot::AlgebraHandle& algebra) {
    return carnot::exp_point(vector(algebra));
  }

  // A path of first-layer segments with positive durations; directions are
  // made nonzero so no piece is dropped by construction.
  carnot::HorizontalPath path(const carnot::AlgebraHandle& algebra, int min_segments,
                              int max_segments) {
    std::vector<carnot::Segment> segments;
    const int count = pick(min_segments, max_segments);
    for (int k = 0; k < count; ++k) {
      carnot::LieVector direction = layer_vector(algebra, 1, 5, 4);
      if (direction.is_zero()) direction = carnot::basis_vector(algebra, 0);
      segments.push_back({direction, positive_rational(4, 5)});
    }
    return carnot::HorizontalPath(algebra, std::move(segments));
  }

 private:
  std::uint64_t state_;
};

// Runs fn and reports the error code it threw, if any.
template <typename Fn>
std::optional<carnot::ErrorCode> error_code_of(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const carnot::Error& error) {
    return error.code();
  }
  return std::nullopt;
}

}  // namespace testutil
