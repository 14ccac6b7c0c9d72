#pragma once

#include <optional>
#include <vector>

#include "facons/groebner.hpp"

namespace facons {

struct Solution {
  std::vector<Complex> values;
  /// Set when every value is rational and the generators vanish exactly.
  std::optional<std::vector<Rational>> exact;
};

struct SolveResult {
  std::vector<Solution> solutions;
  bool non_isolated = false;
  std::vector<std::size_t> sliced;  // variables fixed to pick representatives
};

/// Points of V(I). Zero-dimensional ideals are solved through the
/// eigenvectors of a generic multiplication matrix followed by Newton
/// polishing; positive-dimensional ones are first cut down by fixing an
/// independent set of variables.
SolveResult solve_system(const Ideal& ideal);

/// Closest fraction with denominator at most max_den, if within 1e-10
/// relative error.
std::optional<Rational> rationalize(double x, long max_den = 1000000);

}  // namespace facons
