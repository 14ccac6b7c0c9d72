#pragma once

#include <string>
#include <vector>

#include "facons/groebner.hpp"

namespace facons {

/// V(equations) minus the union of V(h) over the exclusion ideals.
struct LocallyClosed {
  Ideal equations;
  std::vector<Ideal> exclusions;

  explicit LocallyClosed(Ideal eq) : equations(std::move(eq)) {}
  LocallyClosed(Ideal eq, std::vector<Ideal> ex) : equations(std::move(eq)), exclusions(std::move(ex)) {}

  const ArenaPtr& arena() const { return equations.arena(); }

  bool is_empty() const;
  /// Does the closed set V(closure) meet this set.
  bool meets(const Ideal& closure) const;
  bool contains_point(std::span<const Rational> point) const;
  LocallyClosed intersect(const LocallyClosed& other) const;
  /// Dimension of the closure of the equations part.
  int dimension() const;
  std::string to_string() const;
};

/// Every product of one generator from each ideal; the union of the
/// varieties is the zero set of these products.
std::vector<Polynomial> union_equations(const std::vector<Ideal>& ideals, const ArenaPtr& arena);

std::string ideal_to_string(const Ideal& ideal);

}  // namespace facons
