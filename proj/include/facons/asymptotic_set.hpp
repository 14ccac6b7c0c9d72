#pragma once

#include <stdexcept>
#include <vector>

#include "facons/groebner.hpp"
#include "facons/poly.hpp"

namespace facons {

class NonDominantMap : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct CoordinateEliminant {
  std::size_t index = 0;
  /// Over the arena (targets..., x_i).
  Polynomial eliminant;
  /// Leading coefficient in x_i, over the target arena.
  Polynomial phi0;
};

struct AsymptoticComponent {
  Polynomial equation;  // target arena, primitive, squarefree
  /// Set unless the factor is certified irreducible (degree one, or a
  /// binomial in disjoint variables with coprime exponents).
  bool possibly_reducible = false;
  std::vector<std::size_t> sources;  // coordinates whose phi0 it divides
};

struct AsymptoticSet {
  ArenaPtr target;
  std::vector<AsymptoticComponent> components;
  std::vector<CoordinateEliminant> per_coordinate;

  std::vector<Polynomial> equations() const;
  /// Does some component vanish at the point (exact).
  bool contains(std::span<const Rational> point) const;
};

bool check_dominant(const PolynomialMap& f);

/// Arena holding the target names followed by the name of x_i.
ArenaPtr eliminant_arena(const PolynomialMap& f, std::size_t i);
Polynomial coordinate_eliminant(const PolynomialMap& f, std::size_t i);
/// Leading coefficient of the eliminant in its last variable, over `target`.
Polynomial phi0(const Polynomial& eliminant, const ArenaPtr& target);
/// E(F(x), x_i) as a polynomial over the source arena; zero when correct.
Polynomial eliminant_residual(const PolynomialMap& f, std::size_t i, const Polynomial& eliminant);

AsymptoticSet asymptotic_set(const PolynomialMap& f);

bool fiber_nonempty(const PolynomialMap& f, std::span<const Rational> point);

/// Multivariate gcd over Q, primitive with positive leading coefficient.
Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b);
/// Primitive squarefree part.
Polynomial squarefree_part(const Polynomial& p);

}  // namespace facons
