#pragma once

#include <map>
#include <string>
#include <vector>

#include "facons/poly.hpp"

namespace facons {

/// Finite Laurent polynomial in a parameter u whose coefficients are
/// polynomials over a symbol arena. Zero coefficients are never stored.
class LaurentExpansion {
public:
  LaurentExpansion() = default;
  explicit LaurentExpansion(ArenaPtr symbols) : symbols_(std::move(symbols)) {}
  LaurentExpansion(ArenaPtr symbols, int exponent, Polynomial coeff);

  static LaurentExpansion constant(ArenaPtr symbols, const Polynomial& c);

  const ArenaPtr& symbols() const { return symbols_; }
  const std::map<int, Polynomial>& coefficients() const { return coeffs_; }
  /// Zero polynomial when absent.
  Polynomial coefficient(int exponent) const;
  bool is_zero() const { return coeffs_.empty(); }
  int max_exponent() const;
  int min_exponent() const;

  void add_term(int exponent, const Polynomial& coeff);

  friend LaurentExpansion operator+(const LaurentExpansion& a, const LaurentExpansion& b);
  friend LaurentExpansion operator*(const LaurentExpansion& a, const LaurentExpansion& b);
  friend bool operator==(const LaurentExpansion& a, const LaurentExpansion& b);

  std::string to_string(const std::string& param = "u") const;

private:
  ArenaPtr symbols_;
  std::map<int, Polynomial> coeffs_;
};

/// Per-coordinate substitution x_j -> Laurent polynomial in u. The
/// single-term monomial form b_j + c_j u^{w_j} is built by the facon engine;
/// ray templates use arbitrary entries. side_equations must hold on the
/// symbols (inverse relations such as c*z - 1).
struct CurveAnsatz {
  ArenaPtr symbols;
  std::vector<LaurentExpansion> coords;
  std::vector<Polynomial> side_equations;
  std::vector<int> weights;  // empty when the template is not weight-driven

  std::size_t size() const { return coords.size(); }
};

int checked_add(int a, int b);
int checked_mul(int a, int b);

LaurentExpansion substitute_curve(const Polynomial& p, const CurveAnsatz& ansatz);

/// d/du of a Laurent expansion.
LaurentExpansion derivative_u(const LaurentExpansion& e);

/// Replace symbols by complex values, yielding exponent -> complex coefficient.
std::map<int, Complex> specialize(const LaurentExpansion& e, std::span<const Complex> values);
std::map<int, Rational> specialize_exact(const LaurentExpansion& e, std::span<const Rational> values);

}  // namespace facons
