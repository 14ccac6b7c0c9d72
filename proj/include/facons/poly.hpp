#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace facons {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

Rational make_rational(long num, long den = 1);
std::string to_string(const Rational& q);

class ArenaMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable ordered list of variable names. Polynomials over different
/// arenas never mix; moving between arenas goes through embed().
class Arena {
public:
  explicit Arena(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a variable, or -1.
  int index_of(const std::string& name) const;

  bool operator==(const Arena& other) const { return names_ == other.names_; }

private:
  std::vector<std::string> names_;
};

using ArenaPtr = std::shared_ptr<const Arena>;

ArenaPtr make_arena(std::vector<std::string> names);
bool same_arena(const ArenaPtr& a, const ArenaPtr& b);

struct Monomial {
  std::vector<std::uint32_t> exps;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : exps(std::move(e)) {}

  std::size_t size() const { return exps.size(); }
  std::uint64_t degree() const;
  bool is_one() const;
  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend Monomial lcm(const Monomial& a, const Monomial& b);
  friend Monomial gcd(const Monomial& a, const Monomial& b);

  auto operator<=>(const Monomial&) const = default;
};

struct Term {
  Monomial mono;
  Rational coeff;
};

class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(ArenaPtr arena);
  Polynomial(ArenaPtr arena, const Rational& c);

  static Polynomial variable(ArenaPtr arena, std::size_t index);
  static Polynomial variable(ArenaPtr arena, const std::string& name);
  static Polynomial monomial(ArenaPtr arena, Monomial m, Rational c);
  /// Terms may repeat or be zero; they are merged.
  static Polynomial from_terms(ArenaPtr arena, std::vector<Term> terms);

  const ArenaPtr& arena() const { return arena_; }
  std::size_t nvars() const { return arena_ ? arena_->size() : 0; }
  /// Terms sorted by descending lex order on exponent vectors.
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;
  std::uint64_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool involves(std::size_t var) const;
  std::vector<std::size_t> support_vars() const;

  /// Coefficient of var^k, as a polynomial in the same arena not involving var.
  Polynomial coefficient_in(std::size_t var, std::uint32_t k) const;
  Polynomial leading_coefficient_in(std::size_t var) const;

  Polynomial derivative(std::size_t var) const;
  Polynomial pow(unsigned e) const;
  Polynomial operator-() const;

  /// Integer coefficients, gcd 1, positive leading (lex) coefficient.
  Polynomial primitive() const;
  /// Divide by the lex leading coefficient.
  Polynomial monic_lex() const;
  /// Content as a positive rational so that p = content * primitive().
  Rational content() const;

  /// Replace every variable of this arena by a polynomial of a common arena.
  Polynomial substitute(std::span<const Polynomial> images) const;
  /// Replace selected variables by rational values; arena unchanged.
  Polynomial specialize(const std::vector<std::pair<std::size_t, Rational>>& values) const;

  Complex evaluate(std::span<const Complex> point) const;
  Rational evaluate_exact(std::span<const Rational> point) const;

  std::string to_string() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

private:
  ArenaPtr arena_;
  std::vector<Term> terms_;
};

/// Rename into another arena by variable name. Throws ArenaMismatch when a
/// used variable is absent from the target.
Polynomial embed(const Polynomial& p, const ArenaPtr& target);

/// Exact division; throws std::domain_error when b does not divide a.
Polynomial divide_exact(const Polynomial& a, const Polynomial& b);
bool divides(const Polynomial& b, const Polynomial& a);

struct ComplexPoint {
  std::vector<Complex> coords;

  ComplexPoint() = default;
  explicit ComplexPoint(std::vector<Complex> c);
  static ComplexPoint from_rationals(std::span<const Rational> q);
  std::size_t size() const { return coords.size(); }
};

Complex evaluate(const Polynomial& p, const ComplexPoint& point);

/// F: C^n_(x) -> C^n_(a). Components live in the source arena.
class PolynomialMap {
public:
  PolynomialMap(ArenaPtr source, ArenaPtr target, std::vector<Polynomial> components);

  const ArenaPtr& source() const { return source_; }
  const ArenaPtr& target() const { return target_; }
  std::size_t dim() const { return components_.size(); }
  const Polynomial& operator[](std::size_t i) const { return components_.at(i); }
  const std::vector<Polynomial>& components() const { return components_; }

  std::vector<Complex> evaluate(std::span<const Complex> x) const;
  std::vector<Rational> evaluate_exact(std::span<const Rational> x) const;

private:
  ArenaPtr source_;
  ArenaPtr target_;
  std::vector<Polynomial> components_;
};

Polynomial jacobian_determinant(const PolynomialMap& f);

}  // namespace facons
