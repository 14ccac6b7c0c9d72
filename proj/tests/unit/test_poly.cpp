#include "doctest.h"

#include "facons/laurent.hpp"
#include "facons/map_parser.hpp"
#include "facons/poly.hpp"

#include <random>

using namespace facons;

namespace {

Polynomial P(const std::string& s, const ArenaPtr& a) { return parse_polynomial(s, a); }

Polynomial random_poly(const ArenaPtr& a, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-5, 5), ex(0, 2), nterms(1, 4);
  std::vector<Term> terms;
  int k = nterms(rng);
  for (int t = 0; t < k; ++t) {
    Monomial m(a->size());
    for (auto& e : m.exps) e = ex(rng);
    terms.push_back({m, make_rational(coef(rng), 1 + (rng() % 3))});
  }
  return Polynomial::from_terms(a, terms);
}

}  // namespace

TEST_CASE("evaluate small products") {
  auto x = make_arena({"x1", "x2"});
  std::vector<Complex> p23{2.0, 3.0};
  CHECK(P("x1*x2", x).evaluate(p23) == Complex(6.0));
  auto a = make_arena({"a1", "a2"});
  std::vector<Complex> ones{1.0, 1.0};
  CHECK(std::abs(P("a2^2-a1^3", a).evaluate(ones)) == 0.0);
  std::vector<Complex> p12{1.0, 2.0};
  // (1*2)^3 + 1
  CHECK(P("(x1*x2)^3+x1", x).evaluate(p12) == Complex(9.0));
  std::vector<Complex> bad{1.0};
  CHECK_THROWS(P("x1", x).evaluate(bad));
}

TEST_CASE("ring axioms on random polynomials") {
  auto a = make_arena({"x", "y", "z"});
  std::mt19937 rng(7);
  for (int i = 0; i < 40; ++i) {
    auto p = random_poly(a, rng), q = random_poly(a, rng), r = random_poly(a, rng);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(p * q == q * p);
    CHECK(p + q == q + p);
    CHECK((p - p).is_zero());
    std::vector<Rational> pt{make_rational(1, 3), make_rational(-2), make_rational(5, 7)};
    std::vector<Complex> cpt{1.0 / 3, -2.0, 5.0 / 7};
    Complex lhs = (p * q).evaluate(cpt), rhs = p.evaluate(cpt) * q.evaluate(cpt);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    CHECK((p * q).evaluate_exact(pt) == p.evaluate_exact(pt) * q.evaluate_exact(pt));
  }
}

TEST_CASE("substitute_curve exponent bookkeeping") {
  auto x = make_arena({"x1", "x2"});
  auto s = make_arena({"b2", "c1", "c2"});
  auto b2 = Polynomial::variable(s, "b2"), c1 = Polynomial::variable(s, "c1"),
       c2 = Polynomial::variable(s, "c2");
  CurveAnsatz g{s, {LaurentExpansion(s, 1, c1), LaurentExpansion(s, -1, c2)}, {}, {1, -1}};
  auto e = substitute_curve(P("x1*x2", x), g);
  CHECK(e.coefficients().size() == 1);
  CHECK(e.coefficient(0) == c1 * c2);

  CurveAnsatz g2 = g;
  g2.coords[1] = LaurentExpansion(s, 0, b2) + LaurentExpansion(s, -1, c2);
  auto e2 = substitute_curve(P("x1*x2", x), g2);
  CHECK(e2.coefficient(1) == c1 * b2);
  CHECK(e2.coefficient(0) == c1 * c2);
  CHECK(e2.coefficients().size() == 2);

  auto e3 = substitute_curve(P("5", x), g2);
  CHECK(e3.coefficients().size() == 1);
  CHECK(e3.coefficient(0) == Polynomial(s, 5));
}

TEST_CASE("substitute_curve is a ring homomorphism") {
  auto x = make_arena({"x", "y", "z"});
  auto s = make_arena({"b", "c", "d"});
  auto b = Polynomial::variable(s, 0), c = Polynomial::variable(s, 1), d = Polynomial::variable(s, 2);
  CurveAnsatz g{s,
                {LaurentExpansion(s, 2, c), LaurentExpansion(s, 0, b) + LaurentExpansion(s, -1, d),
                 LaurentExpansion(s, 0, b * d)},
                {},
                {}};
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    auto p = random_poly(x, rng), q = random_poly(x, rng);
    CHECK(substitute_curve(p + q, g) == substitute_curve(p, g) + substitute_curve(q, g));
    CHECK(substitute_curve(p * q, g) == substitute_curve(p, g) * substitute_curve(q, g));
  }
}

TEST_CASE("jacobian determinant") {
  auto x = make_arena({"x1", "x2", "x3"});
  PolynomialMap id(x, make_arena({"a1", "a2", "a3"}), {P("x1", x), P("x2", x), P("x3", x)});
  CHECK(jacobian_determinant(id) == Polynomial(x, 1));
  PolynomialMap f(x, make_arena({"a1", "a2", "a3"}), {P("x1*x2", x), P("x2*x3", x), P("x1*x2*x3", x)});
  CHECK(jacobian_determinant(f) == P("x1*x2^2*x3", x));
  auto x2 = make_arena({"x1", "x2"});
  PolynomialMap dep(x2, make_arena({"a1", "a2"}), {P("x1", x2), P("x1", x2)});
  CHECK(jacobian_determinant(dep).is_zero());
}

TEST_CASE("jacobian scales under linear change of coordinates") {
  auto x = make_arena({"x1", "x2", "x3"});
  auto t = make_arena({"a1", "a2", "a3"});
  std::vector<Polynomial> comps{P("x1*x2", x), P("x2*x3+x1", x), P("x1*x2*x3", x)};
  PolynomialMap f(x, t, comps);
  // L(x) = (2x1 + x2, x2 - x3, 3x3), det L = 6
  std::vector<Polynomial> lin{P("2*x1+x2", x), P("x2-x3", x), P("3*x3", x)};
  std::vector<Polynomial> composed;
  for (auto& c : comps) composed.push_back(c.substitute(lin));
  PolynomialMap fl(x, t, composed);
  CHECK(jacobian_determinant(fl) == Rational(6) * jacobian_determinant(f).substitute(lin));
}

TEST_CASE("arena discipline") {
  auto x = make_arena({"x"}), y = make_arena({"y"});
  CHECK_THROWS_AS(Polynomial::variable(x, 0) + Polynomial::variable(y, 0), ArenaMismatch);
  auto xy = make_arena({"x", "y"});
  CHECK(embed(Polynomial::variable(x, 0), xy) == Polynomial::variable(xy, 0));
  CHECK_THROWS(make_arena({"x", "x"}));
  CHECK_THROWS_AS(checked_add(std::numeric_limits<int>::max(), 1), std::overflow_error);
}
