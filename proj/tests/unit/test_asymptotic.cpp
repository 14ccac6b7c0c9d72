#include "doctest.h"

#include "facons/asymptotic_set.hpp"
#include "../support/maps.hpp"

#include <random>

using namespace facons;

namespace {

Polynomial P(const std::string& s, const ArenaPtr& a) { return parse_polynomial(s, a); }

bool associate(const Polynomial& a, const Polynomial& b) { return a.primitive() == b.primitive(); }

std::vector<std::string> component_strings(const AsymptoticSet& s) {
  std::vector<std::string> out;
  for (const auto& c : s.components) out.push_back(c.equation.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("dominance") {
  CHECK(check_dominant(testmaps::three_coordinate()));
  auto x = make_arena({"x1", "x2"});
  PolynomialMap dep(x, make_arena({"a1", "a2"}), {P("x1", x), P("x1", x)});
  CHECK_FALSE(check_dominant(dep));
  CHECK_THROWS_AS(asymptotic_set(dep), NonDominantMap);
  CHECK(check_dominant(parse_map("vars: x\nmap: x\n").map));
}

TEST_CASE("coordinate eliminants of the worked maps") {
  auto f = testmaps::three_coordinate();
  auto e1 = coordinate_eliminant(f, 0);
  CHECK(associate(e1, P("a2*x1 - a3", e1.arena())));
  CHECK(phi0(e1, f.target()) == P("a2", f.target()));

  auto g = testmaps::cusp();
  auto c1 = coordinate_eliminant(g, 0);
  CHECK(associate(c1, P("x1^2 - 2*a2*x1 + a2^2 - a1^3", c1.arena())));
  CHECK(phi0(c1, g.target()).is_constant());
  auto c2 = coordinate_eliminant(g, 1);
  bool matches = associate(c2, P("(a2^2-a1^3)*x2^2 - 2*a1^2*x2 - a1", c2.arena())) ||
                 associate(c2, P("(a2^2-a1^3)*x2^2 - 2*a1^2*x2 + a1", c2.arena()));
  CHECK_MESSAGE(matches, c2.to_string());
  CHECK(associate(phi0(c2, g.target()), P("a2^2 - a1^3", g.target())));

  auto id = parse_map("vars: x1\nmap: x1\n").map;
  auto ei = coordinate_eliminant(id, 0);
  CHECK(associate(ei, P("x1 - a1", ei.arena())));
}

TEST_CASE("asymptotic sets of the worked maps") {
  CHECK(component_strings(asymptotic_set(testmaps::three_coordinate())) ==
        std::vector<std::string>{"a1", "a2", "a3"});
  auto cusp = asymptotic_set(testmaps::cusp());
  REQUIRE(cusp.components.size() == 1);
  CHECK(associate(cusp.components[0].equation, P("a2^2-a1^3", cusp.target)));
  CHECK_FALSE(cusp.components[0].possibly_reducible);
  CHECK(component_strings(asymptotic_set(testmaps::two_planes())) == std::vector<std::string>{"a1", "a2"});
}

TEST_CASE("eliminant identity and squarefree components") {
  for (auto f : {testmaps::three_coordinate(), testmaps::cusp(), testmaps::two_planes()}) {
    auto s = asymptotic_set(f);
    for (const auto& ce : s.per_coordinate) CHECK(eliminant_residual(f, ce.index, ce.eliminant).is_zero());
    for (const auto& c : s.components) {
      CHECK_FALSE(c.equation.is_constant());
      for (auto v : c.equation.support_vars())
        CHECK(polynomial_gcd(c.equation, c.equation.derivative(v)).is_constant());
    }
  }
}

TEST_CASE("fiber membership") {
  auto f = testmaps::three_coordinate();
  std::vector<Rational> ones{1, 1, 1}, edge{1, 1, 0};
  CHECK(fiber_nonempty(f, ones));
  CHECK_FALSE(fiber_nonempty(f, edge));
  CHECK(asymptotic_set(f).contains(edge));
  auto id = parse_map("vars: x y\nmap: x; y\n").map;
  std::vector<Rational> q{Rational(3, 7), -2};
  CHECK(fiber_nonempty(id, q));
}

TEST_CASE("coverage sampling on the worked maps") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-10, 10);
  for (auto f : {testmaps::three_coordinate(), testmaps::cusp(), testmaps::two_planes()}) {
    auto s = asymptotic_set(f);
    for (int t = 0; t < 20; ++t) {
      std::vector<Rational> a;
      for (std::size_t k = 0; k < f.dim(); ++k) a.push_back(Rational(d(rng)));
      CHECK((fiber_nonempty(f, a) || s.contains(a)));
    }
  }
}

TEST_CASE("target permutation permutes components") {
  auto f = testmaps::three_coordinate();
  PolynomialMap g(f.source(), f.target(), {f[2], f[0], f[1]});
  auto sf = asymptotic_set(f), sg = asymptotic_set(g);
  REQUIRE(sf.components.size() == sg.components.size());
  // a_k of g corresponds to a_{perm(k)} of f: (a1,a2,a3)_g = (a3,a1,a2)_f.
  std::vector<Polynomial> images{P("a3", f.target()), P("a1", f.target()), P("a2", f.target())};
  std::vector<std::string> mapped;
  for (const auto& c : sg.components) mapped.push_back(c.equation.substitute(images).primitive().to_string());
  std::sort(mapped.begin(), mapped.end());
  std::vector<std::string> base;
  for (const auto& c : sf.components) base.push_back(c.equation.to_string());
  std::sort(base.begin(), base.end());
  CHECK(mapped == base);
}

TEST_CASE("gcd and squarefree helpers") {
  auto a = make_arena({"x", "y"});
  CHECK(polynomial_gcd(P("(x-y)*(x+1)", a), P("(x-y)*(y+1)", a)) == P("x-y", a));
  CHECK(squarefree_part(P("(x-y)^2*(x+1)", a)) == P("(x-y)*(x+1)", a).primitive());
}
