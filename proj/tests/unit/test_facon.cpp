#include "doctest.h"

#include "facons/facon.hpp"
#include "../support/maps.hpp"

#include <chrono>

using namespace facons;

namespace {

Polynomial P(const std::string& s, const ArenaPtr& a) { return parse_polynomial(s, a); }

LocallyClosed cell(const PolynomialMap& f, std::vector<std::string> eqs, std::vector<std::string> open) {
  std::vector<Polynomial> e;
  for (auto& s : eqs) e.push_back(P(s, f.target()));
  LocallyClosed c{Ideal(f.target(), e)};
  for (auto& s : open) c.exclusions.push_back(Ideal(f.target(), {P(s, f.target())}));
  return c;
}

std::vector<std::string> labels(const CellFacons& c) {
  std::vector<std::string> out;
  for (const auto& f : c.facons()) out.push_back(f.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

using S = std::vector<std::string>;

}  // namespace

TEST_CASE("facon labels and uples") {
  CHECK(Facon({0, 2}, {1}).to_string() == "(1,3)[2]");
  CHECK(Facon({1}, {0}, 1).to_string() == "(2)[1]^{1*}");
  CHECK_THROWS(Facon({0}, {0}));
  PQUple a({{0, 1}, {1, 1}}), b({{0, 2}, {1, 2}}), c({{0, 1}, {1, 2}});
  CHECK(uple_equivalent(a, b));
  CHECK_FALSE(uple_equivalent(c, b));
  CHECK_THROWS(uple_equivalent(a, PQUple({{0, 1}, {2, 1}})));
}

TEST_CASE("limit constraints on the worked maps") {
  auto f = testmaps::three_coordinate();
  auto an = limit_constraints(f, weight_ansatz({1, -1, 0}));
  auto s = an.ansatz.symbols;
  CHECK(an.constraint_ideal.plus({}).generators().size() >= 1);
  CHECK(radical_member(P("b2", s), an.constraint_ideal));
  CHECK(an.limit_map[0] == P("c1*c2", s));
  CHECK(an.limit_map[1].is_zero());
  CHECK(an.limit_map[2] == P("c1*c2*b3", s));
  CHECK(classify_coordinates(an, f).to_string() == "(1)[2]");

  auto g = testmaps::cusp();
  auto cu = limit_constraints(g, weight_ansatz({-1, 1}));
  auto cs = cu.ansatz.symbols;
  CHECK(cu.limit_map[0] == P("c1^2*c2^2", cs));
  CHECK(cu.limit_map[1] == P("c1^3*c2^3", cs));
  CHECK(classify_coordinates(cu, g).to_string() == "(2)[1]");
  auto deep = limit_constraints(g, weight_ansatz({-2, 1}));
  CHECK(deep.limit_map[0].is_zero());
  CHECK(deep.limit_map[1].is_zero());

  auto h = testmaps::two_planes();
  auto an3 = limit_constraints(h, weight_ansatz({-1, -1, 2}));
  CHECK(classify_coordinates(an3, h, cell(h, {"a1", "a2"}, {})).to_string() == "(3)[1,2]");

  auto x = make_arena({"x"});
  PolynomialMap id(x, make_arena({"a"}), {P("x", x)});
  CHECK_THROWS_AS(limit_constraints(id, weight_ansatz({1})), NoFiniteLimit);
}

TEST_CASE("facons of the three-coordinate map, all seven cases") {
  auto t0 = std::chrono::steady_clock::now();
  auto f = testmaps::three_coordinate();
  FaconEngine engine(f, 3);
  CHECK(labels(engine.analyze(cell(f, {"a1"}, {"a2", "a3"}))) == S{"(3)[2]"});
  CHECK(labels(engine.analyze(cell(f, {"a2"}, {"a1", "a3"}))) == S{"(1)[2]"});
  CHECK(labels(engine.analyze(cell(f, {"a3"}, {"a1", "a2"}))) == S{"(2)[1,3]"});
  CHECK(labels(engine.analyze(cell(f, {"a2", "a3"}, {"a1"}))) == S{"(1)[2,3]", "(2)[1,3]"});
  CHECK(labels(engine.analyze(cell(f, {"a1", "a3"}, {"a2"}))) == S{"(2)[1,3]", "(3)[1,2]"});
  CHECK(labels(engine.analyze(cell(f, {"a1", "a2"}, {"a3"}))) == S{"(1,3)[2]"});
  CHECK(labels(engine.analyze(cell(f, {"a1", "a2", "a3"}, {}))) ==
        S{"(1)[2,3]", "(1,3)[2]", "(2)[1,3]", "(3)[1,2]"});
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("seven cells analysed in " << secs << " s");
}
