// One line per acceptance criterion; exit status is nonzero if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "facons/asymptotic_set.hpp"
#include "facons/groebner.hpp"
#include "facons/stratifier.hpp"
#include "facons/tube.hpp"
#include "support/maps.hpp"
#include "support/oracles.hpp"

using namespace facons;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) detail = what;
    pass = pass && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

Polynomial P(const std::string& s, const ArenaPtr& a) { return parse_polynomial(s, a); }

std::vector<Rational> Q(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

bool associate(const Polynomial& a, const Polynomial& b) {
  return a.primitive() == b.primitive() || a.primitive() == (-b).primitive();
}

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

const Stratum* find_stratum(const Stratification& s, const std::string& facons) {
  for (const auto& st : s.strata)
    if (st.facon_string() == facons) return &st;
  return nullptr;
}

Stratification stratify(const PolynomialMap& f, const AsymptoticSet& sf) {
  FaconEngine engine(f, 3);
  return star_stratify(engine, sf);
}

std::vector<PolynomialMap> paper_maps() {
  return {testmaps::three_coordinate(), testmaps::cusp(), testmaps::two_planes()};
}

Outcome three_coordinate_pipeline() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto f = testmaps::three_coordinate();
  auto sf = asymptotic_set(f);
  o.require(sf.components.size() == 3, "expected three components");
  for (const char* name : {"a1", "a2", "a3"}) {
    Ideal want(f.target(), {P(name, f.target())});
    bool found = std::any_of(sf.components.begin(), sf.components.end(), [&](const AsymptoticComponent& c) {
      return ideal_equal(Ideal(f.target(), {c.equation}), want);
    });
    o.require(found, std::string("missing hyperplane ") + name);
  }
  using S = std::vector<std::string>;
  FaconEngine engine(f, 3);
  struct Case {
    S eqs, open, want;
  };
  const std::vector<Case> cases{
      {{"a1"}, {"a2", "a3"}, {"(3)[2]"}},
      {{"a2"}, {"a1", "a3"}, {"(1)[2]"}},
      {{"a3"}, {"a1", "a2"}, {"(2)[1,3]"}},
      {{"a2", "a3"}, {"a1"}, {"(1)[2,3]", "(2)[1,3]"}},
      {{"a1", "a3"}, {"a2"}, {"(2)[1,3]", "(3)[1,2]"}},
      {{"a1", "a2"}, {"a3"}, {"(1,3)[2]"}},
      {{"a1", "a2", "a3"}, {}, {"(1)[2,3]", "(1,3)[2]", "(2)[1,3]", "(3)[1,2]"}},
  };
  int k = 0;
  for (const auto& c : cases) {
    ++k;
    auto got = labels(engine.analyze(cell(f, c.eqs, c.open)));
    o.require(got == c.want, "case " + std::to_string(k) + " facons differ");
  }
  double secs = seconds_since(t0);
  o.require(secs < 10.0, "runtime " + fmt(secs) + " s");
  if (o.pass) o.detail = "3 hyperplanes, 7/7 cases, " + fmt(secs) + " s";
  return o;
}

Outcome cusp_pipeline() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto f = testmaps::cusp();
  auto sf = asymptotic_set(f);
  o.require(sf.components.size() == 1, "expected one component");
  if (!o.pass) return o;
  o.require(associate(sf.components[0].equation, P("a2^2 - a1^3", f.target())), "component is not a2^2 - a1^3");
  auto s = stratify(f, sf);
  o.require(s.strata.size() == 2, "expected two strata, got " + std::to_string(s.strata.size()));
  const Stratum* origin = find_stratum(s, "{(2)[1]^{1*}}");
  o.require(origin != nullptr, "no stratum with the single star facon");
  if (origin) {
    o.require(origin->dimension == 0, "star stratum is not a point");
    o.require(origin->set.contains_point(Q({0, 0})), "star stratum is not the origin");
  }
  double secs = seconds_since(t0);
  o.require(secs < 10.0, "runtime " + fmt(secs) + " s");
  if (o.pass) o.detail = "V(a2^2 - a1^3), 2 strata, " + fmt(secs) + " s";
  return o;
}

Outcome axis_plane_ray() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto f = testmaps::two_planes();
  auto sf = asymptotic_set(f);
  FaconEngine engine(f, 3);
  auto partition = partition_by_facons(engine, sf);
  auto s = star_stratify(partition, f.target(), 3);
  const Stratum* axis = find_stratum(s, "{(3)[1,2]}");
  const Stratum* plane = find_stratum(s, "{(3)[1]}");
  o.require(axis && plane, "axis or plane stratum missing");
  if (!o.pass) return o;
  auto tmpl = parse_ray_template("(3)[1,2]: 1 + p*v; -2 + q*v; l*m*u^2 | p*l - 1; q*m - 1", 3);
  Ray r = solve_ray(f, Q({3, 1, 3}), *axis, tmpl, &sf);
  o.require(r.exact(), "ray is not exact");
  if (!o.pass) return o;
  o.require(*r.exact_parameters == Q({1, 1, 1, 1}), "lambda, mu differ from 1");
  o.require(r.curve.to_string() == "(1 + 1/u, -2 + 1/u, u^2)", "curve is " + r.curve.to_string());
  // F(gamma(1)) recomputed from the source-side curve.
  o.require(f.evaluate_exact(r.curve.at_exact(1)) == Q({3, 1, 3}), "F(gamma(1)) differs");
  auto lim = r.image.limit_exact();
  o.require(r.image.max_exponent() <= 0 && lim && *lim == Q({0, 0, 2}), "limit differs from (0,0,2)");

  TubeSpec spec;
  spec.start = Q({3, 1, 3});
  spec.lower_template = tmpl;
  Facon plane_label({2}, {0});
  const WeightClass* w = partition.cells[plane->cell].facons.witness(plane_label);
  o.require(w != nullptr, "no witness on the plane");
  if (!o.pass) return o;
  spec.upper_template = infer_template(plane_label, w->weights);
  auto rep = verify_thom_mather(f, *axis, *plane, spec, &sf);
  o.require(rep.samples.size() >= 25, "only " + std::to_string(rep.samples.size()) + " samples");
  o.require(rep.max_pi_residual < 1e-9, "pi residual " + fmt(rep.max_pi_residual));
  o.require(rep.max_rho_residual < 1e-9, "rho residual " + fmt(rep.max_rho_residual));
  o.require(rep.ok(), rep.violations.empty() ? "" : rep.violations.front());
  double secs = seconds_since(t0);
  o.require(secs < 30.0, "runtime " + fmt(secs) + " s");
  if (o.pass)
    o.detail = "exact ray, " + std::to_string(rep.samples.size()) + " samples, residuals " +
               fmt(std::max(rep.max_pi_residual, rep.max_rho_residual)) + ", " + fmt(secs) + " s";
  return o;
}

// Coordinates are a signed monomial of degree 1..3, sometimes plus a
// second term; non-dominant draws are discarded.
std::vector<PolynomialMap> random_maps(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PolynomialMap> out;
  while (out.size() < count) {
    std::size_t n = 2 + rng() % 2;
    std::vector<std::string> xs, as;
    for (std::size_t v = 0; v < n; ++v) {
      xs.push_back("x" + std::to_string(v + 1));
      as.push_back("a" + std::to_string(v + 1));
    }
    auto src = make_arena(xs);
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Term> terms;
      int extra = rng() % 2;
      for (int t = 0; t <= extra; ++t) {
        Monomial m(n);
        unsigned deg = 1 + rng() % 3;
        for (unsigned d = 0; d < deg; ++d) ++m.exps[rng() % n];
        terms.push_back({m, Rational(rng() % 2 ? 1 : -1)});
      }
      comps.push_back(Polynomial::from_terms(src, terms));
    }
    PolynomialMap f(src, make_arena(as), comps);
    if (check_dominant(f)) out.push_back(f);
  }
  return out;
}

Outcome eliminant_identity() {
  Outcome o;
  auto maps = paper_maps();
  for (auto& f : random_maps(10, 314159)) maps.push_back(f);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
  std::size_t checked = 0;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    const auto& f = maps[m];
    for (std::size_t i = 0; i < f.dim(); ++i) {
      auto e = coordinate_eliminant(f, i);
      o.require(!e.is_zero(), "zero eliminant on map " + std::to_string(m));
      o.require(eliminant_residual(f, i, e).is_zero(), "nonzero E_i(F(x), x_i) on map " + std::to_string(m));
      // Independent check: exact evaluation at random rational points.
      for (int t = 0; t < 5; ++t) {
        std::vector<Rational> x;
        for (std::size_t v = 0; v < f.dim(); ++v) x.push_back(Rational(num(rng), den(rng)));
        auto pt = f.evaluate_exact(x);
        pt.push_back(x[i]);
        o.require(e.evaluate_exact(pt) == 0, "eliminant nonzero at a sample of map " + std::to_string(m));
      }
      ++checked;
    }
  }
  if (o.pass) o.detail = std::to_string(maps.size()) + " maps, " + std::to_string(checked) + " coordinates";
  return o;
}

Outcome frontier_equivalence() {
  Outcome o;
  std::size_t pairs = 0, precedes = 0;
  for (const auto& f : paper_maps()) {
    auto s = stratify(f, asymptotic_set(f));
    auto rep = check_frontier(s);
    std::size_t n = s.strata.size();
    o.require(rep.pairs.size() == n * (n - 1), "not every ordered pair was checked");
    o.require(rep.equivalence_violations == 0, rep.violations.empty() ? "" : rep.violations.front());
    o.require(rep.monotonicity_violations == 0, "order monotonicity fails");
    // Recount from the raw pairs rather than trusting the counters.
    for (const auto& p : rep.pairs) {
      o.require(p.precedes == p.contained, s.strata[p.lower].name + " vs " + s.strata[p.upper].name);
      if (p.precedes) {
        ++precedes;
        o.require(order_of(s.strata[p.lower]) >= order_of(s.strata[p.upper]), "order drops along a pair");
      }
    }
    pairs += rep.pairs.size();
  }
  if (o.pass) o.detail = std::to_string(pairs) + " ordered pairs, " + std::to_string(precedes) + " precedences";
  return o;
}

Outcome star_refine_properties() {
  Outcome o;
  std::size_t outputs = 0;
  for (const auto& f : paper_maps()) {
    FaconEngine engine(f, 3);
    auto partition = partition_by_facons(engine, asymptotic_set(f));
    for (const auto& c : partition.cells)
      for (const auto& label : c.facons.facons()) {
        auto groups = star_refine(c.facons, label);
        ++outputs;
        for (std::size_t a = 0; a < groups.size(); ++a)
          for (std::size_t b = a + 1; b < groups.size(); ++b) {
            o.require(groups[a].dimension > groups[b].dimension, "dimensions do not decrease");
            o.require(groups[a].set.intersect(groups[b].set).is_empty(), "groups overlap");
            o.require(variety_containment(groups[b].closure, groups[a].closure),
                      "later group outside the closure of an earlier one");
          }
        for (const auto& g : groups) o.require(dimension(g.closure) == g.dimension, "group dimension mismatch");
      }
  }
  if (o.pass) o.detail = std::to_string(outputs) + " refinements";
  return o;
}

Outcome coverage() {
  Outcome o;
  std::size_t total = 0, covered = 0;
  for (const auto& f : paper_maps()) {
    auto sf = asymptotic_set(f);
    auto rep = coverage_check(f, sf, 20, 2024);
    total += rep.trials;
    covered += rep.covered;
    // Membership in V(S_F) rechecked by direct evaluation.
    std::size_t on_set = 0;
    for (const auto& p : rep.points) {
      bool zero = std::any_of(sf.components.begin(), sf.components.end(),
                              [&](const AsymptoticComponent& c) { return c.equation.evaluate_exact(p) == 0; });
      on_set += zero;
    }
    o.require(on_set == rep.via_asymptotic_set, "asymptotic set membership disagrees");
  }
  o.require(total == 60 && covered == 60, std::to_string(covered) + "/" + std::to_string(total) + " covered");
  if (o.pass) o.detail = "60/60";
  return o;
}

Outcome groebner_properties() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  for (int k = 0; k < 50; ++k) {
    std::size_t n = 2 + rng() % 3;
    std::vector<std::string> names;
    for (std::size_t v = 0; v < n; ++v) names.push_back("y" + std::to_string(v));
    auto a = make_arena(names);
    std::vector<Polynomial> gens;
    int m = 1 + rng() % 3;
    for (int g = 0; g < m; ++g) gens.push_back(oracle::random_polynomial(a, rng, 3, 3));
    auto order = (k % 2) ? MonomialOrder::lex(n) : MonomialOrder::grevlex(n);
    auto gb = buchberger_uncached(Ideal(a, gens, order), ResourceBudget{});
    std::string tag = "ideal " + std::to_string(k);
    for (std::size_t i = 0; i < gb.size(); ++i)
      for (std::size_t j = i + 1; j < gb.size(); ++j)
        o.require(normal_form(s_polynomial(gb.basis()[i], gb.basis()[j], order), gb).is_zero(),
                  tag + ": S-polynomial does not reduce to zero");
    for (const auto& g : gens) o.require(normal_form(g, gb).is_zero(), tag + ": generator not in the ideal");
    std::vector<Polynomial> shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    o.require(buchberger_uncached(Ideal(a, shuffled, order), ResourceBudget{}).basis() == gb.basis(),
              tag + ": basis depends on generator order");
  }

  // Toy ideals whose elimination ideals are generated in low degree.
  auto t = make_arena({"t", "x", "y"});
  auto s = make_arena({"s", "t", "x", "y"});
  const std::vector<std::pair<ArenaPtr, std::vector<std::string>>> toys{
      {t, {"x - t^2", "y - t^3"}},
      {t, {"x - t", "y - t^2"}},
      {t, {"x - t^2", "y - t^2 - t"}},
      {t, {"x*t - 1", "y - t"}},
      {t, {"x - t^3", "y - t^2"}},
      {t, {"t^2 - x", "t*y - 1"}},
      {t, {"x - t - 1", "y - t^2 + 1"}},
      {s, {"x - s*t", "y - s", "t - s^2"}},
      {s, {"x - s - t", "y - s*t", "s - 1"}},
      {s, {"x - s^2", "y - t^2", "s - t"}},
  };
  for (std::size_t k = 0; k < toys.size(); ++k) {
    const auto& [arena, strs] = toys[k];
    std::vector<Polynomial> gens;
    for (const auto& g : strs) gens.push_back(P(g, arena));
    std::size_t drop = arena->size() - 2;
    std::vector<std::size_t> dropped;
    std::vector<bool> mask(arena->size(), false);
    for (std::size_t v = 0; v < drop; ++v) {
      dropped.push_back(v);
      mask[v] = true;
    }
    auto elim = buchberger(eliminate(Ideal(arena, gens), dropped));
    auto oracle_polys = oracle::truncated_elimination(gens, mask, 6);
    std::string tag = "toy " + std::to_string(k);
    o.require(!oracle_polys.empty(), tag + ": oracle found nothing");
    for (const auto& p : oracle_polys) o.require(elim.contains(p), tag + ": oracle member missing");
    // Conversely the oracle members generate the whole elimination ideal.
    if (!oracle_polys.empty())
      o.require(ideal_equal(Ideal(arena, oracle_polys), Ideal(arena, elim.basis())),
                tag + ": oracle and elimination ideals differ");
  }
  if (o.pass) o.detail = "50 ideals, 10 elimination oracles";
  return o;
}

std::string run_cli(const std::string& args) {
  std::string cmd = std::string(FACONS_CLI) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  return out;
}

Outcome determinism() {
  Outcome o;
  for (const char* name : {"three_coordinate.map", "cusp.map", "two_planes.map"}) {
    std::string args = "analyze " + std::string(FACONS_TEST_DATA) + "/" + name + " --seed 11";
    std::string a = run_cli(args), b = run_cli(args);
    o.require(!a.empty() && a.find("\"schema\"") != std::string::npos, std::string("no JSON for ") + name);
    o.require(a == b, std::string("outputs differ for ") + name);
  }
  if (o.pass) o.detail = "3 maps byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"three-coordinate pipeline", three_coordinate_pipeline},
      {"cusp pipeline", cusp_pipeline},
      {"axis ray and commutation", axis_plane_ray},
      {"eliminant identity", eliminant_identity},
      {"frontier equivalence", frontier_equivalence},
      {"star refinement properties", star_refine_properties},
      {"coverage", coverage},
      {"groebner properties", groebner_properties},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << "criterion " << k + 1 << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (failed ? "acceptance: FAIL" : "acceptance: PASS") << std::endl;
  return failed ? 1 : 0;
}
