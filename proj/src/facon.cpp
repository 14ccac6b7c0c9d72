#include "facons/facon.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace facons {

namespace {

std::string index_list(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(v[k] + 1);
  }
  return s;
}

// A fixed value for shift symbols in the (ii)/(iii) test; any rational
// outside the finitely many special values would do.
const Rational kGenericShift(17, 11);

}  // namespace

Facon::Facon(std::vector<std::size_t> i, std::vector<std::size_t> j, int star)
    : diverging(std::move(i)), fixed_limit(std::move(j)), star_level(star) {
  std::sort(diverging.begin(), diverging.end());
  std::sort(fixed_limit.begin(), fixed_limit.end());
  for (auto a : diverging)
    if (std::binary_search(fixed_limit.begin(), fixed_limit.end(), a))
      throw std::invalid_argument("facon index sets must be disjoint");
}

std::string Facon::to_string() const {
  std::string s = "(" + index_list(diverging) + ")[" + index_list(fixed_limit) + "]";
  if (star_level > 0) s += "^{" + std::to_string(star_level) + "*}";
  return s;
}

PQUple::PQUple(std::map<std::size_t, unsigned> degrees) : degrees_(std::move(degrees)) {
  for (const auto& [k, d] : degrees_)
    if (d == 0) throw std::invalid_argument("uple degrees must be positive");
}

PQUple PQUple::from_weights(const Facon& facon, const std::vector<int>& weights) {
  std::map<std::size_t, unsigned> d;
  for (auto i : facon.diverging) d[i] = static_cast<unsigned>(std::abs(weights.at(i)));
  for (auto j : facon.fixed_limit) d[j] = static_cast<unsigned>(std::abs(weights.at(j)));
  return PQUple(d).primitive();
}

PQUple PQUple::primitive() const {
  unsigned g = 0;
  for (const auto& [k, d] : degrees_) g = std::gcd(g, d);
  if (g <= 1) return *this;
  std::map<std::size_t, unsigned> d;
  for (const auto& [k, v] : degrees_) d[k] = v / g;
  return PQUple(d);
}

std::string PQUple::to_string() const {
  std::string s = "(";
  bool first = true;
  for (const auto& [k, d] : degrees_) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(d);
  }
  return s + ")";
}

bool uple_equivalent(const PQUple& a, const PQUple& b) {
  if (a.degrees().size() != b.degrees().size()) throw std::invalid_argument("uples over different index sets");
  for (auto ia = a.degrees().begin(), ib = b.degrees().begin(); ia != a.degrees().end(); ++ia, ++ib)
    if (ia->first != ib->first) throw std::invalid_argument("uples over different index sets");
  return a.primitive() == b.primitive();
}

CurveAnsatz weight_ansatz(const std::vector<int>& weights) {
  std::size_t n = weights.size();
  std::vector<std::string> names;
  std::vector<int> bidx(n, -1), cidx(n, -1);
  for (std::size_t j = 0; j < n; ++j)
    if (weights[j] <= 0) {
      bidx[j] = static_cast<int>(names.size());
      names.push_back("b" + std::to_string(j + 1));
    }
  for (std::size_t j = 0; j < n; ++j)
    if (weights[j] != 0) {
      cidx[j] = static_cast<int>(names.size());
      names.push_back("c" + std::to_string(j + 1));
    }
  bool any_c = std::any_of(weights.begin(), weights.end(), [](int w) { return w != 0; });
  if (any_c) names.push_back("z");
  auto sym = make_arena(names);

  CurveAnsatz a;
  a.symbols = sym;
  a.weights = weights;
  Polynomial prod(sym, 1);
  for (std::size_t j = 0; j < n; ++j) {
    LaurentExpansion e(sym);
    if (bidx[j] >= 0) e.add_term(0, Polynomial::variable(sym, bidx[j]));
    if (cidx[j] >= 0) {
      Polynomial c = Polynomial::variable(sym, cidx[j]);
      e.add_term(weights[j], c);
      prod *= c;
    }
    a.coords.push_back(e);
  }
  if (any_c) a.side_equations.push_back(Polynomial::variable(sym, names.size() - 1) * prod - Polynomial(sym, 1));
  return a;
}

LimitAnalysis limit_constraints(const PolynomialMap& f, const CurveAnsatz& ansatz) {
  if (ansatz.coords.size() != f.dim()) throw ArenaMismatch("ansatz size differs from map dimension");
  const ArenaPtr& sym = ansatz.symbols;
  std::vector<Polynomial> gens = ansatz.side_equations;
  std::vector<Polynomial> constant;
  for (const auto& comp : f.components()) {
    LaurentExpansion e = substitute_curve(comp, ansatz);
    for (const auto& [k, c] : e.coefficients())
      if (k > 0) gens.push_back(c);
    constant.push_back(e.coefficient(0));
  }
  Ideal ideal(sym, gens);
  auto gb = buchberger(ideal);
  if (gb.is_unit()) throw NoFiniteLimit("no curve with this weight vector reaches a finite limit");
  // Symbols vanishing on the constraint variety are added outright, so the
  // limit map is not left with nilpotent residue.
  bool grew = false;
  for (std::size_t v = 0; v < sym->size(); ++v) {
    Polynomial s = Polynomial::variable(sym, v);
    if (!gb.contains(s) && radical_member(s, ideal)) {
      gens.push_back(s);
      grew = true;
    }
  }
  if (grew) gb = buchberger(Ideal(sym, gens));
  LimitAnalysis out{ansatz, Ideal(sym, gb.basis()), {}, {}};
  for (const auto& c : constant) out.limit_map.push_back(normal_form(c, gb));
  return out;
}

Ideal limit_image(const LimitAnalysis& analysis, const PolynomialMap& f, const std::vector<Polynomial>& extra) {
  const ArenaPtr& sym = analysis.ansatz.symbols;
  std::size_t ns = sym->size();
  ArenaPtr joint = extend_arena(sym, f.target()->names());
  std::vector<Polynomial> gens;
  for (const auto& g : analysis.constraint_ideal.generators()) gens.push_back(embed(g, joint));
  for (const auto& g : extra) gens.push_back(embed(g, joint));
  for (std::size_t k = 0; k < f.dim(); ++k)
    gens.push_back(Polynomial::variable(joint, ns + k) - embed(analysis.limit_map[k], joint));
  std::vector<std::size_t> drop(ns);
  std::iota(drop.begin(), drop.end(), 0);
  Ideal elim = eliminate(Ideal(joint, gens), drop);
  std::vector<Polynomial> images;
  for (std::size_t v = 0; v < ns; ++v) images.emplace_back(f.target());
  for (std::size_t k = 0; k < f.dim(); ++k) images.push_back(Polynomial::variable(f.target(), k));
  std::vector<Polynomial> out;
  for (const auto& g : elim.generators()) out.push_back(g.substitute(images));
  return Ideal(f.target(), out);
}

namespace {

std::vector<Polynomial> pull_back(const Ideal& equations, const std::vector<Polynomial>& limit_map) {
  std::vector<Polynomial> out;
  for (const auto& g : equations.generators()) out.push_back(g.substitute(limit_map));
  return out;
}

Facon classify_with(LimitAnalysis& analysis, const PolynomialMap& f, const std::vector<Polynomial>& cell_pullback,
                    int image_dim) {
  const auto& sym = analysis.ansatz.symbols;
  const auto& w = analysis.ansatz.weights;
  std::vector<Polynomial> jcell = analysis.constraint_ideal.generators();
  jcell.insert(jcell.end(), cell_pullback.begin(), cell_pullback.end());
  Ideal jideal(sym, jcell);
  if (is_unit_ideal(jideal)) throw NoFiniteLimit("no curve with this weight vector reaches the cell");

  std::vector<std::size_t> diverging, fixed;
  analysis.categories.assign(f.dim(), Category::PointDependent);
  for (std::size_t j = 0; j < f.dim(); ++j) {
    if (w.at(j) > 0) {
      diverging.push_back(j);
      analysis.categories[j] = Category::Diverging;
      continue;
    }
    int b = sym->index_of("b" + std::to_string(j + 1));
    std::vector<std::size_t> others;
    for (std::size_t v = 0; v < sym->size(); ++v)
      if (static_cast<int>(v) != b) others.push_back(v);
    bool finite = !eliminate(jideal, others).is_zero_ideal();
    if (!finite) {
      std::vector<Polynomial> extra = cell_pullback;
      extra.push_back(Polynomial::variable(sym, b) - Polynomial(sym, kGenericShift));
      finite = dimension(limit_image(analysis, f, extra)) == image_dim;
    }
    if (finite) {
      fixed.push_back(j);
      analysis.categories[j] = Category::FixedLimit;
    }
  }
  return Facon(diverging, fixed);
}

}  // namespace

Facon classify_coordinates(LimitAnalysis& analysis, const PolynomialMap& f) {
  return classify_with(analysis, f, {}, dimension(limit_image(analysis, f)));
}

Facon classify_coordinates(LimitAnalysis& analysis, const PolynomialMap& f, const LocallyClosed& cell) {
  auto pb = pull_back(cell.equations, analysis.limit_map);
  return classify_with(analysis, f, pb, dimension(limit_image(analysis, f, pb)));
}

std::vector<std::vector<int>> enumerate_weights(std::size_t n, int box) {
  std::vector<std::vector<int>> out;
  std::vector<int> w(n, -box);
  while (true) {
    bool positive = std::any_of(w.begin(), w.end(), [](int x) { return x > 0; });
    bool nonzero = std::none_of(w.begin(), w.end(), [](int x) { return x == 0; });
    int g = 0;
    for (int x : w) g = std::gcd(g, std::abs(x));
    if (positive && nonzero && g == 1) out.push_back(w);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (w[k] < box) {
        ++w[k];
        break;
      }
      w[k] = -box;
      if (k == 0) return out;
    }
    if (n == 0) return out;
  }
}

FaconEngine::FaconEngine(PolynomialMap f, int weight_box) : f_(std::move(f)), box_(weight_box) {
  if (box_ < 1) throw std::invalid_argument("weight box must be at least 1");
  weights_ = enumerate_weights(f_.dim(), box_);
  cache_.resize(weights_.size());
}

const FaconEngine::WeightData& FaconEngine::data(std::size_t k) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!cache_[k]) {
    auto d = std::make_unique<WeightData>();
    try {
      d->analysis = limit_constraints(f_, weight_ansatz(weights_[k]));
      d->image = limit_image(*d->analysis, f_);
    } catch (const NoFiniteLimit&) {
      d->analysis.reset();
    }
    cache_[k] = std::move(d);
  }
  return *cache_[k];
}

CellFacons FaconEngine::analyze(const LocallyClosed& cell) {
  CellFacons out{cell, cell.dimension(), {}, box_};
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const auto& d = data(k);
    if (!d.analysis) continue;
    if (!cell.meets(*d.image)) continue;
    LimitAnalysis analysis = *d.analysis;
    auto pb = pull_back(cell.equations, analysis.limit_map);
    Ideal image = limit_image(analysis, f_, pb);
    if (is_unit_ideal(image) || !cell.meets(image)) continue;
    int dim = dimension(image);
    Facon label = classify_with(analysis, f_, pb, dim);
    bool generic = variety_containment(cell.equations, image);
    out.classes.push_back(WeightClass{weights_[k], label, PQUple::from_weights(label, weights_[k]),
                                      std::move(image), dim, generic});
  }
  return out;
}

std::vector<Facon> CellFacons::facons() const {
  std::vector<Facon> out;
  for (const auto& c : classes)
    if (c.generic && std::find(out.begin(), out.end(), c.facon) == out.end()) out.push_back(c.facon);
  std::sort(out.begin(), out.end());
  return out;
}

const WeightClass* CellFacons::witness(const Facon& label) const {
  const WeightClass* best = nullptr;
  auto norm = [](const std::vector<int>& w) {
    int s = 0;
    for (int x : w) s += std::abs(x);
    return s;
  };
  for (const auto& c : classes) {
    if (!c.generic || !c.facon.same_label(label)) continue;
    if (!best || norm(c.weights) < norm(best->weights) ||
        (norm(c.weights) == norm(best->weights) && c.weights < best->weights))
      best = &c;
  }
  return best;
}

CellFacons facons_of_component(const PolynomialMap& f, const LocallyClosed& cell, int weight_box) {
  FaconEngine engine(f, weight_box);
  return engine.analyze(cell);
}

std::vector<StarGroup> star_refine(const CellFacons& cell, const Facon& label) {
  std::vector<StarGroup> groups;
  for (const auto& c : cell.classes) {
    if (!c.facon.same_label(label)) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const StarGroup& g) { return ideal_equal(g.closure, c.image); });
    if (it == groups.end()) {
      groups.push_back(StarGroup{c.image, c.image_dim, {}, {}, LocallyClosed(c.image)});
      it = groups.end() - 1;
    }
    if (std::find(it->classes.begin(), it->classes.end(), c.uple) == it->classes.end()) it->classes.push_back(c.uple);
    it->weights.push_back(c.weights);
  }
  std::stable_sort(groups.begin(), groups.end(), [](const StarGroup& a, const StarGroup& b) { return a.dimension > b.dimension; });
  // Equal dimensions merge into one group (union of the closures).
  std::vector<StarGroup> merged;
  for (auto& g : groups) {
    if (!merged.empty() && merged.back().dimension == g.dimension) {
      auto& m = merged.back();
      m.closure = intersect(m.closure, g.closure);
      m.classes.insert(m.classes.end(), g.classes.begin(), g.classes.end());
      m.weights.insert(m.weights.end(), g.weights.begin(), g.weights.end());
    } else {
      merged.push_back(std::move(g));
    }
  }
  for (std::size_t i = 0; i < merged.size(); ++i) {
    LocallyClosed s(cell.cell.equations.plus(merged[i].closure.generators()), cell.cell.exclusions);
    for (std::size_t j = i + 1; j < merged.size(); ++j) s.exclusions.push_back(merged[j].closure);
    merged[i].set = std::move(s);
  }
  return merged;
}

}  // namespace facons
