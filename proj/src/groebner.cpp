#include "facons/groebner.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <span>
#include <sstream>
#include <unordered_map>

namespace facons {

ResourceBudget ResourceBudget::from_env() {
  ResourceBudget b;
  const char* env = std::getenv("FACONS_RESOURCE_BUDGET");
  if (!env || !*env) return b;
  std::string s(env);
  if (s.find('=') == std::string::npos) {
    b.max_pairs = std::stoull(s);
    return b;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    std::string key = item.substr(0, eq);
    std::size_t val = std::stoull(item.substr(eq + 1));
    if (key == "pairs") b.max_pairs = val;
    else if (key == "basis") b.max_basis = val;
  }
  return b;
}

ResourceBudget& default_budget() {
  static ResourceBudget b = ResourceBudget::from_env();
  return b;
}

// ---------------------------------------------------------------- orders

MonomialOrder MonomialOrder::lex(std::size_t nvars) {
  std::vector<std::size_t> all(nvars);
  std::iota(all.begin(), all.end(), 0);
  return blocks(nvars, {Block{all, Kind::Lex}});
}

MonomialOrder MonomialOrder::grevlex(std::size_t nvars) {
  std::vector<std::size_t> all(nvars);
  std::iota(all.begin(), all.end(), 0);
  return blocks(nvars, {Block{all, Kind::Grevlex}});
}

MonomialOrder MonomialOrder::elimination(std::size_t nvars, const std::vector<std::size_t>& first) {
  std::vector<bool> in_first(nvars, false);
  for (auto v : first) in_first.at(v) = true;
  Block a{{}, Kind::Grevlex};
  Block b{{}, Kind::Grevlex};
  for (std::size_t v = 0; v < nvars; ++v) (in_first[v] ? a : b).vars.push_back(v);
  std::vector<Block> bl;
  if (!a.vars.empty()) bl.push_back(a);
  if (!b.vars.empty()) bl.push_back(b);
  return blocks(nvars, bl);
}

MonomialOrder MonomialOrder::blocks(std::size_t nvars, std::vector<Block> bl) {
  std::vector<int> seen(nvars, 0);
  for (const auto& b : bl)
    for (auto v : b.vars) {
      if (v >= nvars) throw std::invalid_argument("block order variable out of range");
      ++seen[v];
    }
  for (int s : seen)
    if (s != 1) throw std::invalid_argument("block order groups must partition the variables");
  MonomialOrder o;
  o.nvars_ = nvars;
  o.blocks_ = std::move(bl);
  return o;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  for (const auto& blk : blocks_) {
    if (blk.inner == Kind::Lex) {
      for (auto v : blk.vars)
        if (a.exps[v] != b.exps[v]) return a.exps[v] > b.exps[v] ? 1 : -1;
    } else {
      std::uint64_t da = 0, db = 0;
      for (auto v : blk.vars) {
        da += a.exps[v];
        db += b.exps[v];
      }
      if (da != db) return da > db ? 1 : -1;
      for (auto it = blk.vars.rbegin(); it != blk.vars.rend(); ++it)
        if (a.exps[*it] != b.exps[*it]) return a.exps[*it] < b.exps[*it] ? 1 : -1;
    }
  }
  return 0;
}

std::string MonomialOrder::describe() const {
  std::ostringstream os;
  os << nvars_;
  for (const auto& b : blocks_) {
    os << (b.inner == Kind::Lex ? "|L" : "|G");
    for (auto v : b.vars) os << ',' << v;
  }
  return os.str();
}

// ---------------------------------------------------------------- ideals

Ideal::Ideal(ArenaPtr arena, std::vector<Polynomial> generators)
    : Ideal(arena, std::move(generators), MonomialOrder::grevlex(arena->size())) {}

Ideal::Ideal(ArenaPtr arena, std::vector<Polynomial> generators, MonomialOrder order)
    : arena_(std::move(arena)), order_(std::move(order)) {
  if (order_.nvars() != arena_->size()) throw std::invalid_argument("order size differs from arena");
  for (auto& g : generators) {
    if (g.is_zero()) continue;
    if (!same_arena(g.arena(), arena_)) throw ArenaMismatch("ideal generator outside arena");
    gens_.push_back(std::move(g));
  }
}

Ideal Ideal::with_order(MonomialOrder order) const { return Ideal(arena_, gens_, std::move(order)); }

Ideal Ideal::plus(const std::vector<Polynomial>& more) const {
  auto g = gens_;
  g.insert(g.end(), more.begin(), more.end());
  return Ideal(arena_, std::move(g), order_);
}

GroebnerBasis::GroebnerBasis(ArenaPtr arena, MonomialOrder order, std::vector<Polynomial> basis)
    : arena_(std::move(arena)), order_(std::move(order)), basis_(std::move(basis)) {}

bool GroebnerBasis::is_unit() const { return basis_.size() == 1 && basis_[0].is_constant(); }

bool GroebnerBasis::contains(const Polynomial& p) const { return normal_form(p, *this).is_zero(); }

std::vector<Monomial> GroebnerBasis::leading_monomials() const {
  std::vector<Monomial> out;
  for (const auto& g : basis_) out.push_back(leading_monomial(g, order_));
  return out;
}

// ---------------------------------------------------------------- sorted polys

namespace {

using Terms = std::vector<Term>;

Terms sorted_terms(const Polynomial& p, const MonomialOrder& order) {
  Terms t = p.terms();
  if (!order.is_plain_lex())
    std::sort(t.begin(), t.end(), [&](const Term& a, const Term& b) { return order.greater(a.mono, b.mono); });
  return t;
}

// a - c * m * b, both sorted descending.
Terms sub_mul(std::span<const Term> a, const Rational& c, const Monomial& m, const Terms& b, const MonomialOrder& order) {
  Terms out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  Monomial mb;
  bool have_mb = false;
  while (i < a.size() || j < b.size()) {
    if (j < b.size() && !have_mb) {
      mb = m * b[j].mono;
      have_mb = true;
    }
    int cmp;
    if (i >= a.size()) cmp = -1;
    else if (j >= b.size()) cmp = 1;
    else cmp = order.compare(a[i].mono, mb);
    if (cmp > 0) {
      out.push_back(a[i++]);
    } else if (cmp < 0) {
      out.push_back({mb, -c * b[j].coeff});
      ++j;
      have_mb = false;
    } else {
      Rational v = a[i].coeff - c * b[j].coeff;
      if (sgn(v) != 0) out.push_back({mb, v});
      ++i;
      ++j;
      have_mb = false;
    }
  }
  return out;
}

void make_monic(Terms& t) {
  if (t.empty()) return;
  Rational lc = t.front().coeff;
  if (lc == 1) return;
  for (auto& x : t) x.coeff /= lc;
}

struct Reducer {
  const Terms* terms;
  const Monomial* lead;
};

// Full reduction of p by the reducers; returns the remainder, sorted.
Terms reduce(Terms p, const std::vector<Reducer>& reducers, const MonomialOrder& order) {
  Terms rem;
  std::size_t pos = 0;
  while (pos < p.size()) {
    const Term& lt = p[pos];
    const Reducer* hit = nullptr;
    for (const auto& r : reducers)
      if (r.lead->divides(lt.mono)) {
        hit = &r;
        break;
      }
    if (!hit) {
      rem.push_back(lt);
      ++pos;
      continue;
    }
    Rational c = lt.coeff / hit->terms->front().coeff;
    Monomial q = lt.mono / *hit->lead;
    p = sub_mul(std::span<const Term>(p).subspan(pos), c, q, *hit->terms, order);
    pos = 0;
  }
  return rem;
}

Polynomial to_poly(const ArenaPtr& arena, Terms t) { return Polynomial::from_terms(arena, std::move(t)); }

struct Pair {
  std::size_t i, j;
  Monomial lcm;
};

std::string cache_key(const Ideal& ideal) {
  std::ostringstream os;
  for (const auto& n : ideal.arena()->names()) os << n << ' ';
  os << '#' << ideal.order().describe() << '#';
  std::vector<std::string> gs;
  for (const auto& g : ideal.generators()) gs.push_back(g.to_string());
  std::sort(gs.begin(), gs.end());
  for (const auto& g : gs) os << g << ';';
  return os.str();
}

class BasisCache {
public:
  std::optional<std::vector<Polynomial>> find(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void store(const std::string& key, const std::vector<Polynomial>& basis) {
    std::lock_guard<std::mutex> lock(mu_);
    if (map_.size() > 20000) map_.clear();
    map_.emplace(key, basis);
  }

private:
  std::mutex mu_;
  std::unordered_map<std::string, std::vector<Polynomial>> map_;
};

BasisCache& cache() {
  static BasisCache c;
  return c;
}

std::vector<Polynomial> compute_basis(const Ideal& ideal, const ResourceBudget& budget) {
  const auto& order = ideal.order();
  const auto& arena = ideal.arena();

  std::vector<Terms> polys;
  std::vector<Monomial> leads;
  std::vector<bool> alive;
  std::vector<Pair> pairs;

  auto reducers = [&]() {
    std::vector<Reducer> r;
    for (std::size_t k = 0; k < polys.size(); ++k)
      if (alive[k]) r.push_back({&polys[k], &leads[k]});
    return r;
  };

  // Gebauer-Moeller update with the new element h.
  auto update = [&](Terms h) {
    make_monic(h);
    if (h.front().mono.is_one()) {
      polys.assign(1, h);
      leads.assign(1, h.front().mono);
      alive.assign(1, true);
      pairs.clear();
      return;
    }
    std::size_t hi = polys.size();
    Monomial lh = h.front().mono;
    polys.push_back(std::move(h));
    leads.push_back(lh);
    alive.push_back(true);
    if (polys.size() > budget.max_basis)
      throw ResourceLimitExceeded("Groebner basis size exceeds budget of " + std::to_string(budget.max_basis));

    std::vector<Pair> c;
    for (std::size_t g = 0; g < hi; ++g)
      if (alive[g]) c.push_back({g, hi, lcm(leads[g], lh)});
    std::vector<Pair> d;
    for (std::size_t k = 0; k < c.size(); ++k) {
      bool keep = leads[c[k].i].coprime(lh);
      if (!keep) {
        keep = true;
        for (std::size_t m = k + 1; m < c.size() && keep; ++m)
          if (c[m].lcm.divides(c[k].lcm)) keep = false;
        for (const auto& p : d)
          if (keep && p.lcm.divides(c[k].lcm)) keep = false;
      }
      if (keep) d.push_back(c[k]);
    }
    std::vector<Pair> e;
    for (auto& p : d)
      if (!leads[p.i].coprime(lh)) e.push_back(p);
    std::vector<Pair> bnew;
    for (auto& p : pairs) {
      bool drop = lh.divides(p.lcm) && lcm(leads[p.i], lh) != p.lcm && lcm(leads[p.j], lh) != p.lcm;
      if (!drop) bnew.push_back(p);
    }
    bnew.insert(bnew.end(), e.begin(), e.end());
    pairs = std::move(bnew);
    for (std::size_t g = 0; g < hi; ++g)
      if (alive[g] && lh.divides(leads[g])) alive[g] = false;
  };

  // Seed with interreduced-as-we-go generators.
  for (const auto& g : ideal.generators()) {
    Terms t = reduce(sorted_terms(g, order), reducers(), order);
    if (t.empty()) continue;
    update(std::move(t));
    if (polys.size() == 1 && leads[0].is_one()) break;
  }

  std::size_t processed = 0;
  while (!pairs.empty()) {
    if (++processed > budget.max_pairs)
      throw ResourceLimitExceeded("Groebner pair budget of " + std::to_string(budget.max_pairs) + " exceeded");
    // Normal selection: smallest lcm, ties by indices.
    auto best = pairs.begin();
    for (auto it = pairs.begin() + 1; it != pairs.end(); ++it) {
      int cmp = order.compare(it->lcm, best->lcm);
      if (cmp < 0 || (cmp == 0 && std::tie(it->j, it->i) < std::tie(best->j, best->i))) best = it;
    }
    Pair p = *best;
    pairs.erase(best);
    const Terms& f = polys[p.i];
    const Terms& g = polys[p.j];
    Terms s = sub_mul({}, Rational(-1), p.lcm / leads[p.i], f, order);
    s = sub_mul(s, Rational(1), p.lcm / leads[p.j], g, order);
    Terms h = reduce(std::move(s), reducers(), order);
    if (h.empty()) continue;
    update(std::move(h));
  }

  // Minimal, then reduced.
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < polys.size(); ++k)
    if (alive[k]) keep.push_back(k);
  std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return order.compare(leads[a], leads[b]) < 0; });
  std::vector<std::size_t> minimal;
  for (auto k : keep) {
    bool redundant = false;
    for (auto m : minimal)
      if (leads[m].divides(leads[k])) redundant = true;
    if (!redundant) minimal.push_back(k);
  }
  std::vector<Polynomial> out;
  for (std::size_t a = 0; a < minimal.size(); ++a) {
    std::vector<Reducer> others;
    for (std::size_t b = 0; b < minimal.size(); ++b)
      if (b != a) others.push_back({&polys[minimal[b]], &leads[minimal[b]]});
    Terms lead{polys[minimal[a]].front()};
    Terms tail(polys[minimal[a]].begin() + 1, polys[minimal[a]].end());
    Terms r = reduce(std::move(tail), others, order);
    lead.insert(lead.end(), r.begin(), r.end());
    make_monic(lead);
    out.push_back(to_poly(arena, std::move(lead)));
  }
  return out;
}

}  // namespace

Monomial leading_monomial(const Polynomial& p, const MonomialOrder& order) {
  if (p.is_zero()) throw std::domain_error("leading monomial of zero polynomial");
  const Term* best = &p.terms().front();
  if (order.is_plain_lex()) return best->mono;
  for (const auto& t : p.terms())
    if (order.greater(t.mono, best->mono)) best = &t;
  return best->mono;
}

Rational leading_coefficient(const Polynomial& p, const MonomialOrder& order) {
  Monomial m = leading_monomial(p, order);
  for (const auto& t : p.terms())
    if (t.mono == m) return t.coeff;
  return Rational(0);
}

Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& divisors, const MonomialOrder& order) {
  if (p.is_zero()) return p;
  std::vector<Terms> ts;
  std::vector<Monomial> leads;
  for (const auto& d : divisors) {
    if (d.is_zero()) continue;
    if (!same_arena(d.arena(), p.arena())) throw ArenaMismatch("normal form over different arenas");
    ts.push_back(sorted_terms(d, order));
  }
  for (const auto& t : ts) leads.push_back(t.front().mono);
  std::vector<Reducer> r;
  for (std::size_t k = 0; k < ts.size(); ++k) r.push_back({&ts[k], &leads[k]});
  return to_poly(p.arena(), reduce(sorted_terms(p, order), r, order));
}

Polynomial normal_form(const Polynomial& p, const GroebnerBasis& g) { return normal_form(p, g.basis(), g.order()); }

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order) {
  Monomial lf = leading_monomial(f, order), lg = leading_monomial(g, order);
  Monomial l = lcm(lf, lg);
  Rational cf = leading_coefficient(f, order), cg = leading_coefficient(g, order);
  ArenaPtr a = f.arena();
  return Polynomial::monomial(a, l / lf, 1 / cf) * f - Polynomial::monomial(a, l / lg, 1 / cg) * g;
}

GroebnerBasis buchberger(const Ideal& ideal, const ResourceBudget& budget) {
  if (ideal.is_zero_ideal()) return GroebnerBasis(ideal.arena(), ideal.order(), {});
  std::string key = cache_key(ideal);
  if (auto hit = cache().find(key)) return GroebnerBasis(ideal.arena(), ideal.order(), *hit);
  auto basis = compute_basis(ideal, budget);
  cache().store(key, basis);
  return GroebnerBasis(ideal.arena(), ideal.order(), std::move(basis));
}

GroebnerBasis buchberger(const Ideal& ideal) { return buchberger(ideal, default_budget()); }

GroebnerBasis buchberger_uncached(const Ideal& ideal, const ResourceBudget& budget) {
  if (ideal.is_zero_ideal()) return GroebnerBasis(ideal.arena(), ideal.order(), {});
  return GroebnerBasis(ideal.arena(), ideal.order(), compute_basis(ideal, budget));
}

Ideal eliminate(const Ideal& ideal, const std::vector<std::size_t>& drop) {
  std::size_t n = ideal.arena()->size();
  if (drop.empty()) return ideal;
  for (auto v : drop)
    if (v >= n) throw std::invalid_argument("eliminated variable outside arena");
  auto gb = buchberger(ideal.with_order(MonomialOrder::elimination(n, drop)));
  std::vector<bool> dropped(n, false);
  for (auto v : drop) dropped[v] = true;
  std::vector<Polynomial> kept;
  for (const auto& g : gb.basis()) {
    bool ok = true;
    for (auto v : g.support_vars())
      if (dropped[v]) ok = false;
    if (ok) kept.push_back(g);
  }
  return Ideal(ideal.arena(), std::move(kept), ideal.order());
}

Ideal eliminate_into(const Ideal& ideal, const std::vector<std::size_t>& drop, const ArenaPtr& target) {
  Ideal e = eliminate(ideal, drop);
  std::vector<Polynomial> g;
  for (const auto& p : e.generators()) g.push_back(embed(p, target));
  return Ideal(target, std::move(g));
}

ArenaPtr extend_arena(const ArenaPtr& arena, const std::vector<std::string>& extra) {
  auto names = arena->names();
  for (auto name : extra) {
    while (std::find(names.begin(), names.end(), name) != names.end()) name += "_";
    names.push_back(name);
  }
  return make_arena(names);
}

bool is_unit_ideal(const Ideal& ideal) {
  if (ideal.is_zero_ideal()) return false;
  return buchberger(ideal.with_order(MonomialOrder::grevlex(ideal.arena()->size()))).is_unit();
}

bool radical_member(const Polynomial& p, const Ideal& ideal) {
  if (!same_arena(p.arena(), ideal.arena())) throw ArenaMismatch("radical membership over different arenas");
  if (p.is_zero()) return true;
  auto ext = extend_arena(ideal.arena(), {"_t"});
  std::vector<Polynomial> gens;
  for (const auto& g : ideal.generators()) gens.push_back(embed(g, ext));
  Polynomial t = Polynomial::variable(ext, ext->size() - 1);
  gens.push_back(Polynomial(ext, 1) - t * embed(p, ext));
  return is_unit_ideal(Ideal(ext, std::move(gens)));
}

bool variety_containment(const Ideal& i, const Ideal& j) {
  if (!same_arena(i.arena(), j.arena())) throw ArenaMismatch("containment over different arenas");
  for (const auto& g : j.generators())
    if (!radical_member(g, i)) return false;
  return true;
}

std::optional<std::vector<std::size_t>> independent_set(const Ideal& ideal) {
  std::size_t n = ideal.arena()->size();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (ideal.is_zero_ideal()) return all;
  auto gb = buchberger(ideal.with_order(MonomialOrder::grevlex(n)));
  if (gb.is_unit()) return std::nullopt;
  auto leads = gb.leading_monomials();
  if (n > 24) throw ResourceLimitExceeded("too many variables for independent-set search");
  std::vector<std::uint32_t> supports;
  for (const auto& m : leads) {
    std::uint32_t s = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (m.exps[v]) s |= 1u << v;
    supports.push_back(s);
  }
  // Largest subset S with no leading monomial supported inside S; among
  // equal sizes prefer the lexicographically smallest index list.
  std::optional<std::vector<std::size_t>> best;
  int best_size = -1;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int size = __builtin_popcount(mask);
    if (size < best_size) continue;
    bool ok = true;
    for (auto s : supports)
      if ((s & ~mask) == 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    auto lexkey = [&](std::uint32_t m) {
      std::vector<std::size_t> v;
      for (std::size_t k = 0; k < n; ++k)
        if (m & (1u << k)) v.push_back(k);
      return v;
    };
    if (size > best_size || lexkey(mask) < lexkey(best_mask)) {
      best_size = size;
      best_mask = mask;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k)
    if (best_mask & (1u << k)) out.push_back(k);
  best = out;
  return best;
}

int dimension(const Ideal& ideal) {
  auto s = independent_set(ideal);
  return s ? static_cast<int>(s->size()) : -1;
}

bool ideal_equal(const Ideal& i, const Ideal& j) {
  std::size_t n = i.arena()->size();
  auto gi = buchberger(i.with_order(MonomialOrder::grevlex(n)));
  auto gj = buchberger(j.with_order(MonomialOrder::grevlex(n)));
  return gi.basis() == gj.basis();
}

Ideal intersect(const Ideal& i, const Ideal& j) {
  if (i.is_zero_ideal() || j.is_zero_ideal()) return Ideal(i.arena(), {}, i.order());
  auto ext = extend_arena(i.arena(), {"_s"});
  Polynomial t = Polynomial::variable(ext, ext->size() - 1);
  Polynomial one(ext, 1);
  std::vector<Polynomial> gens;
  for (const auto& g : i.generators()) gens.push_back(t * embed(g, ext));
  for (const auto& g : j.generators()) gens.push_back((one - t) * embed(g, ext));
  Ideal e = eliminate(Ideal(ext, std::move(gens)), {ext->size() - 1});
  std::vector<Polynomial> back;
  for (const auto& g : e.generators()) back.push_back(embed(g, i.arena()));
  return Ideal(i.arena(), std::move(back), i.order());
}

}  // namespace facons
