#include "facons/asymptotic_set.hpp"

#include <algorithm>
#include <numeric>

namespace facons {

std::vector<Polynomial> AsymptoticSet::equations() const {
  std::vector<Polynomial> out;
  for (const auto& c : components) out.push_back(c.equation);
  return out;
}

bool AsymptoticSet::contains(std::span<const Rational> point) const {
  for (const auto& c : components)
    if (c.equation.evaluate_exact(point) == 0) return true;
  return false;
}

bool check_dominant(const PolynomialMap& f) { return !jacobian_determinant(f).is_zero(); }

ArenaPtr eliminant_arena(const PolynomialMap& f, std::size_t i) {
  auto names = f.target()->names();
  names.push_back(f.source()->name(i));
  return make_arena(names);
}

Polynomial coordinate_eliminant(const PolynomialMap& f, std::size_t i) {
  std::size_t n = f.dim();
  if (i >= n) throw std::out_of_range("coordinate index out of range");
  // Joint arena: x_1..x_n, a_1..a_n.
  auto names = f.source()->names();
  for (const auto& a : f.target()->names()) names.push_back(a);
  auto joint = make_arena(names);
  std::vector<Polynomial> gens;
  for (std::size_t k = 0; k < n; ++k)
    gens.push_back(embed(f[k], joint) - Polynomial::variable(joint, n + k));
  std::vector<std::size_t> drop;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) drop.push_back(j);
  Ideal elim = eliminate(Ideal(joint, gens), drop);

  const Polynomial* best = nullptr;
  for (const auto& g : elim.generators()) {
    auto d = g.degree_in(i);
    if (d == 0) continue;
    if (!best) {
      best = &g;
      continue;
    }
    auto bd = best->degree_in(i);
    if (d < bd || (d == bd && g.total_degree() < best->total_degree())) best = &g;
  }
  if (!best) throw NonDominantMap("elimination ideal has no element involving " + f.source()->name(i));
  Polynomial e = squarefree_part(*best);
  return embed(e, eliminant_arena(f, i));
}

Polynomial phi0(const Polynomial& eliminant, const ArenaPtr& target) {
  std::size_t xi = eliminant.nvars() - 1;
  if (eliminant.degree_in(xi) == 0) throw std::domain_error("eliminant does not involve its variable");
  return embed(eliminant.leading_coefficient_in(xi), target);
}

Polynomial eliminant_residual(const PolynomialMap& f, std::size_t i, const Polynomial& eliminant) {
  std::vector<Polynomial> images = f.components();
  images.push_back(Polynomial::variable(f.source(), i));
  return eliminant.substitute(images);
}

Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.is_zero() ? b : b.primitive();
  if (b.is_zero()) return a.primitive();
  if (a.is_constant() || b.is_constant()) return Polynomial(a.arena(), 1);
  if (divides(a, b)) return a.primitive();
  if (divides(b, a)) return b.primitive();
  Ideal l = intersect(Ideal(a.arena(), {a}), Ideal(b.arena(), {b}));
  auto gb = buchberger(l);
  if (gb.size() != 1) throw std::logic_error("intersection of principal ideals is not principal");
  return divide_exact(a * b, gb.basis().front()).primitive();
}

Polynomial squarefree_part(const Polynomial& p) {
  if (p.is_zero() || p.is_constant()) return p.is_zero() ? p : Polynomial(p.arena(), 1);
  Polynomial g = p;
  for (auto v : p.support_vars()) {
    g = polynomial_gcd(g, p.derivative(v));
    if (g.is_constant()) break;
  }
  return divide_exact(p, g).primitive();
}

namespace {

bool certified_irreducible(const Polynomial& p) {
  if (p.total_degree() == 1) return true;
  if (p.size() != 2) return false;
  const auto& m1 = p.terms()[0].mono;
  const auto& m2 = p.terms()[1].mono;
  if (!m1.coprime(m2)) return false;
  unsigned g = 0;
  for (std::size_t v = 0; v < m1.size(); ++v) g = std::gcd(g, m1.exps[v] + m2.exps[v]);
  return g == 1;
}

// Split off monomial factors, returning the remaining factor.
Polynomial strip_monomials(const Polynomial& p, std::vector<Polynomial>& factors) {
  Polynomial rest = p;
  for (std::size_t v = 0; v < p.nvars(); ++v) {
    Polynomial var = Polynomial::variable(p.arena(), v);
    bool hit = false;
    while (!rest.is_constant() && divides(var, rest)) {
      rest = divide_exact(rest, var);
      hit = true;
    }
    if (hit) factors.push_back(var);
  }
  return rest;
}

void add_unique(std::vector<Polynomial>& list, const Polynomial& p) {
  Polynomial q = p.primitive();
  if (q.is_constant()) return;
  if (std::find(list.begin(), list.end(), q) == list.end()) list.push_back(q);
}

// Pairwise coprime refinement of a list of squarefree polynomials.
std::vector<Polynomial> gcd_free_basis(std::vector<Polynomial> polys) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < polys.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < polys.size() && !changed; ++j) {
        Polynomial g = polynomial_gcd(polys[i], polys[j]);
        if (g.is_constant()) continue;
        Polynomial a = divide_exact(polys[i], g), b = divide_exact(polys[j], g);
        std::vector<Polynomial> next;
        for (std::size_t k = 0; k < polys.size(); ++k)
          if (k != i && k != j) next.push_back(polys[k]);
        add_unique(next, g);
        add_unique(next, a);
        add_unique(next, b);
        polys = std::move(next);
        changed = true;
      }
  }
  return polys;
}

}  // namespace

AsymptoticSet asymptotic_set(const PolynomialMap& f) {
  if (!check_dominant(f)) throw NonDominantMap("map is not dominant (Jacobian determinant vanishes identically)");
  AsymptoticSet out;
  out.target = f.target();
  std::vector<Polynomial> pieces;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    CoordinateEliminant ce;
    ce.index = i;
    ce.eliminant = coordinate_eliminant(f, i);
    ce.phi0 = phi0(ce.eliminant, f.target());
    out.per_coordinate.push_back(ce);
    if (ce.phi0.is_constant()) continue;
    std::vector<Polynomial> factors;
    Polynomial rest = strip_monomials(ce.phi0.primitive(), factors);
    for (const auto& m : factors) add_unique(pieces, m);
    if (!rest.is_constant()) add_unique(pieces, squarefree_part(rest));
  }
  pieces = gcd_free_basis(pieces);
  std::sort(pieces.begin(), pieces.end(), [](const Polynomial& a, const Polynomial& b) {
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
    return a.to_string() < b.to_string();
  });
  for (const auto& p : pieces) {
    AsymptoticComponent c;
    c.equation = p;
    c.possibly_reducible = !certified_irreducible(p);
    for (const auto& ce : out.per_coordinate)
      if (!ce.phi0.is_constant() && divides(p, ce.phi0)) c.sources.push_back(ce.index);
    out.components.push_back(c);
  }
  return out;
}

bool fiber_nonempty(const PolynomialMap& f, std::span<const Rational> point) {
  if (point.size() != f.dim()) throw std::invalid_argument("point dimension differs from map");
  std::vector<Polynomial> gens;
  for (std::size_t k = 0; k < f.dim(); ++k) gens.push_back(f[k] - Polynomial(f.source(), point[k]));
  return !is_unit_ideal(Ideal(f.source(), gens));
}

}  // namespace facons
