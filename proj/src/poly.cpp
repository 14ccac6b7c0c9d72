#include "facons/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace facons {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Arena::Arena(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate variable " + names_[i]);
}

int Arena::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

ArenaPtr make_arena(std::vector<std::string> names) {
  return std::make_shared<const Arena>(std::move(names));
}

bool same_arena(const ArenaPtr& a, const ArenaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------- Monomial

std::uint64_t Monomial::degree() const {
  std::uint64_t d = 0;
  for (auto e : exps) d += e;
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(exps.begin(), exps.end(), [](auto e) { return e == 0; });
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] > other.exps[i]) return false;
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] && other.exps[i]) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = a.exps[i] + b.exps[i];
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = a.exps[i] - b.exps[i];
  return r;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = std::max(a.exps[i], b.exps[i]);
  return r;
}

Monomial gcd(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = std::min(a.exps[i], b.exps[i]);
  return r;
}

// -------------------------------------------------------------- Polynomial

namespace {

// Canonical storage: descending lex on exponent vectors.
bool lex_greater(const Term& a, const Term& b) { return a.mono > b.mono; }

void canonicalize(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), lex_greater);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return sgn(t.coeff) == 0; });
  terms = std::move(out);
}

void require_same(const Polynomial& a, const Polynomial& b) {
  if (!same_arena(a.arena(), b.arena())) throw ArenaMismatch("polynomials over different arenas");
}

}  // namespace

Polynomial::Polynomial(ArenaPtr arena) : arena_(std::move(arena)) {}

Polynomial::Polynomial(ArenaPtr arena, const Rational& c) : arena_(std::move(arena)) {
  if (sgn(c) != 0) terms_.push_back({Monomial(arena_->size()), c});
}

Polynomial Polynomial::variable(ArenaPtr arena, std::size_t index) {
  if (index >= arena->size()) throw std::out_of_range("variable index");
  Monomial m(arena->size());
  m.exps[index] = 1;
  return monomial(std::move(arena), std::move(m), Rational(1));
}

Polynomial Polynomial::variable(ArenaPtr arena, const std::string& name) {
  int i = arena->index_of(name);
  if (i < 0) throw ArenaMismatch("unknown variable " + name);
  return variable(std::move(arena), static_cast<std::size_t>(i));
}

Polynomial Polynomial::monomial(ArenaPtr arena, Monomial m, Rational c) {
  Polynomial p(std::move(arena));
  if (m.size() != p.nvars()) throw ArenaMismatch("monomial length differs from arena size");
  if (sgn(c) != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

Polynomial Polynomial::from_terms(ArenaPtr arena, std::vector<Term> terms) {
  Polynomial p(std::move(arena));
  for (const auto& t : terms)
    if (t.mono.size() != p.nvars()) throw ArenaMismatch("monomial length differs from arena size");
  canonicalize(terms);
  p.terms_ = std::move(terms);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  if (!terms_.back().mono.is_one()) return 0;
  return terms_.back().coeff;
}

std::uint64_t Polynomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exps[var]);
  return d;
}

bool Polynomial::involves(std::size_t var) const { return degree_in(var) > 0; }

std::vector<std::size_t> Polynomial::support_vars() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < nvars(); ++v)
    if (involves(v)) out.push_back(v);
  return out;
}

Polynomial Polynomial::coefficient_in(std::size_t var, std::uint32_t k) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.exps[var] != k) continue;
    Term c = t;
    c.mono.exps[var] = 0;
    out.push_back(std::move(c));
  }
  return from_terms(arena_, std::move(out));
}

Polynomial Polynomial::leading_coefficient_in(std::size_t var) const {
  return coefficient_in(var, degree_in(var));
}

Polynomial Polynomial::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    auto e = t.mono.exps[var];
    if (e == 0) continue;
    Term d = t;
    d.coeff *= e;
    d.mono.exps[var] = e - 1;
    out.push_back(std::move(d));
  }
  return from_terms(arena_, std::move(out));
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(arena_, Rational(1));
  Polynomial base = *this;
  while (e) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Rational Polynomial::content() const {
  if (terms_.empty()) return 0;
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(num_gcd, den_lcm);
  c.canonicalize();
  return c;
}

Polynomial Polynomial::primitive() const {
  if (terms_.empty()) return *this;
  Rational c = content();
  if (sgn(terms_.front().coeff) < 0) c = -c;
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff /= c;
  return r;
}

Polynomial Polynomial::monic_lex() const {
  if (terms_.empty()) return *this;
  Rational c = terms_.front().coeff;
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff /= c;
  return r;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> images) const {
  if (images.size() != nvars()) throw ArenaMismatch("substitution needs one image per variable");
  if (images.empty()) return *this;
  const ArenaPtr& target = images[0].arena();
  for (const auto& im : images)
    if (!same_arena(im.arena(), target)) throw ArenaMismatch("substitution images over different arenas");
  // Cache powers per variable.
  std::vector<std::vector<Polynomial>> powers(nvars());
  Polynomial result(target);
  for (const auto& t : terms_) {
    Polynomial term(target, t.coeff);
    for (std::size_t v = 0; v < nvars(); ++v) {
      auto e = t.mono.exps[v];
      if (!e) continue;
      auto& pv = powers[v];
      if (pv.empty()) pv.push_back(Polynomial(target, Rational(1)));
      while (pv.size() <= e) pv.push_back(pv.back() * images[v]);
      term = term * pv[e];
    }
    result += term;
  }
  return result;
}

Polynomial Polynomial::specialize(const std::vector<std::pair<std::size_t, Rational>>& values) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term r = t;
    for (const auto& [v, val] : values) {
      auto e = r.mono.exps[v];
      if (!e) continue;
      Rational pw = 1;
      for (std::uint32_t k = 0; k < e; ++k) pw *= val;
      r.coeff *= pw;
      r.mono.exps[v] = 0;
    }
    out.push_back(std::move(r));
  }
  return from_terms(arena_, std::move(out));
}

Complex Polynomial::evaluate(std::span<const Complex> point) const {
  if (point.size() != nvars()) throw std::invalid_argument("point dimension differs from arena size");
  Complex sum = 0;
  for (const auto& t : terms_) {
    Complex prod = 1;
    for (std::size_t v = 0; v < point.size(); ++v)
      for (std::uint32_t k = 0; k < t.mono.exps[v]; ++k) prod *= point[v];
    sum += t.coeff.get_d() * prod;
  }
  return sum;
}

Rational Polynomial::evaluate_exact(std::span<const Rational> point) const {
  if (point.size() != nvars()) throw std::invalid_argument("point dimension differs from arena size");
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational prod = t.coeff;
    for (std::size_t v = 0; v < point.size(); ++v)
      for (std::uint32_t k = 0; k < t.mono.exps[v]; ++k) prod *= point[v];
    sum += prod;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool one = t.mono.is_one();
    bool unit = (c == 1);
    if (!unit || one) {
      os << c.get_str();
      if (!one) os << "*";
    }
    bool need_star = false;
    for (std::size_t v = 0; v < t.mono.size(); ++v) {
      auto e = t.mono.exps[v];
      if (!e) continue;
      if (need_star) os << "*";
      os << arena_->name(v);
      if (e > 1) os << "^" << e;
      need_star = true;
    }
  }
  return os.str();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() && !a.arena_) return b;
  if (b.is_zero() && !b.arena_) return a;
  require_same(a, b);
  Polynomial r(a.arena_);
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  while (i != a.terms_.end() || j != b.terms_.end()) {
    if (j == b.terms_.end() || (i != a.terms_.end() && i->mono > j->mono)) {
      r.terms_.push_back(*i++);
    } else if (i == a.terms_.end() || j->mono > i->mono) {
      r.terms_.push_back(*j++);
    } else {
      Rational c = i->coeff + j->coeff;
      if (sgn(c) != 0) r.terms_.push_back({i->mono, c});
      ++i;
      ++j;
    }
  }
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same(a, b);
  std::map<Monomial, Rational, std::greater<>> acc;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) acc[x.mono * y.mono] += x.coeff * y.coeff;
  Polynomial r(a.arena_);
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) r.terms_.push_back({m, c});
  return r;
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
  if (sgn(c) == 0) return Polynomial(p.arena_);
  Polynomial r = p;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.terms_.empty() && !same_arena(a.arena_, b.arena_)) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

Polynomial embed(const Polynomial& p, const ArenaPtr& target) {
  std::vector<int> map(p.nvars(), -1);
  for (std::size_t v = 0; v < p.nvars(); ++v) map[v] = target->index_of(p.arena()->name(v));
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Monomial m(target->size());
    for (std::size_t v = 0; v < t.mono.size(); ++v) {
      if (!t.mono.exps[v]) continue;
      if (map[v] < 0) throw ArenaMismatch("variable " + p.arena()->name(v) + " missing from target arena");
      m.exps[static_cast<std::size_t>(map[v])] = t.mono.exps[v];
    }
    out.push_back({std::move(m), t.coeff});
  }
  return Polynomial::from_terms(target, std::move(out));
}

Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  require_same(a, b);
  // Lex division: leading terms are terms().front().
  Polynomial rem = a;
  std::vector<Term> quot;
  const Term& lb = b.terms().front();
  while (!rem.is_zero()) {
    const Term& lr = rem.terms().front();
    if (!lb.mono.divides(lr.mono)) throw std::domain_error("polynomial division is not exact");
    Term q{lr.mono / lb.mono, lr.coeff / lb.coeff};
    rem = rem - Polynomial::monomial(a.arena(), q.mono, q.coeff) * b;
    quot.push_back(std::move(q));
  }
  return Polynomial::from_terms(a.arena(), std::move(quot));
}

bool divides(const Polynomial& b, const Polynomial& a) {
  try {
    (void)divide_exact(a, b);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

// -------------------------------------------------------------- points/maps

ComplexPoint::ComplexPoint(std::vector<Complex> c) : coords(std::move(c)) {
  for (const auto& z : coords)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("complex point with non-finite coordinate");
}

ComplexPoint ComplexPoint::from_rationals(std::span<const Rational> q) {
  std::vector<Complex> c;
  c.reserve(q.size());
  for (const auto& x : q) c.emplace_back(x.get_d(), 0.0);
  return ComplexPoint(std::move(c));
}

Complex evaluate(const Polynomial& p, const ComplexPoint& point) { return p.evaluate(point.coords); }

PolynomialMap::PolynomialMap(ArenaPtr source, ArenaPtr target, std::vector<Polynomial> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (components_.size() != source_->size())
    throw std::invalid_argument("map must have one component per source variable");
  if (target_->size() != source_->size()) throw std::invalid_argument("target arena size differs from source");
  for (auto& c : components_) {
    if (!c.arena()) c = Polynomial(source_);
    if (!same_arena(c.arena(), source_)) throw ArenaMismatch("map component outside the source arena");
  }
}

std::vector<Complex> PolynomialMap::evaluate(std::span<const Complex> x) const {
  std::vector<Complex> out;
  out.reserve(dim());
  for (const auto& c : components_) out.push_back(c.evaluate(x));
  return out;
}

std::vector<Rational> PolynomialMap::evaluate_exact(std::span<const Rational> x) const {
  std::vector<Rational> out;
  out.reserve(dim());
  for (const auto& c : components_) out.push_back(c.evaluate_exact(x));
  return out;
}

namespace {

// Cofactor expansion along the first remaining row; zero entries pruned.
Polynomial det_rec(const std::vector<std::vector<Polynomial>>& m, std::vector<std::size_t>& cols,
                   std::size_t row, const ArenaPtr& arena) {
  if (row == m.size()) return Polynomial(arena, Rational(1));
  Polynomial acc(arena);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Polynomial& entry = m[row][cols[k]];
    if (entry.is_zero()) continue;
    std::size_t c = cols[k];
    cols.erase(cols.begin() + static_cast<long>(k));
    Polynomial minor = det_rec(m, cols, row + 1, arena);
    cols.insert(cols.begin() + static_cast<long>(k), c);
    if (minor.is_zero()) continue;
    Polynomial t = entry * minor;
    if (k % 2) acc -= t;
    else acc += t;
  }
  return acc;
}

}  // namespace

Polynomial jacobian_determinant(const PolynomialMap& f) {
  std::size_t n = f.dim();
  std::vector<std::vector<Polynomial>> jac(n, std::vector<Polynomial>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) jac[i][j] = f[i].derivative(j);
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  return det_rec(jac, cols, 0, f.source());
}

}  // namespace facons
