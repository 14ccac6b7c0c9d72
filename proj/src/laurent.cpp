#include "facons/laurent.hpp"

#include <limits>
#include <sstream>

namespace facons {

int checked_add(int a, int b) {
  int r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Laurent exponent overflow");
  return r;
}

int checked_mul(int a, int b) {
  int r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Laurent exponent overflow");
  return r;
}

LaurentExpansion::LaurentExpansion(ArenaPtr symbols, int exponent, Polynomial coeff)
    : symbols_(std::move(symbols)) {
  add_term(exponent, coeff);
}

LaurentExpansion LaurentExpansion::constant(ArenaPtr symbols, const Polynomial& c) {
  return LaurentExpansion(std::move(symbols), 0, c);
}

Polynomial LaurentExpansion::coefficient(int exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? Polynomial(symbols_) : it->second;
}

int LaurentExpansion::max_exponent() const {
  return coeffs_.empty() ? std::numeric_limits<int>::min() : coeffs_.rbegin()->first;
}

int LaurentExpansion::min_exponent() const {
  return coeffs_.empty() ? std::numeric_limits<int>::max() : coeffs_.begin()->first;
}

void LaurentExpansion::add_term(int exponent, const Polynomial& coeff) {
  if (coeff.is_zero()) return;
  if (!same_arena(coeff.arena(), symbols_)) throw ArenaMismatch("Laurent coefficient outside symbol arena");
  auto it = coeffs_.find(exponent);
  if (it == coeffs_.end()) {
    coeffs_.emplace(exponent, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) coeffs_.erase(it);
}

LaurentExpansion operator+(const LaurentExpansion& a, const LaurentExpansion& b) {
  if (!same_arena(a.symbols_, b.symbols_)) throw ArenaMismatch("Laurent expansions over different arenas");
  LaurentExpansion r = a;
  for (const auto& [e, c] : b.coeffs_) r.add_term(e, c);
  return r;
}

LaurentExpansion operator*(const LaurentExpansion& a, const LaurentExpansion& b) {
  if (!same_arena(a.symbols_, b.symbols_)) throw ArenaMismatch("Laurent expansions over different arenas");
  LaurentExpansion r(a.symbols_);
  for (const auto& [ea, ca] : a.coeffs_)
    for (const auto& [eb, cb] : b.coeffs_) r.add_term(checked_add(ea, eb), ca * cb);
  return r;
}

bool operator==(const LaurentExpansion& a, const LaurentExpansion& b) {
  if (a.coeffs_.size() != b.coeffs_.size()) return false;
  auto i = a.coeffs_.begin();
  auto j = b.coeffs_.begin();
  for (; i != a.coeffs_.end(); ++i, ++j)
    if (i->first != j->first || !(i->second == j->second)) return false;
  return true;
}

std::string LaurentExpansion::to_string(const std::string& param) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << it->second.to_string() << ")";
    if (it->first != 0) os << "*" << param << "^" << it->first;
  }
  return os.str();
}

LaurentExpansion substitute_curve(const Polynomial& p, const CurveAnsatz& ansatz) {
  if (ansatz.coords.size() != p.nvars())
    throw ArenaMismatch("curve ansatz needs one entry per arena variable");
  const ArenaPtr& sym = ansatz.symbols;
  std::vector<std::vector<LaurentExpansion>> powers(p.nvars());
  LaurentExpansion result(sym);
  for (const auto& t : p.terms()) {
    LaurentExpansion term(sym, 0, Polynomial(sym, t.coeff));
    for (std::size_t v = 0; v < p.nvars(); ++v) {
      auto e = t.mono.exps[v];
      if (!e) continue;
      auto& pv = powers[v];
      if (pv.empty()) pv.push_back(LaurentExpansion(sym, 0, Polynomial(sym, Rational(1))));
      while (pv.size() <= e) pv.push_back(pv.back() * ansatz.coords[v]);
      term = term * pv[e];
    }
    result = result + term;
  }
  return result;
}

LaurentExpansion derivative_u(const LaurentExpansion& e) {
  LaurentExpansion r(e.symbols());
  for (const auto& [k, c] : e.coefficients())
    if (k != 0) r.add_term(k - 1, Rational(k) * c);
  return r;
}

std::map<int, Complex> specialize(const LaurentExpansion& e, std::span<const Complex> values) {
  std::map<int, Complex> out;
  for (const auto& [k, c] : e.coefficients()) out[k] = c.evaluate(values);
  return out;
}

std::map<int, Rational> specialize_exact(const LaurentExpansion& e, std::span<const Rational> values) {
  std::map<int, Rational> out;
  for (const auto& [k, c] : e.coefficients()) {
    Rational v = c.evaluate_exact(values);
    if (sgn(v) != 0) out[k] = v;
  }
  return out;
}

}  // namespace facons
