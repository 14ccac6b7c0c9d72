#include "facons/solve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace facons {

namespace {

constexpr std::size_t kMaxStandard = 1500;

std::vector<Monomial> standard_monomials(const GroebnerBasis& gb) {
  auto lms = gb.leading_monomials();
  std::size_t n = gb.arena()->size();
  auto reducible = [&](const Monomial& m) {
    return std::any_of(lms.begin(), lms.end(), [&](const Monomial& l) { return l.divides(m); });
  };
  std::vector<Monomial> out;
  std::set<Monomial> seen;
  std::deque<Monomial> queue{Monomial(n)};
  seen.insert(Monomial(n));
  while (!queue.empty()) {
    Monomial m = queue.front();
    queue.pop_front();
    if (reducible(m)) continue;
    out.push_back(m);
    if (out.size() > kMaxStandard) throw ResourceLimitExceeded("quotient ring too large to solve numerically");
    for (std::size_t i = 0; i < n; ++i) {
      Monomial next = m;
      ++next.exps[i];
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Complex eval(const Polynomial& p, const std::vector<Complex>& x) { return p.evaluate(x); }

void newton_polish(const std::vector<Polynomial>& eqs, std::vector<Complex>& x) {
  std::size_t n = x.size();
  std::vector<std::vector<Polynomial>> jac(eqs.size());
  for (std::size_t k = 0; k < eqs.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) jac[k].push_back(eqs[k].derivative(i));
  for (int it = 0; it < 30; ++it) {
    Eigen::MatrixXcd j(eqs.size(), n);
    Eigen::VectorXcd r(eqs.size());
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      r(k) = -eval(eqs[k], x);
      for (std::size_t i = 0; i < n; ++i) j(k, i) = eval(jac[k][i], x);
    }
    Eigen::VectorXcd step = j.completeOrthogonalDecomposition().solve(r);
    double scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step(i);
      scale = std::max(scale, std::abs(x[i]));
    }
    if (!step.allFinite()) return;
    if (step.norm() < 1e-15 * scale) return;
  }
}

bool close(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0, s = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(a[i]));
  }
  return d < 1e-7 * s;
}

std::optional<std::vector<Rational>> exact_point(const std::vector<Complex>& x, const std::vector<Polynomial>& eqs) {
  std::vector<Rational> q;
  for (const auto& c : x) {
    if (std::abs(c.imag()) > 1e-9 * std::max(1.0, std::abs(c))) return std::nullopt;
    auto r = rationalize(c.real());
    if (!r) return std::nullopt;
    q.push_back(*r);
  }
  for (const auto& e : eqs)
    if (e.evaluate_exact(q) != 0) return std::nullopt;
  return q;
}

std::vector<std::vector<Complex>> zero_dimensional(const GroebnerBasis& gb) {
  std::size_t n = gb.arena()->size();
  auto basis = standard_monomials(gb);
  std::size_t N = basis.size();
  std::map<Monomial, std::size_t> index;
  for (std::size_t k = 0; k < N; ++k) index[basis[k]] = k;
  std::vector<Eigen::MatrixXd> mult(n, Eigen::MatrixXd::Zero(N, N));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      Monomial m = basis[k];
      ++m.exps[i];
      Polynomial r = normal_form(Polynomial::monomial(gb.arena(), m, 1), gb);
      for (const auto& t : r.terms()) mult[i](index.at(t.mono), k) = t.coeff.get_d();
    }
  Eigen::MatrixXd generic = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < n; ++i) generic += mult[i] / (static_cast<double>(i) + 1.37);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(generic.transpose().cast<Complex>());
  std::vector<std::vector<Complex>> out;
  for (std::size_t e = 0; e < N; ++e) {
    Eigen::VectorXcd w = es.eigenvectors().col(e);
    Complex norm = w.dot(w);
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::VectorXcd mw = mult[i].transpose().cast<Complex>() * w;
      x[i] = w.dot(mw) / norm;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

std::optional<Rational> rationalize(double x, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued fraction convergents.
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    long long ai = static_cast<long long>(a);
    long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) <= 1e-10 * std::max(1.0, std::abs(x))) {
      Rational q(static_cast<long>(p1), static_cast<long>(q1));
      q.canonicalize();
      return q;
    }
    double frac = r - a;
    if (frac == 0) break;
    r = 1 / frac;
  }
  return std::nullopt;
}

SolveResult solve_system(const Ideal& ideal) {
  std::size_t n = ideal.arena()->size();
  SolveResult res;
  auto grev = ideal.with_order(MonomialOrder::grevlex(n));
  auto indep = independent_set(grev);
  if (!indep) return res;
  Ideal work = grev;
  if (!indep->empty()) {
    res.non_isolated = true;
    res.sliced = *indep;
    std::vector<Polynomial> cuts;
    for (std::size_t k = 0; k < indep->size(); ++k) {
      Rational c(static_cast<long>(k + 2), static_cast<long>(k + 3));
      cuts.push_back(Polynomial::variable(ideal.arena(), (*indep)[k]) - Polynomial(ideal.arena(), c));
    }
    work = grev.plus(cuts);
  }
  auto gb = buchberger(work);
  if (gb.is_unit()) return res;
  std::vector<Polynomial> eqs = gb.basis();
  std::vector<Polynomial> originals = ideal.generators();
  std::vector<Solution> sols;
  for (auto x : zero_dimensional(gb)) {
    newton_polish(eqs, x);
    bool finite = std::all_of(x.begin(), x.end(), [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
    if (!finite) continue;
    double resid = 0;
    for (const auto& e : eqs) resid = std::max(resid, std::abs(eval(e, x)));
    if (resid > 1e-8) continue;
    if (std::any_of(sols.begin(), sols.end(), [&](const Solution& s) { return close(s.values, x); })) continue;
    Solution s{x, exact_point(x, originals)};
    if (s.exact)
      for (std::size_t i = 0; i < n; ++i) s.values[i] = Complex(s.exact->at(i).get_d(), 0);
    sols.push_back(std::move(s));
  }
  std::sort(sols.begin(), sols.end(), [](const Solution& a, const Solution& b) {
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (a.values[i].real() != b.values[i].real()) return a.values[i].real() < b.values[i].real();
      if (a.values[i].imag() != b.values[i].imag()) return a.values[i].imag() < b.values[i].imag();
    }
    return false;
  });
  res.solutions = std::move(sols);
  return res;
}

}  // namespace facons
