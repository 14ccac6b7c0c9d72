#include "facons/tube.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "facons/map_parser.hpp"
#include "facons/solve.hpp"

namespace facons {

namespace {

Rational rpow(const Rational& u, int k) {
  Rational r = 1;
  Rational base = k >= 0 ? u : Rational(1) / u;
  for (int i = 0; i < std::abs(k); ++i) r *= base;
  return r;
}

double norm(const std::vector<Complex>& v) {
  double s = 0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<Complex> to_complex(const std::vector<Rational>& q) {
  std::vector<Complex> out;
  for (const auto& r : q) out.emplace_back(r.get_d(), 0.0);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string format_coeff_term(const Rational& c, int k, const std::string& param) {
  std::string mag = to_string(abs(c));
  bool one = abs(c) == 1;
  if (k == 0) return mag;
  if (k > 0) {
    std::string pw = k == 1 ? param : param + "^" + std::to_string(k);
    if (one) return pw;
    return (c.get_den() == 1 ? mag : "(" + mag + ")") + "*" + pw;
  }
  std::string den = -k == 1 ? param : param + "^" + std::to_string(-k);
  if (c.get_den() == 1) return mag + "/" + den;
  return c.get_num() == 1 || c.get_num() == -1 ? "1/(" + c.get_den().get_str() + "*" + den + ")"
                                                : "(" + mag + ")/" + den;
}

/// Neville extrapolation to h = 0.
template <class T>
T extrapolate(const std::vector<T>& h, std::vector<T> y) {
  std::size_t n = y.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) y[i] = (h[i] * y[i + 1] - h[i + m] * y[i]) / (h[i] - h[i + m]);
  return y[0];
}

bool real_point(const std::vector<Complex>& x) {
  return std::all_of(x.begin(), x.end(), [](Complex c) { return std::abs(c.imag()) < 1e-14; });
}

}  // namespace

ParametricCurve ParametricCurve::from_exact(std::vector<std::map<int, Rational>> coeffs) {
  ParametricCurve c;
  for (auto& m : coeffs) {
    std::map<int, Complex> num;
    for (auto it = m.begin(); it != m.end();) {
      if (sgn(it->second) == 0) {
        it = m.erase(it);
        continue;
      }
      num[it->first] = Complex(it->second.get_d(), 0);
      ++it;
    }
    c.numeric.push_back(num);
  }
  c.exact = std::move(coeffs);
  return c;
}

ParametricCurve ParametricCurve::from_numeric(std::vector<std::map<int, Complex>> coeffs) {
  ParametricCurve c;
  c.numeric = std::move(coeffs);
  return c;
}

int ParametricCurve::max_exponent() const {
  int m = std::numeric_limits<int>::min();
  for (const auto& c : numeric)
    if (!c.empty()) m = std::max(m, c.rbegin()->first);
  return m;
}

std::vector<Complex> ParametricCurve::at(double u) const {
  std::vector<Complex> out;
  for (const auto& c : numeric) {
    Complex s = 0;
    for (const auto& [k, v] : c) s += v * std::pow(u, k);
    out.push_back(s);
  }
  return out;
}

std::vector<Rational> ParametricCurve::at_exact(const Rational& u) const {
  if (!exact) throw RayError("curve has no exact form");
  std::vector<Rational> out;
  for (const auto& c : *exact) {
    Rational s = 0;
    for (const auto& [k, v] : c) s += v * rpow(u, k);
    out.push_back(s);
  }
  return out;
}

std::vector<Complex> ParametricCurve::derivative(double u) const {
  std::vector<Complex> out;
  for (const auto& c : numeric) {
    Complex s = 0;
    for (const auto& [k, v] : c)
      if (k != 0) s += v * static_cast<double>(k) * std::pow(u, k - 1);
    out.push_back(s);
  }
  return out;
}

std::vector<Complex> ParametricCurve::limit() const {
  std::vector<Complex> out;
  for (const auto& c : numeric) {
    auto it = c.find(0);
    out.push_back(it == c.end() ? Complex(0) : it->second);
  }
  return out;
}

std::optional<std::vector<Rational>> ParametricCurve::limit_exact() const {
  if (!exact) return std::nullopt;
  std::vector<Rational> out;
  for (const auto& c : *exact) {
    auto it = c.find(0);
    out.push_back(it == c.end() ? Rational(0) : it->second);
  }
  return out;
}

std::string ParametricCurve::to_string(const std::string& param) const {
  if (!exact) throw RayError("curve has no exact form");
  std::string out = "(";
  for (std::size_t j = 0; j < exact->size(); ++j) {
    if (j) out += ", ";
    const auto& c = (*exact)[j];
    if (c.empty()) {
      out += "0";
      continue;
    }
    bool first = true;
    // Constant first, then falling powers, then the 1/u tail.
    std::vector<std::pair<int, Rational>> order;
    if (c.count(0)) order.emplace_back(0, c.at(0));
    for (auto it = c.rbegin(); it != c.rend(); ++it)
      if (it->first != 0) order.emplace_back(it->first, it->second);
    for (const auto& [k, v] : order) {
      std::string t = format_coeff_term(v, k, param);
      if (first) out += (sgn(v) < 0 ? "-" : "") + t;
      else out += (sgn(v) < 0 ? " - " : " + ") + t;
      first = false;
    }
  }
  return out + ")";
}

Facon parse_facon(const std::string& text) {
  static const std::regex re(R"(\s*\(([0-9,\s]*)\)\s*\[([0-9,\s]*)\]\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw std::invalid_argument("malformed facon label: " + text);
  auto indices = [](const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& part : split(s, ',')) {
      if (part.empty()) continue;
      long v = std::stol(part);
      if (v < 1) throw std::invalid_argument("facon indices start at 1");
      out.push_back(static_cast<std::size_t>(v - 1));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return Facon(indices(m[1]), indices(m[2]));
}

RayTemplate parse_ray_template(const std::string& text, std::size_t n) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("ray template needs 'label: expressions'");
  RayTemplate out;
  out.facon = parse_facon(text.substr(0, colon));
  std::string body = text.substr(colon + 1);
  std::string sides;
  if (auto bar = body.find('|'); bar != std::string::npos) {
    sides = body.substr(bar + 1);
    body = body.substr(0, bar);
  }
  auto exprs = split(body, ';');
  if (exprs.size() != n) throw std::invalid_argument("ray template has the wrong number of coordinates");

  std::vector<std::string> names;
  static const std::regex ident(R"([A-Za-z_][A-Za-z0-9_]*)");
  for (const auto* s : {&body, &sides})
    for (auto it = std::sregex_iterator(s->begin(), s->end(), ident); it != std::sregex_iterator(); ++it) {
      std::string id = it->str();
      if (id == "u" || id == "v") continue;
      if (std::find(names.begin(), names.end(), id) == names.end()) names.push_back(id);
    }
  auto sym = make_arena(names);
  auto full_names = names;
  full_names.push_back("u");
  full_names.push_back("v");
  auto full = make_arena(full_names);
  std::size_t m = names.size();

  out.ansatz.symbols = sym;
  for (const auto& e : exprs) {
    Polynomial p = parse_polynomial(e, full);
    LaurentExpansion l(sym);
    for (const auto& t : p.terms()) {
      int k = static_cast<int>(t.mono.exps[m]) - static_cast<int>(t.mono.exps[m + 1]);
      Monomial mono(std::vector<std::uint32_t>(t.mono.exps.begin(), t.mono.exps.begin() + m));
      l.add_term(k, Polynomial::monomial(sym, mono, t.coeff));
    }
    out.ansatz.coords.push_back(l);
  }
  if (!trim(sides).empty())
    for (const auto& s : split(sides, ';')) {
      if (s.empty()) continue;
      Polynomial p = parse_polynomial(s, full);
      if (p.involves(m) || p.involves(m + 1)) throw std::invalid_argument("side equations may not involve u");
      out.ansatz.side_equations.push_back(embed(p, sym));
    }
  return out;
}

RayTemplate infer_template(const Facon& facon, const std::vector<int>& weights) {
  std::size_t n = weights.size();
  auto in = [](const std::vector<std::size_t>& s, std::size_t j) { return std::find(s.begin(), s.end(), j) != s.end(); };
  std::vector<std::string> names;
  std::vector<int> bidx(n, -1), cidx(n, -1);
  for (std::size_t j = 0; j < n; ++j)
    if (!in(facon.diverging, j)) {
      bidx[j] = static_cast<int>(names.size());
      names.push_back("b" + std::to_string(j + 1));
    }
  for (std::size_t j = 0; j < n; ++j)
    if (in(facon.diverging, j) || in(facon.fixed_limit, j)) {
      if (in(facon.diverging, j) != (weights[j] > 0)) throw std::invalid_argument("weights do not match the facon");
      cidx[j] = static_cast<int>(names.size());
      names.push_back("c" + std::to_string(j + 1));
    }
  names.push_back("z");
  auto sym = make_arena(names);
  RayTemplate out;
  out.facon = facon;
  out.ansatz.symbols = sym;
  Polynomial prod(sym, 1);
  for (std::size_t j = 0; j < n; ++j) {
    LaurentExpansion e(sym);
    if (bidx[j] >= 0) e.add_term(0, Polynomial::variable(sym, bidx[j]));
    if (cidx[j] >= 0) {
      Polynomial c = Polynomial::variable(sym, cidx[j]);
      e.add_term(weights[j], c);
      prod *= c;
    }
    out.ansatz.coords.push_back(e);
  }
  out.ansatz.side_equations.push_back(Polynomial::variable(sym, names.size() - 1) * prod - Polynomial(sym, 1));
  return out;
}

Ray solve_ray(const PolynomialMap& f, const std::vector<Rational>& a, const Stratum& stratum, const RayTemplate& tmpl,
              const AsymptoticSet* sf) {
  std::size_t n = f.dim();
  const CurveAnsatz& ans = tmpl.ansatz;
  if (a.size() != n || ans.size() != n) throw std::invalid_argument("dimension mismatch in ray data");
  std::optional<AsymptoticSet> own;
  if (!sf) sf = &own.emplace(asymptotic_set(f));
  if (sf->contains(a)) throw RayError("start point lies on the asymptotic set");
  for (std::size_t j = 0; j < n; ++j) {
    bool div = std::find(tmpl.facon.diverging.begin(), tmpl.facon.diverging.end(), j) != tmpl.facon.diverging.end();
    bool grows = !ans.coords[j].is_zero() && ans.coords[j].max_exponent() > 0;
    if (div != grows) throw RayError("template does not match the facon at coordinate " + std::to_string(j + 1));
  }

  const ArenaPtr& sym = ans.symbols;
  std::size_t m = sym->size();
  auto ext = extend_arena(sym, f.target()->names());
  std::vector<Polynomial> alpha;
  for (std::size_t k = 0; k < n; ++k) alpha.push_back(Polynomial::variable(ext, m + k));
  auto to_ext = [&](const Polynomial& p) { return embed(p, ext); };
  auto on_alpha = [&](const Polynomial& p) { return p.substitute(alpha); };

  std::vector<Polynomial> eqs;
  std::vector<LaurentExpansion> images;
  for (const auto& s : ans.side_equations) eqs.push_back(to_ext(s));
  for (std::size_t k = 0; k < n; ++k) {
    LaurentExpansion e = substitute_curve(f[k], ans);
    images.push_back(e);
    Polynomial at_one(ext);
    for (const auto& [exp, c] : e.coefficients()) {
      Polynomial ce = to_ext(c);
      if (exp > 0) eqs.push_back(ce);
      at_one += ce;
    }
    eqs.push_back(to_ext(e.coefficient(0)) - alpha[k]);
    eqs.push_back(at_one - Polynomial(ext, a[k]));
  }
  for (const auto& g : stratum.equations().generators()) eqs.push_back(on_alpha(g));

  auto res = solve_system(Ideal(ext, eqs));
  auto off_exclusions = [&](const Solution& s) {
    for (const auto& h : stratum.set.exclusions) {
      bool inside = true;
      for (const auto& g : h.generators()) {
        Polynomial ga = on_alpha(g);
        if (s.exact ? ga.evaluate_exact(*s.exact) != 0 : std::abs(ga.evaluate(s.values)) > 1e-9) inside = false;
      }
      if (inside) return false;
    }
    return true;
  };
  auto ac = to_complex(a);
  auto limit_of = [&](const Solution& s) {
    return std::vector<Complex>(s.values.begin() + static_cast<long>(m), s.values.end());
  };
  const Solution* best = nullptr;
  for (const auto& s : res.solutions) {
    if (!off_exclusions(s)) continue;
    if (!best) {
      best = &s;
      continue;
    }
    if (s.exact.has_value() != best->exact.has_value()) {
      if (s.exact) best = &s;
      continue;
    }
    if (distance(limit_of(s), ac) < distance(limit_of(*best), ac) - 1e-12) best = &s;
  }
  if (!best) throw RayError("no ray with this template reaches the stratum");

  Ray ray;
  ray.facon = tmpl.facon;
  ray.stratum = stratum.name;
  ray.ansatz = ans;
  ray.start = a;
  ray.non_isolated = res.non_isolated;
  ray.parameters.assign(best->values.begin(), best->values.begin() + static_cast<long>(m));
  if (best->exact) {
    std::vector<Rational> params(best->exact->begin(), best->exact->begin() + static_cast<long>(m));
    std::vector<std::map<int, Rational>> curve, image;
    for (const auto& c : ans.coords) curve.push_back(specialize_exact(c, params));
    for (const auto& e : images) image.push_back(specialize_exact(e, params));
    ray.exact_parameters = params;
    ray.curve = ParametricCurve::from_exact(curve);
    ray.image = ParametricCurve::from_exact(image);
    if (ray.image.max_exponent() > 0) throw RayError("ray image has positive powers of u");
    if (ray.image.at_exact(1) != a) throw RayError("ray does not start at the requested point");
  } else {
    std::vector<std::map<int, Complex>> curve, image;
    double scale = std::max(1.0, norm(ac));
    for (const auto& c : ans.coords) curve.push_back(specialize(c, ray.parameters));
    for (const auto& e : images) {
      auto sp = specialize(e, ray.parameters);
      for (auto it = sp.begin(); it != sp.end();) {
        if (it->first > 0 && std::abs(it->second) < 1e-9 * scale) it = sp.erase(it);
        else ++it;
      }
      image.push_back(sp);
    }
    ray.curve = ParametricCurve::from_numeric(curve);
    ray.image = ParametricCurve::from_numeric(image);
    if (ray.image.max_exponent() > 0) throw RayError("ray image has positive powers of u");
  }
  return ray;
}

double curvilinear_distance(const ParametricCurve& curve, double u_value) {
  if (std::isinf(u_value)) return 0.0;
  if (!(u_value >= 1)) throw std::invalid_argument("curvilinear distance needs u >= 1");
  if (curve.max_exponent() > 0) throw DivergentIntegral("curve does not converge as u grows");
  double s0 = 1.0 - 1.0 / u_value;
  auto integrand = [&](double s) {
    if (!(s < 1.0)) return 0.0;
    double u = 1.0 / (1.0 - s);
    return norm(curve.derivative(u)) * u * u;
  };
  double err = 0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, s0, 1.0, 15, 1e-8, &err);
  if (!std::isfinite(v)) throw DivergentIntegral("arc length integral diverges");
  return std::max(0.0, v);
}

double curvilinear_distance(const Ray& ray, double u_value) { return curvilinear_distance(ray.image, u_value); }

ComplexPoint project_pi(const Ray& ray) { return ComplexPoint(ray.image.limit()); }

ParametricCurve blend_rays(const std::vector<Ray>& rays, const std::vector<Rational>& s) {
  if (rays.empty() || rays.size() != s.size()) throw std::invalid_argument("one weight per ray is required");
  Rational total = 0;
  for (const auto& w : s) {
    if (w < 0 || w > 1) throw std::invalid_argument("blend weights must lie in [0, 1]");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("blend weights must sum to 1");
  bool exact = std::all_of(rays.begin(), rays.end(), [](const Ray& r) { return r.image.exact.has_value(); });
  auto l0 = rays[0].image.limit();
  for (const auto& r : rays) {
    bool same = exact ? r.image.limit_exact() == rays[0].image.limit_exact() : distance(r.image.limit(), l0) < 1e-9;
    if (!same) throw std::invalid_argument("blended rays must share their limit point");
  }
  std::size_t n = rays[0].image.dim();
  if (exact) {
    std::vector<std::map<int, Rational>> out(n);
    for (std::size_t r = 0; r < rays.size(); ++r)
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [k, c] : (*rays[r].image.exact)[j]) out[j][k] += s[r] * c;
    return ParametricCurve::from_exact(out);
  }
  std::vector<std::map<int, Complex>> out(n);
  for (std::size_t r = 0; r < rays.size(); ++r)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : rays[r].image.numeric[j]) out[j][k] += s[r].get_d() * c;
  return ParametricCurve::from_numeric(out);
}

namespace {

/// Parameter t >= 1 where the curve passes closest to y.
double locate(const ParametricCurve& c, const std::vector<Complex>& y) {
  double best = 1, bestd = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 96; ++k) {
    double t = std::pow(2.0, k / 4.0);
    double d = distance(c.at(t), y);
    if (d < bestd) {
      bestd = d;
      best = t;
    }
  }
  double t = best;
  for (int it = 0; it < 60; ++it) {
    auto r = c.at(t), d = c.derivative(t);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      num += std::real(std::conj(d[j]) * (r[j] - y[j]));
      den += std::norm(d[j]);
    }
    if (den == 0) break;
    double step = num / den;
    t = std::max(1.0, t - step);
    if (std::abs(step) < 1e-15 * t) break;
  }
  return t;
}

struct SampleWork {
  TubeSample sample;
  std::vector<std::string> violations;
};

}  // namespace

TubeReport verify_thom_mather(const PolynomialMap& f, const Stratum& lower, const Stratum& upper, const TubeSpec& spec,
                              const AsymptoticSet* sf) {
  TubeReport rep;
  rep.lower = lower.name;
  rep.upper = upper.name;
  if (lower.name == upper.name) return rep;
  if (!closure_contains(lower, upper)) throw std::invalid_argument("lower stratum is not in the closure of the upper one");
  if (!spec.lower_template || !spec.upper_template) throw RayError("missing ray templates");
  std::optional<AsymptoticSet> own;
  if (!sf) sf = &own.emplace(asymptotic_set(f));
  const RayTemplate& lt = *spec.lower_template;
  const RayTemplate& ut = *spec.upper_template;
  if (!facon_less(lt.facon, ut.facon) && !(lt.facon == ut.facon))
    rep.violations.push_back("lower facon " + lt.facon.to_string() + " does not precede " + ut.facon.to_string());

  Ray upper_ray = solve_ray(f, spec.start, upper, ut, sf);
  Ray lower_ray = solve_ray(f, spec.start, lower, lt, sf);
  if (!upper_ray.exact()) throw RayError("sampling needs an exact ray towards the upper stratum");
  auto family = [&](const Rational& u) { return solve_ray(f, upper_ray.image.at_exact(u), lower, lt, sf); };

  auto upper_projection = [&](const std::vector<Rational>& x, double& rho) {
    Ray r = solve_ray(f, x, upper, ut, sf);
    rho = curvilinear_distance(r.image, 1.0);
    return r;
  };
  auto epsilon_prime = [&](const std::vector<Complex>& y, const std::vector<Complex>& lower_point) {
    return std::min(spec.eps0, distance(y, lower_point) / 2) / 2;
  };

  // Smallest power of two along the upper ray whose family samples sit in
  // the half-radius tube.
  Rational base = 1;
  for (int k = 0; k < 20; ++k, base *= 2) {
    Ray fam = family(base);
    bool inside = true;
    for (const auto& t : spec.t_values) {
      double rho = 0;
      Ray r = upper_projection(fam.image.at_exact(t), rho);
      if (rho > epsilon_prime(r.image.limit(), fam.image.limit())) {
        inside = false;
        break;
      }
    }
    if (inside) break;
  }
  rep.taper_base = base;

  // Limit of the family image curves as the base point runs to the upper
  // stratum, by polynomial extrapolation in 1/u.
  std::vector<Ray> probes;
  for (int k = 0; k < 6; ++k) probes.push_back(family(base * rpow(Rational(2), k)));
  bool probes_exact = std::all_of(probes.begin(), probes.end(), [](const Ray& r) { return r.image.exact.has_value(); });
  std::size_t n = f.dim();
  ParametricCurve limit_curve;
  if (probes_exact) {
    std::vector<Rational> h;
    for (int k = 0; k < 6; ++k) h.push_back(Rational(1) / (base * rpow(Rational(2), k)));
    std::vector<std::map<int, Rational>> coeffs(n);
    bool stable = true;
    for (std::size_t j = 0; j < n; ++j) {
      std::set<int> keys;
      for (const auto& p : probes)
        for (const auto& [k, c] : (*p.image.exact)[j]) keys.insert(k);
      for (int key : keys) {
        std::vector<Rational> y;
        for (const auto& p : probes) {
          auto it = (*p.image.exact)[j].find(key);
          y.push_back(it == (*p.image.exact)[j].end() ? Rational(0) : it->second);
        }
        Rational full = extrapolate(h, y);
        Rational shorter = extrapolate(std::vector<Rational>(h.begin(), h.end() - 1), std::vector<Rational>(y.begin(), y.end() - 1));
        if (full != shorter) stable = false;
        coeffs[j][key] = full;
      }
    }
    limit_curve = ParametricCurve::from_exact(coeffs);
    rep.limit_curve_exact = stable;
  } else {
    std::vector<Complex> h;
    for (int k = 0; k < 6; ++k) h.emplace_back(1.0 / (base.get_d() * std::pow(2.0, k)), 0);
    std::vector<std::map<int, Complex>> coeffs(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::set<int> keys;
      for (const auto& p : probes)
        for (const auto& [k, c] : p.image.numeric[j]) keys.insert(k);
      for (int key : keys) {
        std::vector<Complex> y;
        for (const auto& p : probes) {
          auto it = p.image.numeric[j].find(key);
          y.push_back(it == p.image.numeric[j].end() ? Complex(0) : it->second);
        }
        coeffs[j][key] = extrapolate(h, y);
      }
    }
    limit_curve = ParametricCurve::from_numeric(coeffs);
  }
  auto lower_point = limit_curve.limit();
  if (distance(lower_point, lower_ray.image.limit()) > spec.tol)
    rep.violations.push_back("limit curve does not end at the lower ray's limit point");
  if (curvilinear_distance(limit_curve, 1e12) > spec.tol || curvilinear_distance(upper_ray.image, 1e12) > spec.tol)
    rep.rho_zero_on_stratum = false;

  std::vector<Ray> rows;
  for (const auto& factor : spec.u_factors) rows.push_back(family(base * factor));

  Rational h;
  if (auto q = rationalize(spec.fd_step)) h = *q;
  else throw std::invalid_argument("finite-difference step must be a simple fraction");

  auto run = [&](std::size_t row, std::size_t col) {
    SampleWork w;
    TubeSample& s = w.sample;
    const Ray& fam = rows[row];
    s.u = base * spec.u_factors[row];
    s.t = spec.t_values[col];
    if (!fam.image.exact) throw RayError("family ray has no exact form");
    auto x = fam.image.at_exact(s.t);
    s.point = to_complex(x);
    double t = s.t.get_d();

    s.rho_lower = curvilinear_distance(limit_curve, t);
    std::size_t index = row * spec.t_values.size() + col;
    if (spec.rho_fault_sample && *spec.rho_fault_sample == index) s.rho_lower += spec.rho_fault_amount;

    Ray up = upper_projection(x, s.rho_upper);
    auto y = up.image.limit();
    double tstar = locate(limit_curve, y);
    s.pi_residual = std::max(distance(lower_point, fam.image.limit()), distance(limit_curve.at(tstar), y));
    s.rho_residual = std::abs(curvilinear_distance(limit_curve, tstar) - s.rho_lower);
    s.in_taper = s.rho_upper <= epsilon_prime(y, lower_point);

    double prev = std::numeric_limits<double>::infinity();
    for (double u : {1.0, 2.0, 4.0, 8.0}) {
      double r = curvilinear_distance(up.image, u);
      if (!(r < prev) || r < 0) s.rho_monotone = false;
      prev = r;
    }

    // Rank of (pi_upper, rho_upper) on real points by central differences.
    s.expected_rank = upper.dimension + 1;
    if (real_point(s.point)) {
      Eigen::MatrixXd jac(2 * n + 1, n);
      for (std::size_t k = 0; k < n; ++k) {
        auto xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        double rp = 0, rm = 0;
        auto lp = upper_projection(xp, rp).image.limit();
        auto lm = upper_projection(xm, rm).image.limit();
        double step = 2 * h.get_d();
        for (std::size_t i = 0; i < n; ++i) {
          jac(i, k) = (lp[i].real() - lm[i].real()) / step;
          jac(n + i, k) = (lp[i].imag() - lm[i].imag()) / step;
        }
        jac(2 * n, k) = (rp - rm) / step;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
      auto sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-6 * std::max(1.0, sv(0))) ++rank;
      s.rank = rank;
    }
    // rho_lower must move along the lower rays.
    if (norm(limit_curve.derivative(t)) < 1e-12) w.violations.push_back("rho_lower is flat at a sample");
    return w;
  };

  std::vector<std::future<SampleWork>> jobs;
  for (std::size_t row = 0; row < rows.size(); ++row)
    for (std::size_t col = 0; col < spec.t_values.size(); ++col)
      jobs.push_back(std::async(std::launch::async, run, row, col));
  for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
    SampleWork w = jobs[idx].get();
    const TubeSample& s = w.sample;
    std::string where = "sample " + std::to_string(idx) + " (u=" + to_string(s.u) + ", t=" + to_string(s.t) + ")";
    rep.max_pi_residual = std::max(rep.max_pi_residual, s.pi_residual);
    rep.max_rho_residual = std::max(rep.max_rho_residual, s.rho_residual);
    if (s.pi_residual > spec.tol) rep.violations.push_back(where + ": pi_lower o pi_upper differs from pi_lower");
    if (s.rho_residual > spec.tol) rep.violations.push_back(where + ": rho_lower o pi_upper differs from rho_lower");
    if (!s.in_taper) rep.violations.push_back(where + ": outside the tapered upper tube");
    if (!s.rho_monotone) {
      rep.rho_monotone = false;
      rep.violations.push_back(where + ": rho_upper is not decreasing along the ray");
    }
    if (s.rank >= 0 && s.rank != s.expected_rank) {
      rep.rank_ok = false;
      rep.violations.push_back(where + ": (pi, rho) has rank " + std::to_string(s.rank));
    }
    for (const auto& v : w.violations) rep.violations.push_back(where + ": " + v);
    rep.samples.push_back(s);
  }
  if (!rep.rho_zero_on_stratum) rep.violations.push_back("rho does not vanish on the stratum");
  return rep;
}

CoverageReport coverage_check(const PolynomialMap& f, const AsymptoticSet& sf, std::size_t trials, std::uint64_t seed) {
  CoverageReport rep;
  std::mt19937_64 rng(seed);
  std::size_t n = f.dim();
  for (std::size_t k = 0; k < trials; ++k) {
    std::vector<Rational> p;
    for (std::size_t i = 0; i < n; ++i) {
      long num = static_cast<long>(rng() % 19) - 9;
      long den = static_cast<long>(rng() % 4) + 1;
      Rational q(num, den);
      q.canonicalize();
      p.push_back(q);
    }
    ++rep.trials;
    rep.points.push_back(p);
    if (sf.contains(p)) {
      ++rep.covered;
      ++rep.via_asymptotic_set;
    } else if (fiber_nonempty(f, p)) {
      ++rep.covered;
      ++rep.via_fiber;
    } else {
      rep.uncovered.push_back(p);
    }
  }
  return rep;
}

}  // namespace facons
