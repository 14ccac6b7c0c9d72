#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "facons/asymptotic_set.hpp"
#include "facons/facon.hpp"
#include "facons/laurent.hpp"
#include "facons/stratifier.hpp"

namespace facons {

class RayError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DivergentIntegral : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Curve u -> sum_k c_k u^k in C^n, k <= some bound. The exact form is
/// kept whenever all coefficients are rational.
struct ParametricCurve {
  std::vector<std::map<int, Complex>> numeric;
  std::optional<std::vector<std::map<int, Rational>>> exact;

  static ParametricCurve from_exact(std::vector<std::map<int, Rational>> coeffs);
  static ParametricCurve from_numeric(std::vector<std::map<int, Complex>> coeffs);

  std::size_t dim() const { return numeric.size(); }
  int max_exponent() const;
  std::vector<Complex> at(double u) const;
  std::vector<Rational> at_exact(const Rational& u) const;
  std::vector<Complex> derivative(double u) const;
  /// Constant terms; meaningful when max_exponent() <= 0.
  std::vector<Complex> limit() const;
  std::optional<std::vector<Rational>> limit_exact() const;
  /// "(1 + 1/u, -2 + 1/u, u^2)"; exact curves only.
  std::string to_string(const std::string& param = "u") const;
};

struct RayTemplate {
  Facon facon;
  CurveAnsatz ansatz;
};

/// "(3)[1,2]: 1 + p*v; -2 + q*v; l*m*u^2 | p*l - 1; q*m - 1". Expressions
/// are polynomials in the template symbols, u and v = 1/u; the part after
/// '|' lists side equations on the symbols.
RayTemplate parse_ray_template(const std::string& text, std::size_t n);
Facon parse_facon(const std::string& text);

/// x_j = c_j u^{w_j} on diverging coordinates, b_j + c_j u^{w_j} on the
/// fixed-limit ones and a free constant b_j elsewhere.
RayTemplate infer_template(const Facon& facon, const std::vector<int>& weights);

struct Ray {
  Facon facon;
  std::string stratum;
  CurveAnsatz ansatz;
  std::vector<Rational> start;
  std::vector<Complex> parameters;
  std::optional<std::vector<Rational>> exact_parameters;
  ParametricCurve curve;  // gamma
  ParametricCurve image;  // F o gamma
  bool non_isolated = false;

  bool exact() const { return exact_parameters.has_value(); }
};

/// Solves F(gamma(1)) = a, no positive powers of u in F o gamma, and the
/// stratum equations on the limit. Among several solutions the one whose
/// limit is nearest to a wins, exact ones first.
Ray solve_ray(const PolynomialMap& f, const std::vector<Rational>& a, const Stratum& stratum, const RayTemplate& tmpl,
              const AsymptoticSet* sf = nullptr);

/// Arc length of the curve from u_value to u = infinity.
double curvilinear_distance(const ParametricCurve& curve, double u_value);
double curvilinear_distance(const Ray& ray, double u_value);

ComplexPoint project_pi(const Ray& ray);

ParametricCurve blend_rays(const std::vector<Ray>& rays, const std::vector<Rational>& s);

struct TubeSpec {
  std::vector<Rational> start;
  std::optional<RayTemplate> lower_template;
  std::optional<RayTemplate> upper_template;
  std::vector<Rational> t_values{1, 2, 4, 8, 16};
  std::vector<Rational> u_factors{1, 2, 4, 8, 16};
  double eps0 = 1.0;
  double tol = 1e-9;
  double fd_step = 1e-5;
  /// Negative control: add `rho_fault_amount` to rho_lower at one sample.
  std::optional<std::size_t> rho_fault_sample;
  double rho_fault_amount = 1e-3;
};

struct TubeSample {
  Rational u, t;
  std::vector<Complex> point;
  double pi_residual = 0;
  double rho_residual = 0;
  double rho_upper = 0;
  double rho_lower = 0;
  bool in_taper = false;
  bool rho_monotone = true;
  int rank = -1;
  int expected_rank = -1;
};

struct TubeReport {
  std::string lower, upper;
  std::vector<TubeSample> samples;
  double max_pi_residual = 0;
  double max_rho_residual = 0;
  bool rank_ok = true;
  bool rho_monotone = true;
  bool rho_zero_on_stratum = true;
  bool limit_curve_exact = false;
  Rational taper_base;  // smallest u of the sampled family
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

TubeReport verify_thom_mather(const PolynomialMap& f, const Stratum& lower, const Stratum& upper, const TubeSpec& spec,
                              const AsymptoticSet* sf = nullptr);

struct CoverageReport {
  std::size_t trials = 0;
  std::size_t covered = 0;
  std::size_t via_asymptotic_set = 0;
  std::size_t via_fiber = 0;
  std::vector<std::vector<Rational>> points;
  std::vector<std::vector<Rational>> uncovered;
};

CoverageReport coverage_check(const PolynomialMap& f, const AsymptoticSet& sf, std::size_t trials, std::uint64_t seed);

}  // namespace facons
