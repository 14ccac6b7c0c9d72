#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "facons/groebner.hpp"
#include "facons/laurent.hpp"
#include "facons/locally_closed.hpp"
#include "facons/poly.hpp"

namespace facons {

/// (I)[J] with a star level. Indices are 0-based; printing is 1-based.
struct Facon {
  std::vector<std::size_t> diverging;
  std::vector<std::size_t> fixed_limit;
  int star_level = 0;

  Facon() = default;
  Facon(std::vector<std::size_t> i, std::vector<std::size_t> j, int star = 0);

  Facon base() const { return Facon(diverging, fixed_limit, 0); }
  bool same_label(const Facon& o) const { return diverging == o.diverging && fixed_limit == o.fixed_limit; }
  /// "(1,3)[2]" or "(2)[1]^{1*}".
  std::string to_string() const;

  auto operator<=>(const Facon&) const = default;
};

class NoFiniteLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Degrees |w_j| over I and J, kept in primitive form.
class PQUple {
public:
  PQUple() = default;
  explicit PQUple(std::map<std::size_t, unsigned> degrees);
  static PQUple from_weights(const Facon& facon, const std::vector<int>& weights);

  const std::map<std::size_t, unsigned>& degrees() const { return degrees_; }
  PQUple primitive() const;
  std::string to_string() const;
  bool operator==(const PQUple& o) const { return degrees_ == o.degrees_; }

private:
  std::map<std::size_t, unsigned> degrees_;
};

/// Proportional by a positive rational. Throws when the index sets differ.
bool uple_equivalent(const PQUple& a, const PQUple& b);

enum class Category { Diverging, FixedLimit, PointDependent };

/// Single-term ansatz x_j = b_j + c_j u^{w_j} (b_j dropped for w_j > 0,
/// c_j dropped for w_j = 0). The last symbol z carries z * prod(c) = 1.
CurveAnsatz weight_ansatz(const std::vector<int>& weights);

struct LimitAnalysis {
  CurveAnsatz ansatz;
  /// Coefficients of positive powers of u together with the side equations.
  Ideal constraint_ideal;
  /// u^0 coefficients of F o gamma, reduced modulo the constraints.
  std::vector<Polynomial> limit_map;
  std::vector<Category> categories;
};

LimitAnalysis limit_constraints(const PolynomialMap& f, const CurveAnsatz& ansatz);

/// Categories relative to the constraint ideal alone, or with the limit
/// additionally forced into `cell`.
Facon classify_coordinates(LimitAnalysis& analysis, const PolynomialMap& f);
Facon classify_coordinates(LimitAnalysis& analysis, const PolynomialMap& f, const LocallyClosed& cell);

/// Closure of the image of the limit map over V(constraints + extra), as
/// an ideal in the target arena.
Ideal limit_image(const LimitAnalysis& analysis, const PolynomialMap& f, const std::vector<Polynomial>& extra = {});

/// One weight vector whose curves reach `cell`.
struct WeightClass {
  std::vector<int> weights;
  Facon facon;
  PQUple uple;
  Ideal image;  // closure of the reachable limits inside the cell
  int image_dim = -1;
  bool generic = false;  // reaches a dense subset of the cell
};

struct CellFacons {
  LocallyClosed cell;
  int dimension = -1;
  std::vector<WeightClass> classes;  // every class meeting the cell
  int weight_box = 0;

  /// Labels of generic classes, sorted.
  std::vector<Facon> facons() const;
  /// Representative class for a label: smallest |w|_1, then lexicographic.
  const WeightClass* witness(const Facon& label) const;
  bool empty() const { return facons().empty(); }
};

/// Enumerates primitive weight vectors in [-W, W]^n with no zero entry and
/// at least one positive entry. Per-weight expansions are cached.
class FaconEngine {
public:
  FaconEngine(PolynomialMap f, int weight_box = 3);

  const PolynomialMap& map() const { return f_; }
  int weight_box() const { return box_; }
  const std::vector<std::vector<int>>& weight_vectors() const { return weights_; }

  CellFacons analyze(const LocallyClosed& cell);

private:
  struct WeightData {
    std::optional<LimitAnalysis> analysis;  // empty when no finite limit
    std::optional<Ideal> image;             // closure of all limits
  };
  const WeightData& data(std::size_t k);

  PolynomialMap f_;
  int box_;
  std::vector<std::vector<int>> weights_;
  std::vector<std::unique_ptr<WeightData>> cache_;
  std::mutex mu_;
};

std::vector<std::vector<int>> enumerate_weights(std::size_t n, int box);

/// Labels of the generic classes on a cell.
CellFacons facons_of_component(const PolynomialMap& f, const LocallyClosed& cell, int weight_box = 3);

struct StarGroup {
  Ideal closure;  // V(closure) is the union of the group's images
  int dimension = -1;
  std::vector<PQUple> classes;
  std::vector<std::vector<int>> weights;
  LocallyClosed set;  // closure minus later groups, within the cell
};

/// Groups the classes of one label by image closure, in order of
/// decreasing dimension; group i carries star level i.
std::vector<StarGroup> star_refine(const CellFacons& cell, const Facon& label);

}  // namespace facons
