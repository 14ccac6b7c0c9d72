#pragma once

#include <string>
#include <utility>
#include <vector>

#include "facons/asymptotic_set.hpp"
#include "facons/facon.hpp"
#include "facons/locally_closed.hpp"

namespace facons {

/// A cell of the component arrangement: points on exactly the components
/// listed in `components`.
struct Cell {
  LocallyClosed set;
  std::vector<std::size_t> components;
  int dimension = -1;
  CellFacons facons;
};

struct PartitionClass {
  std::vector<std::size_t> cells;  // indices into FaconPartition::cells
  std::vector<Facon> xi;
};

struct FaconPartition {
  std::vector<Cell> cells;
  std::vector<PartitionClass> classes;
};

FaconPartition partition_by_facons(FaconEngine& engine, const AsymptoticSet& sf);

struct Stratum {
  std::string name;
  LocallyClosed set;
  int dimension = -1;
  std::vector<Facon> facon_set;  // with star levels
  bool incomplete = false;      // no facon found within the weight box
  std::size_t cell = 0;

  const Ideal& equations() const { return set.equations; }
  std::string label() const;
  std::string facon_string() const;
};

struct Stratification {
  ArenaPtr target;
  std::vector<Stratum> strata;
  std::vector<std::pair<std::size_t, std::size_t>> frontier_edges;  // (lower, upper)
  int weight_box = 0;

  bool complete() const;
};

Stratification star_stratify(FaconEngine& engine, const AsymptoticSet& sf);
Stratification star_stratify(const FaconPartition& partition, const ArenaPtr& target, int weight_box);

/// Cases 1 and 2 compare the index sets and require the star level of k1
/// to be at least that of k2; case 3 is the same label with a strictly
/// higher star level.
bool facon_less(const Facon& k1, const Facon& k2);
bool point_less(const Stratum& a, const Stratum& b);
std::size_t order_of(const Stratum& s);

/// V(equations(a)) lies in V(equations(b)).
bool closure_contains(const Stratum& a, const Stratum& b);

/// Hasse diagram of closure containment.
std::vector<std::pair<std::size_t, std::size_t>> frontier_edges(const std::vector<Stratum>& strata);

struct PairCheck {
  std::size_t lower, upper;
  bool precedes;
  bool contained;
};

struct FrontierReport {
  std::vector<PairCheck> pairs;
  std::vector<std::string> violations;
  std::size_t equivalence_violations = 0;
  std::size_t monotonicity_violations = 0;
  std::size_t frontier_violations = 0;
  std::size_t dimension_violations = 0;

  bool ok() const { return violations.empty(); }
};

FrontierReport check_frontier(const Stratification& s);

std::string render_dot(const Stratification& s);

}  // namespace facons
