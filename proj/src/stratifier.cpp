#include "facons/stratifier.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace facons {

namespace {

constexpr std::size_t kMaxComponents = 12;

Ideal reduced(const Ideal& i) {
  std::size_t n = i.arena()->size();
  return Ideal(i.arena(), buchberger(i.with_order(MonomialOrder::grevlex(n))).basis());
}

// Reduced equations; exclusions intersected with the closed part, with
// empty and redundant ones dropped.
LocallyClosed canonical(const LocallyClosed& s) {
  LocallyClosed out(reduced(s.equations));
  std::vector<Ideal> ex;
  for (const auto& h : s.exclusions) {
    Ideal e = reduced(out.equations.plus(h.generators()));
    if (is_unit_ideal(e)) continue;
    ex.push_back(e);
  }
  std::vector<bool> drop(ex.size(), false);
  for (std::size_t a = 0; a < ex.size(); ++a)
    for (std::size_t b = 0; b < ex.size(); ++b) {
      if (a == b || drop[b]) continue;
      // V(ex[a]) inside V(ex[b]) makes a redundant; keep the first of equals.
      if (variety_containment(ex[a], ex[b]) && (!variety_containment(ex[b], ex[a]) || b < a)) {
        drop[a] = true;
        break;
      }
    }
  for (std::size_t a = 0; a < ex.size(); ++a)
    if (!drop[a]) out.exclusions.push_back(ex[a]);
  std::sort(out.exclusions.begin(), out.exclusions.end(),
            [](const Ideal& x, const Ideal& y) { return ideal_to_string(x) < ideal_to_string(y); });
  return out;
}

}  // namespace

FaconPartition partition_by_facons(FaconEngine& engine, const AsymptoticSet& sf) {
  const auto& target = engine.map().target();
  std::size_t m = sf.components.size();
  if (m > kMaxComponents) throw ResourceLimitExceeded("too many asymptotic components for the arrangement");
  FaconPartition out;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<Polynomial> eq;
    std::vector<Ideal> ex;
    std::vector<std::size_t> comps;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask & (1u << k)) {
        eq.push_back(sf.components[k].equation);
        comps.push_back(k);
      } else {
        ex.push_back(Ideal(target, {sf.components[k].equation}));
      }
    }
    LocallyClosed set(Ideal(target, eq), ex);
    if (set.is_empty()) continue;
    set = canonical(set);
    int dim = set.dimension();
    out.cells.push_back(Cell{set, comps, dim, engine.analyze(set)});
  }
  std::stable_sort(out.cells.begin(), out.cells.end(), [](const Cell& a, const Cell& b) {
    if (a.dimension != b.dimension) return a.dimension > b.dimension;
    return a.components < b.components;
  });
  for (std::size_t c = 0; c < out.cells.size(); ++c) {
    auto xi = out.cells[c].facons.facons();
    auto it = std::find_if(out.classes.begin(), out.classes.end(), [&](const PartitionClass& p) { return p.xi == xi; });
    if (it == out.classes.end()) out.classes.push_back(PartitionClass{{c}, xi});
    else it->cells.push_back(c);
  }
  return out;
}

std::string Stratum::facon_string() const {
  if (facon_set.empty()) return "{}";
  std::string s = "{";
  for (std::size_t k = 0; k < facon_set.size(); ++k) {
    if (k) s += ", ";
    s += facon_set[k].to_string();
  }
  return s + "}";
}

std::string Stratum::label() const { return set.to_string(); }

bool Stratification::complete() const {
  return std::none_of(strata.begin(), strata.end(), [](const Stratum& s) { return s.incomplete; });
}

Stratification star_stratify(const FaconPartition& partition, const ArenaPtr& target, int weight_box) {
  Stratification out;
  out.target = target;
  out.weight_box = weight_box;
  for (std::size_t c = 0; c < partition.cells.size(); ++c) {
    const Cell& cell = partition.cells[c];
    auto xi = cell.facons.facons();
    if (xi.empty()) {
      out.strata.push_back(Stratum{"", cell.set, cell.dimension, {}, true, c});
      continue;
    }
    // Common refinement of the partitions defined by each facon.
    std::vector<std::pair<LocallyClosed, std::vector<Facon>>> pieces{{cell.set, {}}};
    for (const auto& label : xi) {
      auto groups = star_refine(cell.facons, label);
      std::vector<std::pair<LocallyClosed, std::vector<Facon>>> next;
      for (const auto& [piece, facons] : pieces)
        for (std::size_t level = 0; level < groups.size(); ++level) {
          LocallyClosed q = piece.intersect(groups[level].set);
          if (q.is_empty()) continue;
          auto fs = facons;
          fs.push_back(Facon(label.diverging, label.fixed_limit, static_cast<int>(level)));
          next.emplace_back(std::move(q), std::move(fs));
        }
      pieces = std::move(next);
    }
    for (auto& [piece, facons] : pieces) {
      LocallyClosed set = canonical(piece);
      int dim = set.dimension();
      std::sort(facons.begin(), facons.end());
      out.strata.push_back(Stratum{"", std::move(set), dim, std::move(facons), false, c});
    }
  }
  std::stable_sort(out.strata.begin(), out.strata.end(), [](const Stratum& a, const Stratum& b) {
    if (a.dimension != b.dimension) return a.dimension > b.dimension;
    return a.label() < b.label();
  });
  for (std::size_t k = 0; k < out.strata.size(); ++k) out.strata[k].name = "S" + std::to_string(k + 1);
  out.frontier_edges = frontier_edges(out.strata);
  return out;
}

Stratification star_stratify(FaconEngine& engine, const AsymptoticSet& sf) {
  return star_stratify(partition_by_facons(engine, sf), engine.map().target(), engine.weight_box());
}

bool facon_less(const Facon& k1, const Facon& k2) {
  auto superset = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::includes(a.begin(), a.end(), b.begin(), b.end());
  };
  bool same_i = k1.diverging == k2.diverging;
  bool same_j = k1.fixed_limit == k2.fixed_limit;
  if (same_i && same_j) return k1.star_level > k2.star_level;
  if (k1.star_level < k2.star_level) return false;
  if (!same_i && superset(k1.diverging, k2.diverging) && superset(k1.fixed_limit, k2.fixed_limit)) return true;
  if (same_i && !same_j && superset(k1.fixed_limit, k2.fixed_limit)) return true;
  return false;
}

bool point_less(const Stratum& a, const Stratum& b) {
  for (const auto& kb : b.facon_set) {
    bool found = std::any_of(a.facon_set.begin(), a.facon_set.end(),
                             [&](const Facon& ka) { return ka == kb || facon_less(ka, kb); });
    if (!found) return false;
  }
  return true;
}

std::size_t order_of(const Stratum& s) { return s.facon_set.size(); }

bool closure_contains(const Stratum& a, const Stratum& b) { return variety_containment(a.equations(), b.equations()); }

std::vector<std::pair<std::size_t, std::size_t>> frontier_edges(const std::vector<Stratum>& strata) {
  std::size_t n = strata.size();
  std::vector<std::vector<bool>> in(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) in[a][b] = closure_contains(strata[a], strata[b]) && !closure_contains(strata[b], strata[a]);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!in[a][b]) continue;
      bool cover = true;
      for (std::size_t r = 0; r < n && cover; ++r)
        if (r != a && r != b && in[a][r] && in[r][b]) cover = false;
      if (cover) edges.emplace_back(a, b);
    }
  return edges;
}

FrontierReport check_frontier(const Stratification& s) {
  FrontierReport rep;
  const auto& st = s.strata;
  for (std::size_t a = 0; a < st.size(); ++a)
    for (std::size_t b = 0; b < st.size(); ++b) {
      if (a == b) continue;
      bool prec = point_less(st[a], st[b]);
      bool cont = closure_contains(st[a], st[b]);
      rep.pairs.push_back({a, b, prec, cont});
      if (prec != cont) {
        ++rep.equivalence_violations;
        rep.violations.push_back(st[a].name + (prec ? " precedes " : " does not precede ") + st[b].name + " but is " +
                                 (cont ? "" : "not ") + "in its closure");
      }
      if (prec && order_of(st[a]) < order_of(st[b])) {
        ++rep.monotonicity_violations;
        rep.violations.push_back(st[a].name + " precedes " + st[b].name + " with a smaller order");
      }
      if (!cont) {
        LocallyClosed meet(st[a].equations().plus(st[b].equations().generators()), st[a].set.exclusions);
        if (!meet.is_empty()) {
          ++rep.frontier_violations;
          rep.violations.push_back(st[a].name + " meets the closure of " + st[b].name + " without lying in it");
        }
      }
    }
  for (const auto& [lo, up] : s.frontier_edges)
    if (st[lo].dimension >= st[up].dimension) {
      ++rep.dimension_violations;
      rep.violations.push_back("edge " + st[lo].name + " -> " + st[up].name + " does not raise the dimension");
    }
  return rep;
}

std::string render_dot(const Stratification& s) {
  std::ostringstream os;
  os << "digraph stratification {\n  rankdir=BT;\n";
  for (const auto& st : s.strata) {
    std::string label = st.name + " | " + std::to_string(st.dimension) + " | " + st.facon_string();
    std::string esc;
    for (char c : label) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    os << "  " << st.name << " [shape=record, label=\"" << esc << "\"];\n";
  }
  for (const auto& [lo, up] : s.frontier_edges) os << "  " << s.strata[lo].name << " -> " << s.strata[up].name << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace facons
