#include "facons/locally_closed.hpp"

#include <algorithm>

namespace facons {

std::vector<Polynomial> union_equations(const std::vector<Ideal>& ideals, const ArenaPtr& arena) {
  std::vector<Polynomial> acc{Polynomial(arena, 1)};
  for (const auto& h : ideals) {
    std::vector<Polynomial> next;
    for (const auto& a : acc)
      for (const auto& g : h.generators()) next.push_back(a * g);
    acc = std::move(next);
    if (acc.empty()) break;  // the zero ideal contributes the whole space
  }
  return acc;
}

namespace {

bool covered(const Ideal& closed, const std::vector<Ideal>& exclusions) {
  if (exclusions.empty()) return is_unit_ideal(closed);
  bool any_zero = std::any_of(exclusions.begin(), exclusions.end(), [](const Ideal& h) { return h.is_zero_ideal(); });
  if (any_zero) return true;
  for (const auto& p : union_equations(exclusions, closed.arena()))
    if (!radical_member(p, closed)) return false;
  return true;
}

}  // namespace

bool LocallyClosed::is_empty() const { return covered(equations, exclusions); }

bool LocallyClosed::meets(const Ideal& closure) const {
  Ideal both = equations.plus(closure.generators());
  return !covered(both, exclusions);
}

bool LocallyClosed::contains_point(std::span<const Rational> point) const {
  for (const auto& g : equations.generators())
    if (g.evaluate_exact(point) != 0) return false;
  for (const auto& h : exclusions) {
    bool inside = true;
    for (const auto& g : h.generators())
      if (g.evaluate_exact(point) != 0) inside = false;
    if (inside) return false;
  }
  return true;
}

LocallyClosed LocallyClosed::intersect(const LocallyClosed& other) const {
  LocallyClosed out(equations.plus(other.equations.generators()), exclusions);
  out.exclusions.insert(out.exclusions.end(), other.exclusions.begin(), other.exclusions.end());
  return out;
}

int LocallyClosed::dimension() const { return facons::dimension(equations); }

std::string ideal_to_string(const Ideal& ideal) {
  if (ideal.generators().empty()) return "<0>";
  std::string s = "<";
  for (std::size_t k = 0; k < ideal.generators().size(); ++k) {
    if (k) s += ", ";
    s += ideal.generators()[k].to_string();
  }
  return s + ">";
}

std::string LocallyClosed::to_string() const {
  std::string s = "V" + ideal_to_string(equations);
  for (const auto& h : exclusions) s += " \\ V" + ideal_to_string(h);
  return s;
}

}  // namespace facons
