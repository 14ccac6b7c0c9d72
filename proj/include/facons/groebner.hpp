#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "facons/poly.hpp"

namespace facons {

class ResourceLimitExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ResourceBudget {
  std::size_t max_pairs = 200000;
  std::size_t max_basis = 4000;

  /// Defaults overridden by FACONS_RESOURCE_BUDGET, either "N" (pairs) or
  /// "pairs=N,basis=M".
  static ResourceBudget from_env();
};

/// Process-wide budget used when none is passed explicitly.
ResourceBudget& default_budget();

/// Lex, grevlex, or a sequence of blocks compared in turn, each block
/// ordered internally by lex or grevlex.
class MonomialOrder {
public:
  enum class Kind { Lex, Grevlex };

  struct Block {
    std::vector<std::size_t> vars;
    Kind inner = Kind::Grevlex;
  };

  static MonomialOrder lex(std::size_t nvars);
  static MonomialOrder grevlex(std::size_t nvars);
  /// Variables in `first` dominate the rest; both blocks use grevlex.
  static MonomialOrder elimination(std::size_t nvars, const std::vector<std::size_t>& first);
  static MonomialOrder blocks(std::size_t nvars, std::vector<Block> blocks);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Block>& block_list() const { return blocks_; }
  bool is_plain_lex() const { return blocks_.size() == 1 && blocks_[0].inner == Kind::Lex; }

  /// Negative, zero or positive as a < b, a == b, a > b.
  int compare(const Monomial& a, const Monomial& b) const;
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  std::string describe() const;
  bool operator==(const MonomialOrder& o) const { return describe() == o.describe(); }

private:
  std::size_t nvars_ = 0;
  std::vector<Block> blocks_;
};

class Ideal {
public:
  Ideal(ArenaPtr arena, std::vector<Polynomial> generators);
  Ideal(ArenaPtr arena, std::vector<Polynomial> generators, MonomialOrder order);

  const ArenaPtr& arena() const { return arena_; }
  const std::vector<Polynomial>& generators() const { return gens_; }
  const MonomialOrder& order() const { return order_; }
  bool is_zero_ideal() const { return gens_.empty(); }

  Ideal with_order(MonomialOrder order) const;
  Ideal plus(const std::vector<Polynomial>& more) const;

private:
  ArenaPtr arena_;
  std::vector<Polynomial> gens_;
  MonomialOrder order_;
};

class GroebnerBasis {
public:
  GroebnerBasis(ArenaPtr arena, MonomialOrder order, std::vector<Polynomial> basis);

  const ArenaPtr& arena() const { return arena_; }
  const MonomialOrder& order() const { return order_; }
  /// Monic, reduced, sorted by increasing leading monomial.
  const std::vector<Polynomial>& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }
  bool is_unit() const;
  bool contains(const Polynomial& p) const;
  std::vector<Monomial> leading_monomials() const;

private:
  ArenaPtr arena_;
  MonomialOrder order_;
  std::vector<Polynomial> basis_;
};

Monomial leading_monomial(const Polynomial& p, const MonomialOrder& order);
Rational leading_coefficient(const Polynomial& p, const MonomialOrder& order);

Polynomial normal_form(const Polynomial& p, const GroebnerBasis& g);
Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& divisors, const MonomialOrder& order);
Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order);

GroebnerBasis buchberger(const Ideal& ideal, const ResourceBudget& budget);
GroebnerBasis buchberger(const Ideal& ideal);
/// Bypasses the memo table that buchberger() consults.
GroebnerBasis buchberger_uncached(const Ideal& ideal, const ResourceBudget& budget);

/// Generators of I intersected with the subring of variables not in drop.
Ideal eliminate(const Ideal& ideal, const std::vector<std::size_t>& drop);
/// Same, re-expressed over a smaller arena whose names must cover the survivors.
Ideal eliminate_into(const Ideal& ideal, const std::vector<std::size_t>& drop, const ArenaPtr& target);

bool radical_member(const Polynomial& p, const Ideal& ideal);
/// V(I) is contained in V(J).
bool variety_containment(const Ideal& i, const Ideal& j);
/// Krull dimension of V(I); -1 for the unit ideal.
int dimension(const Ideal& ideal);
/// A maximal independent set of variables modulo the leading-term ideal
/// (empty for zero-dimensional ideals); nullopt for the unit ideal.
std::optional<std::vector<std::size_t>> independent_set(const Ideal& ideal);
bool is_unit_ideal(const Ideal& ideal);
/// Same reduced basis under grevlex.
bool ideal_equal(const Ideal& i, const Ideal& j);
Ideal intersect(const Ideal& i, const Ideal& j);

/// Arena extended by fresh variables; names avoid collisions.
ArenaPtr extend_arena(const ArenaPtr& arena, const std::vector<std::string>& extra);

}  // namespace facons
