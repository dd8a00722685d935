#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trigsat/term.hpp"

namespace trigsat {

enum class Comparison { Less, Greater, Equal, Incomparable };

std::string_view comparison_name(Comparison c);
Comparison reverse(Comparison c);

enum class OrderingKind {
  /// Knuth-Bendix style: weight, then predicate precedence, then arguments.
  WeightPrecedence,
  /// Argument-wise subterm product; identical argument tuples fall back to
  /// predicate precedence.
  SubtermProduct,
};

std::string_view ordering_name(OrderingKind kind);

/// Stable, well-founded atom ordering. Literals and clauses are compared
/// through the extensions below.
struct OrderingSpec {
  OrderingKind kind = OrderingKind::WeightPrecedence;
  /// Predicate names, highest first. Unlisted predicates rank below listed
  /// ones and are ordered by name among themselves.
  std::vector<std::string> precedence;
  /// Symbol weights (functions and predicates); unlisted symbols weigh 1.
  std::map<std::string, int> weights;
  /// Weight-precedence only: compare predicates by precedence before weight.
  /// Total on ground atoms but not omega-isomorphic.
  bool precedence_dominant = false;

  int weight(const std::string& symbol) const;
  /// <0, 0, >0 as predicate p is below, equal to, above predicate q.
  int compare_predicates(const std::string& p, const std::string& q) const;
  /// Whether every ground atom has finitely many smaller ground atoms.
  bool omega_isomorphic() const;
  std::string describe() const;
};

/// Parses "p1>p2>p3" into a highest-first list.
std::vector<std::string> parse_precedence(std::string_view text);

Comparison compare_atoms(const OrderingSpec& o, const Atom& a, const Atom& b);
/// Atoms first; a negative literal is above the positive literal of its atom.
Comparison compare_literals(const OrderingSpec& o, const Literal& a, const Literal& b);
/// Multiset extension of compare_literals.
Comparison compare_clauses(const OrderingSpec& o, const Clause& a, const Clause& b);

/// Total ordering on ground atoms extending compare_atoms. Never returns
/// Incomparable for ground arguments.
Comparison compare_ground_atoms_total(const OrderingSpec& o, const Atom& a, const Atom& b);
Comparison compare_ground_literals_total(const OrderingSpec& o, const Literal& a,
                                         const Literal& b);
Comparison compare_ground_clauses_total(const OrderingSpec& o, const Clause& a, const Clause& b);

/// Positions of literals with no strictly greater clause-mate. Throws
/// ContractError on the empty clause.
std::vector<std::size_t> maximal_literals(const OrderingSpec& o, const Clause& c);
/// Maximal literals among `positions` only.
std::vector<std::size_t> maximal_among(const OrderingSpec& o, const Clause& c,
                                       std::span<const std::size_t> positions);
/// Position of the literal strictly greater than every other literal.
std::optional<std::size_t> maximum_literal(const OrderingSpec& o, const Clause& c);

}  // namespace trigsat
