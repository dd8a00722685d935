#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trigsat/ordering.hpp"
#include "trigsat/selection.hpp"
#include "trigsat/term.hpp"

namespace trigsat {

/// Settings carried by `%! key value` lines of a problem file.
struct ProblemOptions {
  std::optional<OrderingKind> order;
  std::vector<std::string> precedence;
  bool precedence_dominant = false;
  std::map<std::string, int> weights;
  std::optional<SelectionStrategy> select;

  /// Weight-precedence unless the file says otherwise.
  OrderingSpec ordering() const;
};

/// Clauses in file order with ids 1, 2, ...; `selection` holds the `*`
/// markers of non-ground clauses that carry any.
struct Problem {
  std::vector<Clause> clauses;
  SelectionMap selection;
  ProblemOptions options;

  std::vector<Clause> theory() const;  ///< non-ground clauses
  std::vector<Clause> ground() const;
  Signature signature() const { return Signature::harvest(clauses); }
};

/// One clause per line: literals separated by `|`, `~` for negation, `*`
/// marking a selected literal, `[]` for the empty clause, `%` comments.
/// Identifiers starting with an uppercase letter or `_` are variables.
/// Throws ParseError with line and column.
Problem parse_problem(std::string_view text);

/// Parses a single clause line (no options, no comments).
Clause parse_clause(std::string_view text);

/// A model file: one ground literal per line, `%` comments allowed.
std::vector<Literal> parse_literals(std::string_view text);

/// Inverse of parse_clause; positions in `selected` get a `*` marker.
std::string print_clause(const Clause& c, const std::vector<std::size_t>& selected = {});
/// Inverse of parse_problem up to comments and whitespace.
std::string print_problem(const Problem& p);

/// Embedded appendix clause sets: "subsumption" (24 clauses) and "settheory"
/// (17 clauses). Throws Error for any other name.
Problem load_corpus(std::string_view name);

}  // namespace trigsat
