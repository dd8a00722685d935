#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trigsat {

/// Immutable first-order term. Variables and function applications share one
/// node type; constants are arity-0 applications. Copies share structure.
class Term {
 public:
  static Term variable(std::string name);
  static Term function(std::string symbol, std::vector<Term> args = {});

  bool is_variable() const;
  bool is_ground() const;
  /// Variable name or function symbol.
  const std::string& symbol() const;
  std::span<const Term> args() const;
  std::size_t arity() const { return args().size(); }
  /// 0 for variables and constants, 1 + max child depth otherwise.
  int depth() const;
  /// Number of symbol occurrences, variables included.
  std::size_t size() const;
  std::size_t hash() const;

  bool contains_variable(std::string_view name) const;
  /// True when `t` occurs in this term (this term included).
  bool has_subterm(const Term& t) const;
  void collect_variables(std::set<std::string>& out) const;
  /// Number of occurrences of each variable.
  void count_variables(std::map<std::string, int>& out) const;

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Predicate applied to terms.
class Atom {
 public:
  Atom(std::string predicate, std::vector<Term> args);

  const std::string& predicate() const { return app_.symbol(); }
  std::span<const Term> args() const { return app_.args(); }
  std::size_t arity() const { return app_.arity(); }
  bool is_ground() const { return app_.is_ground(); }
  std::size_t size() const { return app_.size(); }
  std::size_t hash() const { return app_.hash(); }
  void collect_variables(std::set<std::string>& out) const { app_.collect_variables(out); }
  /// The atom viewed as a term whose head is the predicate symbol.
  const Term& as_term() const { return app_; }
  std::string to_string() const { return app_.to_string(); }

  friend bool operator==(const Atom& a, const Atom& b) { return a.app_ == b.app_; }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    return a.app_ <=> b.app_;
  }

 private:
  explicit Atom(Term app) : app_(std::move(app)) {}
  friend class Substitution;
  Term app_;
};

struct Literal {
  Atom atom;
  bool positive = true;

  bool is_negative() const { return !positive; }
  Literal complement() const { return Literal{atom, !positive}; }
  bool is_ground() const { return atom.is_ground(); }
  std::string to_string() const { return (positive ? "" : "~") + atom.to_string(); }

  friend bool operator==(const Literal& a, const Literal& b) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.atom <=> b.atom; c != 0) return c;
    return a.positive <=> b.positive;
  }
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const { return a.hash(); }
};

using ClauseId = std::uint32_t;

enum class Origin { InputGround, InputNonGround, Resolvent, Factor, Instance, Learned };

std::string_view origin_name(Origin origin);

/// Multiset of literals. The empty clause denotes falsity.
struct Clause {
  std::vector<Literal> literals;
  ClauseId id = 0;
  Origin origin = Origin::InputNonGround;

  std::size_t size() const { return literals.size(); }
  bool empty() const { return literals.empty(); }
  bool is_ground() const;
  bool is_horn() const;
  std::set<std::string> variables() const;
  /// `[]` for the empty clause, otherwise literals joined by " | ".
  std::string to_string() const;
};

/// Multiset equality of the literal lists; ids and origins are ignored.
bool same_literals(const Clause& a, const Clause& b);
std::set<std::string> variables_of(std::span<const Literal> literals);

/// Finite map from variables to terms. Bindings of a variable to itself are
/// never stored.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }
  const Term* lookup(const std::string& var) const;
  void bind(const std::string& var, Term t);
  std::set<std::string> domain() const;

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  Literal apply(const Literal& l) const;
  Clause apply(const Clause& c) const;

  /// The substitution mapping X to (X this) other, i.e. this first.
  Substitution compose(const Substitution& other) const;

  std::string to_string() const;
  friend bool operator==(const Substitution& a, const Substitution& b) = default;

 private:
  std::map<std::string, Term> bindings_;
};

/// Most general unifier with occurs check; the result is idempotent.
std::optional<Substitution> unify(const Atom& a, const Atom& b);
std::optional<Substitution> unify_terms(const Term& a, const Term& b);

/// Extends `theta` so that pattern·theta == target. Variables of `target` are
/// treated as rigid constants. On failure `theta` may hold partial bindings.
bool extend_match(const Term& pattern, const Term& target, Substitution& theta);
bool extend_match(const Literal& pattern, const Literal& target, Substitution& theta);

/// Matcher for a literal onto a ground literal. Throws ContractError if the
/// target is not ground.
std::optional<Substitution> match_onto(const Literal& pattern, const Literal& target);

Clause apply(const Substitution& s, const Clause& c);

/// Appends `suffix` to every variable of the clause.
Clause rename_variables(const Clause& c, std::string_view suffix);
/// Renames variables to X1, X2, ... in order of first occurrence.
Clause canonical_variables(const Clause& c);

/// Function and predicate symbols with their arities.
class Signature {
 public:
  /// Harvests symbols from the clauses. A fresh constant is added when the
  /// clauses contain none, so that the Herbrand universe is never empty.
  static Signature harvest(std::span<const Clause> clauses);

  void add_function(const std::string& name, std::size_t arity);
  void add_predicate(const std::string& name, std::size_t arity);
  const std::map<std::string, std::size_t>& functions() const { return functions_; }
  const std::map<std::string, std::size_t>& predicates() const { return predicates_; }
  bool has_constant() const;
  std::optional<std::string> injected_constant() const { return injected_; }

  /// All ground terms of depth <= max_depth, shallow terms first, then by
  /// symbol name and argument order. Throws Error without constants.
  std::vector<Term> ground_terms(int max_depth) const;

 private:
  std::map<std::string, std::size_t> functions_;
  std::map<std::string, std::size_t> predicates_;
  std::optional<std::string> injected_;
};

/// Every instance binding each variable to a ground term of depth <= depth.
/// Variables are enumerated in name order; the order is deterministic.
std::vector<Clause> enumerate_ground_instances(const Clause& c, const Signature& sig, int depth);

}  // namespace trigsat
