#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trigsat/ordering.hpp"
#include "trigsat/selection.hpp"
#include "trigsat/term.hpp"

namespace trigsat {

/// Consistent set of ground literals; atoms outside it are undefined.
class Interpretation {
 public:
  Interpretation() = default;
  /// Throws ContractError on a complementary pair or a non-ground literal.
  static Interpretation from_literals(std::span<const Literal> literals);

  /// False, leaving the interpretation unchanged, when ¬l is already present.
  bool add(const Literal& l);
  std::optional<bool> value(const Atom& a) const;
  bool satisfies(const Literal& l) const;
  bool falsifies(const Literal& l) const { return satisfies(l.complement()); }
  bool satisfies(const Clause& c) const;
  /// Every literal false; the empty clause is always falsified.
  bool falsifies(const Clause& c) const;
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  /// Sorted by atom.
  std::vector<Literal> literals() const;

  friend bool operator==(const Interpretation& a, const Interpretation& b) = default;

 private:
  std::map<Atom, bool> values_;
};

/// Absent when `i` satisfies `c`; otherwise `c` without the literals false in
/// `i`. Throws ContractError for a non-ground clause.
std::optional<Clause> filter_clause(const Clause& c, const Interpretation& i);
std::vector<Clause> filter_set(std::span<const Clause> s, const Interpretation& i);

/// Atoms of `t` true, every other atom of `u` false. Throws ContractError
/// when `t` holds a negative literal.
Interpretation int_of(std::span<const Literal> t, std::span<const Literal> u);

/// A ground clause with the positions of its selected literals.
struct SelectedGroundClause {
  Clause clause;
  std::vector<std::size_t> selected;
};

/// F(S) restricted to depth-bounded instances: each instance of a non-ground
/// clause is filtered by `ground_model`; surviving literals keep the
/// selection of the literal they came from.
std::vector<SelectedGroundClause> filtered_instances(std::span<const Clause> theory,
                                                     const SelectionMap& sel,
                                                     const Interpretation& ground_model,
                                                     const Signature& sig, int depth);

struct ProductionRecord {
  Clause clause;
  std::optional<Atom> produced;
};

struct ProductionResult {
  Interpretation model;
  std::vector<ProductionRecord> records;  ///< in processing order
};

/// The production construction: clauses in ascending order, each producing
/// its largest literal when that literal is positive, selected, occurs once
/// and the clause is false in the partial model built so far. With
/// `totalize` unset, incomparable clauses raise Error("ordering not total on
/// ground clauses").
ProductionResult produce_model(std::span<const SelectedGroundClause> fs, const OrderingSpec& o,
                               bool totalize = true);

struct VerificationReport {
  std::vector<Atom> clashes;      ///< atoms defined differently by the two interpretations
  std::vector<Clause> falsified;  ///< first few counterexamples
  std::size_t instances_checked = 0;

  bool ok() const { return clashes.empty() && falsified.empty(); }
};

/// Checks that no ground clause and no instance of depth <= `depth` is false
/// in `combined`.
VerificationReport verify_no_falsified(const Interpretation& combined,
                                       std::span<const Clause> theory,
                                       std::span<const Clause> ground, const Signature& sig,
                                       int depth);
/// As above for the union of two interpretations, reporting clashes first.
VerificationReport verify_no_falsified(const Interpretation& produced,
                                       const Interpretation& ground_model,
                                       std::span<const Clause> theory,
                                       std::span<const Clause> ground, const Signature& sig,
                                       int depth);

struct Certificate {
  std::vector<SelectedGroundClause> filtered;
  ProductionResult production;
  VerificationReport verification;
};

/// Builds F(S) from the solver's ground model, runs the production
/// construction on it and verifies the combined interpretation to `depth`.
Certificate certify(std::span<const Clause> theory, const SelectionMap& sel,
                    std::span<const Clause> ground, std::span<const Literal> ground_model,
                    const OrderingSpec& o, int depth);

}  // namespace trigsat
