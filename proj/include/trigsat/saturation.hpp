#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trigsat/ordering.hpp"
#include "trigsat/selection.hpp"
#include "trigsat/term.hpp"

namespace trigsat {

/// Resolution between a selected positive literal of `left` and a selected
/// negative literal of `right`. The right premise is renamed apart first; the
/// conclusion has canonical variable names. Throws ContractError when either
/// literal has the wrong polarity or is not selected.
std::optional<Clause> resolve(const Clause& left, std::size_t positive_pos, const Clause& right,
                              std::size_t negative_pos, const SelectionMap& sel);

/// Positive factoring on a selected positive literal: one conclusion for each
/// positive clause-mate unifiable with it.
std::vector<Clause> factor(const Clause& c, std::size_t pos, const SelectionMap& sel);

/// Some substitution maps `c` into a sub-multiset of `d`.
bool subsumes(const Clause& c, const Clause& d);
bool is_tautology(const Clause& c);

enum class SaturationOutcome { Saturated, NotSaturated, DerivedBottom, BudgetExceeded };

std::string_view outcome_name(SaturationOutcome o);

struct Inference {
  enum class Rule { Resolution, Factoring } rule = Rule::Resolution;
  ClauseId left = 0;
  std::size_t left_pos = 0;
  ClauseId right = 0;  ///< unused for factoring
  std::size_t right_pos = 0;
  Clause conclusion;

  std::string to_string() const;
};

struct SaturationBudget {
  std::size_t max_clauses = 10000;
  double timeout_seconds = 60.0;
};

struct SaturationReport {
  SaturationOutcome outcome = SaturationOutcome::Saturated;
  /// Non-ground clauses after saturation (or the checked set).
  std::vector<Clause> clauses;
  /// Ground clauses given on input plus ground conclusions.
  std::vector<Clause> ground;
  SelectionMap selection;
  std::size_t resolutions = 0;
  std::size_t factorings = 0;
  std::size_t tautologies = 0;
  std::size_t forward_subsumed = 0;
  std::size_t backward_subsumed = 0;
  /// Check mode: inferences whose conclusion is neither a tautology nor subsumed.
  std::vector<Inference> violations;
  std::string message;
};

struct SaturationOptions {
  SaturationBudget budget;
  /// Strategy for derived clauses; Annotated means "first strategy that works".
  SelectionStrategy derived = SelectionStrategy::Annotated;
};

/// Given-clause saturation by Resolution and Factoring with tautology and
/// subsumption deletion. Ground input clauses only serve as subsumers.
/// Throws ContractError for an invalid selection or for a derived clause the
/// strategy cannot select in.
SaturationReport saturate(std::span<const Clause> clauses, const SelectionMap& sel,
                          const OrderingSpec& o, const SaturationOptions& options = {});

/// Enumerates every Resolution and Factoring inference among the non-ground
/// clauses and reports those whose conclusion is neither a tautology nor
/// subsumed by a clause of the set.
SaturationReport check_saturated(std::span<const Clause> clauses, const SelectionMap& sel,
                                 const OrderingSpec& o);

/// Throws ContractError naming the first non-ground clause whose selection is
/// missing or invalid.
void require_valid_selection(std::span<const Clause> clauses, const SelectionMap& sel,
                             const OrderingSpec& o);

}  // namespace trigsat
