#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trigsat/engine.hpp"
#include "trigsat/model.hpp"
#include "trigsat/problem.hpp"
#include "trigsat/saturation.hpp"

namespace trigsat {

/// Command-line overrides; unset fields fall back to the problem's options.
struct SolveOptions {
  std::optional<OrderingKind> order;
  std::optional<std::vector<std::string>> precedence;
  std::optional<bool> precedence_dominant;
  std::optional<SelectionStrategy> select;
  EngineOptions engine;
  SaturationBudget saturation;
  /// Run the engine even when the theory is not saturated.
  bool allow_unsaturated = false;
  /// Saturate the theory first instead of requiring it to be saturated.
  bool saturate = false;
  /// Certify a sat verdict to this depth; negative disables it.
  int verify_depth = -1;
};

struct SolveResult {
  Verdict verdict;
  OrderingSpec ordering;
  /// The clause sets the engine ran on.
  std::vector<Clause> theory;
  SelectionMap selection;
  std::vector<Clause> ground;
  /// Empty when the theory was checked and found saturated.
  std::vector<Inference> saturation_violations;
  std::optional<Certificate> certificate;
};

OrderingSpec resolve_ordering(const Problem& p, const SolveOptions& options);

/// File markers for Annotated, otherwise the strategy applied to every
/// non-ground clause. Throws ContractError when a clause ends up without a
/// selection.
SelectionMap resolve_selection(const Problem& p, const OrderingSpec& o,
                               SelectionStrategy strategy);
SelectionStrategy resolve_strategy(const Problem& p, const SolveOptions& options);

/// Selection check, saturation check (or saturation), engine run and optional
/// certification. Throws ContractError for an invalid selection, or for an
/// unsaturated theory unless allow_unsaturated or saturate is set.
SolveResult solve(const Problem& p, const SolveOptions& options);

}  // namespace trigsat
