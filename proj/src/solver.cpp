#include "trigsat/solver.hpp"

#include "trigsat/error.hpp"

namespace trigsat {

OrderingSpec resolve_ordering(const Problem& p, const SolveOptions& options) {
  OrderingSpec o = p.options.ordering();
  if (options.order) o.kind = *options.order;
  if (options.precedence) o.precedence = *options.precedence;
  if (options.precedence_dominant) o.precedence_dominant = *options.precedence_dominant;
  return o;
}

SelectionStrategy resolve_strategy(const Problem& p, const SolveOptions& options) {
  if (options.select) return *options.select;
  return p.options.select.value_or(SelectionStrategy::Annotated);
}

SelectionMap resolve_selection(const Problem& p, const OrderingSpec& o,
                               SelectionStrategy strategy) {
  if (strategy == SelectionStrategy::Annotated) {
    for (const Clause& c : p.clauses)
      if (!c.is_ground() && !p.selection.contains(c.id))
        throw ContractError("clause #" + std::to_string(c.id) + " (" + c.to_string() +
                            ") has no selected literal");
    return p.selection;
  }
  SelectionMap sel;
  for (const Clause& c : p.clauses) {
    if (c.is_ground()) continue;
    AutoSelection a = auto_select(c, o, strategy);
    if (!a.ok())
      throw ContractError("selection not valid for clause #" + std::to_string(c.id) + " (" +
                          c.to_string() + "): " + a.failure);
    sel.set(c.id, a.positions);
  }
  return sel;
}

SolveResult solve(const Problem& p, const SolveOptions& options) {
  SolveResult r;
  r.ordering = resolve_ordering(p, options);
  const SelectionStrategy strategy = resolve_strategy(p, options);
  SelectionMap sel = resolve_selection(p, r.ordering, strategy);
  require_valid_selection(p.clauses, sel, r.ordering);

  if (options.saturate) {
    SaturationOptions so;
    so.budget = options.saturation;
    so.derived = strategy;
    SaturationReport rep = saturate(p.clauses, sel, r.ordering, so);
    if (rep.outcome == SaturationOutcome::DerivedBottom) {
      r.verdict.kind = VerdictKind::Unsat;
      return r;
    }
    if (rep.outcome == SaturationOutcome::BudgetExceeded) {
      r.verdict.kind = VerdictKind::Unknown;
      r.verdict.reason = rep.message;
      return r;
    }
    r.theory = std::move(rep.clauses);
    r.selection = std::move(rep.selection);
    r.ground = std::move(rep.ground);
  } else {
    SaturationReport rep = check_saturated(p.clauses, sel, r.ordering);
    r.saturation_violations = rep.violations;
    if (!rep.violations.empty() && !options.allow_unsaturated)
      throw ContractError("theory not saturated: " + rep.violations.front().to_string());
    r.theory = p.theory();
    r.selection = std::move(sel);
    r.ground = p.ground();
  }

  std::vector<TheoryClause> tcs;
  for (const Clause& c : r.theory) tcs.push_back(TheoryClause{c, r.selection.at(c.id)});
  Engine engine(std::move(tcs), r.ordering, options.engine);
  for (const Clause& c : r.ground) engine.add_ground_clause(c);
  r.verdict = engine.run();

  if (r.verdict.kind == VerdictKind::Sat && options.verify_depth >= 0)
    r.certificate = certify(r.theory, r.selection, r.ground, r.verdict.model, r.ordering,
                            options.verify_depth);
  return r;
}

}  // namespace trigsat
