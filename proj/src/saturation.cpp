#include "trigsat/saturation.hpp"

#include <algorithm>
#include <chrono>

#include "trigsat/error.hpp"

namespace trigsat {

std::string_view outcome_name(SaturationOutcome o) {
  switch (o) {
    case SaturationOutcome::Saturated: return "saturated";
    case SaturationOutcome::NotSaturated: return "not-saturated";
    case SaturationOutcome::DerivedBottom: return "derived-bottom";
    case SaturationOutcome::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

std::string Inference::to_string() const {
  if (rule == Rule::Factoring)
    return "factoring #" + std::to_string(left) + "[" + std::to_string(left_pos) +
           "] => " + conclusion.to_string();
  return "resolution #" + std::to_string(left) + "[" + std::to_string(left_pos) + "] #" +
         std::to_string(right) + "[" + std::to_string(right_pos) +
         "] => " + conclusion.to_string();
}

std::optional<Clause> resolve(const Clause& left, std::size_t positive_pos, const Clause& right,
                              std::size_t negative_pos, const SelectionMap& sel) {
  if (positive_pos >= left.size() || negative_pos >= right.size())
    throw ContractError("resolution position out of range");
  if (!left.literals[positive_pos].positive || right.literals[negative_pos].positive)
    throw ContractError("resolution needs a positive left literal and a negative right literal");
  if (!sel.is_selected(left.id, positive_pos) || !sel.is_selected(right.id, negative_pos))
    throw ContractError("resolution on an unselected literal");

  const Clause renamed = rename_variables(right, "'");
  auto sigma = unify(left.literals[positive_pos].atom, renamed.literals[negative_pos].atom);
  if (!sigma) return std::nullopt;
  Clause out;
  out.origin = Origin::Resolvent;
  for (std::size_t i = 0; i < left.size(); ++i)
    if (i != positive_pos) out.literals.push_back(sigma->apply(left.literals[i]));
  for (std::size_t i = 0; i < renamed.size(); ++i)
    if (i != negative_pos) out.literals.push_back(sigma->apply(renamed.literals[i]));
  return canonical_variables(out);
}

std::vector<Clause> factor(const Clause& c, std::size_t pos, const SelectionMap& sel) {
  if (pos >= c.size()) throw ContractError("factoring position out of range");
  if (!c.literals[pos].positive) throw ContractError("factoring needs a positive literal");
  if (!sel.is_selected(c.id, pos)) throw ContractError("factoring on an unselected literal");
  std::vector<Clause> out;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j == pos || !c.literals[j].positive) continue;
    auto sigma = unify(c.literals[pos].atom, c.literals[j].atom);
    if (!sigma) continue;
    Clause f;
    f.origin = Origin::Factor;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (i != j) f.literals.push_back(sigma->apply(c.literals[i]));
    out.push_back(canonical_variables(f));
  }
  return out;
}

namespace {

bool subsume_from(const Clause& c, std::size_t k, const Clause& d, std::vector<bool>& used,
                  const Substitution& theta) {
  if (k == c.size()) return true;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (used[j]) continue;
    Substitution next = theta;
    if (!extend_match(c.literals[k], d.literals[j], next)) continue;
    used[j] = true;
    if (subsume_from(c, k + 1, d, used, next)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool subsumes(const Clause& c, const Clause& d) {
  if (c.size() > d.size()) return false;
  // Cheap filter: every literal of c needs a partner with the same predicate and sign.
  for (const Literal& l : c.literals) {
    bool found = std::any_of(d.literals.begin(), d.literals.end(), [&](const Literal& m) {
      return m.positive == l.positive && m.atom.predicate() == l.atom.predicate();
    });
    if (!found) return false;
  }
  // Match big literals first to fail early.
  Clause ordered = c;
  std::stable_sort(ordered.literals.begin(), ordered.literals.end(),
                   [](const Literal& a, const Literal& b) { return a.atom.size() > b.atom.size(); });
  std::vector<bool> used(d.size(), false);
  return subsume_from(ordered, 0, d, used, Substitution{});
}

bool is_tautology(const Clause& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c.literals[i].positive != c.literals[j].positive &&
          c.literals[i].atom == c.literals[j].atom)
        return true;
  return false;
}

void require_valid_selection(std::span<const Clause> clauses, const SelectionMap& sel,
                             const OrderingSpec& o) {
  for (const Clause& c : clauses) {
    if (c.is_ground()) continue;
    if (!sel.contains(c.id))
      throw ContractError("clause #" + std::to_string(c.id) + " (" + c.to_string() +
                          ") has no selection");
    SelectionCheck check = validate_selection(c, sel.at(c.id), o);
    if (!check.valid)
      throw ContractError("selection not valid for clause #" + std::to_string(c.id) + " (" +
                          c.to_string() + "): " + check.reason);
  }
}

namespace {

// All Resolution conclusions with `a` contributing the positive literal and
// `b` the negative one, plus Factoring conclusions of `a` when `with_factoring`.
template <class Sink>
void for_each_inference(const Clause& a, const Clause& b, const SelectionMap& sel,
                        bool with_factoring, Sink&& sink) {
  const auto& sa = sel.at(a.id);
  const auto& sb = sel.at(b.id);
  for (std::size_t p : sa) {
    if (!a.literals[p].positive) continue;
    for (std::size_t q : sb) {
      if (b.literals[q].positive) continue;
      if (a.literals[p].atom.predicate() != b.literals[q].atom.predicate()) continue;
      if (auto r = resolve(a, p, b, q, sel)) {
        Inference inf{Inference::Rule::Resolution, a.id, p, b.id, q, std::move(*r)};
        sink(std::move(inf));
      }
    }
  }
  if (!with_factoring) return;
  for (std::size_t p : sa) {
    if (!a.literals[p].positive) continue;
    for (Clause& f : factor(a, p, sel)) {
      Inference inf{Inference::Rule::Factoring, a.id, p, 0, 0, std::move(f)};
      sink(std::move(inf));
    }
  }
}

bool subsumed_by_any(const Clause& c, std::span<const Clause> set) {
  return std::any_of(set.begin(), set.end(), [&](const Clause& s) { return subsumes(s, c); });
}

}  // namespace

SaturationReport check_saturated(std::span<const Clause> clauses, const SelectionMap& sel,
                                 const OrderingSpec& o) {
  require_valid_selection(clauses, sel, o);
  SaturationReport report;
  for (const Clause& c : clauses) {
    if (c.is_ground()) {
      report.ground.push_back(c);
    } else {
      report.clauses.push_back(c);
      report.selection.set(c.id, sel.at(c.id));
    }
  }
  const std::vector<Clause>& ng = report.clauses;
  auto judge = [&](Inference&& inf) {
    if (inf.rule == Inference::Rule::Resolution)
      ++report.resolutions;
    else
      ++report.factorings;
    if (is_tautology(inf.conclusion)) {
      ++report.tautologies;
      return;
    }
    if (subsumed_by_any(inf.conclusion, clauses)) return;
    report.violations.push_back(std::move(inf));
  };
  for (std::size_t i = 0; i < ng.size(); ++i)
    for (std::size_t j = 0; j < ng.size(); ++j) for_each_inference(ng[i], ng[j], sel, j == 0, judge);
  report.outcome =
      report.violations.empty() ? SaturationOutcome::Saturated : SaturationOutcome::NotSaturated;
  return report;
}

SaturationReport saturate(std::span<const Clause> clauses, const SelectionMap& sel,
                          const OrderingSpec& o, const SaturationOptions& options) {
  require_valid_selection(clauses, sel, o);
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  SaturationReport report;
  SelectionMap& selection = report.selection;
  std::vector<Clause> passive;
  std::vector<Clause> active;
  ClauseId next_id = 1;
  for (const Clause& c : clauses) {
    next_id = std::max<ClauseId>(next_id, c.id + 1);
    if (c.is_ground()) {
      report.ground.push_back(c);
      if (c.empty()) {
        report.outcome = SaturationOutcome::DerivedBottom;
        report.message = "input contains the empty clause";
        return report;
      }
    } else {
      passive.push_back(c);
      selection.set(c.id, sel.at(c.id));
    }
  }

  auto finish = [&](SaturationOutcome outcome, std::string message) {
    report.outcome = outcome;
    report.message = std::move(message);
    report.clauses = active;
    for (const Clause& c : passive) report.clauses.push_back(c);
    std::sort(report.clauses.begin(), report.clauses.end(),
              [](const Clause& a, const Clause& b) { return a.id < b.id; });
    return report;
  };

  // Smallest passive clause under the clause ordering; first by id among
  // clauses that nothing in passive is strictly below.
  auto pick = [&]() {
    std::size_t best = passive.size();
    for (std::size_t i = 0; i < passive.size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < passive.size() && minimal; ++j)
        if (j != i && compare_clauses(o, passive[j], passive[i]) == Comparison::Less) minimal = false;
      if (minimal && (best == passive.size() || passive[i].id < passive[best].id)) best = i;
    }
    if (best == passive.size()) {
      // The clause ordering is well founded, so this only guards against cycles
      // in a non-transitive comparison: fall back to the oldest clause.
      best = static_cast<std::size_t>(
          std::min_element(passive.begin(), passive.end(),
                           [](const Clause& a, const Clause& b) { return a.id < b.id; }) -
          passive.begin());
    }
    Clause c = std::move(passive[best]);
    passive.erase(passive.begin() + static_cast<std::ptrdiff_t>(best));
    return c;
  };

  while (!passive.empty()) {
    if (active.size() + passive.size() > options.budget.max_clauses)
      return finish(SaturationOutcome::BudgetExceeded,
                    "clause budget of " + std::to_string(options.budget.max_clauses) + " exceeded");
    if (std::chrono::duration<double>(Clock::now() - start).count() > options.budget.timeout_seconds)
      return finish(SaturationOutcome::BudgetExceeded, "saturation time budget exceeded");

    Clause given = pick();
    if (is_tautology(given)) {
      ++report.tautologies;
      continue;
    }
    if (subsumed_by_any(given, active) || subsumed_by_any(given, report.ground)) {
      ++report.forward_subsumed;
      continue;
    }
    const auto removed = std::remove_if(active.begin(), active.end(),
                                        [&](const Clause& a) { return subsumes(given, a); });
    report.backward_subsumed += static_cast<std::size_t>(active.end() - removed);
    active.erase(removed, active.end());
    active.push_back(given);

    std::vector<Inference> fresh;
    auto collect = [&](Inference&& inf) {
      if (inf.rule == Inference::Rule::Resolution)
        ++report.resolutions;
      else
        ++report.factorings;
      fresh.push_back(std::move(inf));
    };
    const Clause& g = active.back();
    for (const Clause& a : active) {
      for_each_inference(g, a, selection, &a == &g, collect);
      if (&a != &g) for_each_inference(a, g, selection, false, collect);
    }

    for (Inference& inf : fresh) {
      Clause& r = inf.conclusion;
      if (r.empty()) {
        return finish(SaturationOutcome::DerivedBottom, "derived the empty clause: " + inf.to_string());
      }
      if (is_tautology(r)) {
        ++report.tautologies;
        continue;
      }
      if (subsumed_by_any(r, active) || subsumed_by_any(r, passive) ||
          subsumed_by_any(r, report.ground)) {
        ++report.forward_subsumed;
        continue;
      }
      r.id = next_id++;
      if (r.is_ground()) {
        report.ground.push_back(r);
        continue;
      }
      AutoSelection chosen = select_derived(r, o, options.derived);
      if (!chosen.ok())
        throw ContractError("no selection rule for derived clause " + r.to_string() + ": " +
                            chosen.failure);
      selection.set(r.id, chosen.positions);
      passive.push_back(r);
    }
  }
  return finish(SaturationOutcome::Saturated, "");
}

}  // namespace trigsat
