#include "trigsat/engine.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "trigsat/error.hpp"
#include "trigsat/saturation.hpp"

namespace trigsat {

std::string_view verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Sat: return "sat";
    case VerdictKind::Unsat: return "unsat";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

bool Engine::AtomOrder::operator()(int a, int b) const {
  if (a == b) return false;
  return compare_ground_atoms_total(engine->ordering_, engine->atoms_[a], engine->atoms_[b]) ==
         Comparison::Less;
}

Engine::Engine(std::vector<TheoryClause> theory, OrderingSpec ordering, EngineOptions options)
    : theory_(std::move(theory)),
      ordering_(std::move(ordering)),
      options_(options),
      undefined_(AtomOrder{this}) {
  for (const TheoryClause& tc : theory_) {
    std::vector<Trigger> ts;
    for (std::size_t p : tc.triggers) {
      if (p >= tc.clause.size()) throw ContractError("trigger position out of range");
      const Literal pattern = tc.clause.literals[p].complement();
      ts.push_back(Trigger{pattern, predicate_id(pattern.atom.predicate()) * 2 +
                                        (pattern.positive ? 0 : 1)});
    }
    triggers_.push_back(std::move(ts));
  }
}

int Engine::predicate_id(const std::string& name) {
  auto [it, inserted] = pred_index_.emplace(name, static_cast<int>(pred_index_.size()));
  if (inserted) trail_by_key_.resize(pred_index_.size() * 2);
  return it->second;
}

int Engine::intern(const Atom& a) {
  if (auto it = atom_index_.find(a); it != atom_index_.end()) return it->second;
  if (!a.is_ground()) throw ContractError("non-ground atom in G: " + a.to_string());
  const int id = static_cast<int>(atoms_.size());
  atoms_.push_back(a);
  atom_pred_.push_back(predicate_id(a.predicate()));
  atom_index_.emplace(a, id);
  value_.push_back(-1);
  level_of_.push_back(0);
  pos_of_.push_back(-1);
  reason_of_.push_back(-1);
  occurs_.emplace_back();
  undefined_.insert(id);
  stats_.atoms = atoms_.size();
  return id;
}

std::optional<int> Engine::find_atom(const Atom& a) const {
  auto it = atom_index_.find(a);
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

Engine::Lit Engine::to_lit(const Literal& l) { return make_lit(intern(l.atom), !l.positive); }

Literal Engine::to_literal(Lit l) const { return Literal{atoms_[atom_of(l)], !is_neg(l)}; }

Clause Engine::to_clause(const std::vector<Lit>& lits) const {
  Clause c;
  for (Lit l : lits) c.literals.push_back(to_literal(l));
  return c;
}

std::string Engine::text(const std::vector<Lit>& lits) const { return to_clause(lits).to_string(); }

int Engine::value(Lit l) const {
  const signed char v = value_[atom_of(l)];
  if (v < 0) return -1;
  return (v == 1) != is_neg(l) ? 1 : 0;
}

void Engine::count(std::size_t clause, Lit l, int delta) {
  const int v = value(l);
  if (v == 1) clauses_[clause].n_true += delta;
  else if (v == 0) clauses_[clause].n_false += delta;
}

void Engine::classify(std::size_t clause) {
  const GroundClause& g = clauses_[clause];
  const int size = static_cast<int>(g.lits.size());
  const bool open = g.n_true == 0;
  if (open && g.n_false == size) conflicting_.insert(clause);
  else conflicting_.erase(clause);
  if (open && g.n_false + 1 == size) units_.insert(clause);
  else units_.erase(clause);
}

void Engine::assign(Lit l, int reason) {
  const int a = atom_of(l);
  if (reason < 0) ++level_;
  value_[a] = is_neg(l) ? 0 : 1;
  level_of_[a] = level_;
  pos_of_[a] = static_cast<int>(trail_.size());
  reason_of_[a] = reason;
  trail_by_key_[key_of(l)].push_back(pos_of_[a]);
  trail_.push_back(l);
  undefined_.erase(a);
  for (const auto& [ci, lit] : occurs_[a]) count(ci, lit, +1);
  for (const auto& [ci, lit] : occurs_[a]) classify(ci);
}

void Engine::unassign_last() {
  const Lit l = trail_.back();
  const int a = atom_of(l);
  for (const auto& [ci, lit] : occurs_[a]) count(ci, lit, -1);
  trail_.pop_back();
  trail_by_key_[key_of(l)].pop_back();
  value_[a] = -1;
  pos_of_[a] = -1;
  reason_of_[a] = -1;
  undefined_.insert(a);
  for (const auto& [ci, lit] : occurs_[a]) classify(ci);
}

void Engine::truncate(std::size_t keep) {
  while (trail_.size() > keep) unassign_last();
  level_ = trail_.empty() ? 0 : level_of_[atom_of(trail_.back())];
  matched_upto_ = std::min(matched_upto_, keep);
}

std::vector<Engine::Lit> Engine::sorted(std::vector<Lit> lits) const {
  // Count_M of an undefined atom is infinite.
  auto count_m = [&](Lit l) -> long {
    const int p = pos_of_[atom_of(l)];
    return p < 0 ? static_cast<long>(trail_.size()) + 1 : p;
  };
  const AtomOrder less{this};
  std::stable_sort(lits.begin(), lits.end(), [&](Lit x, Lit y) {
    if (count_m(x) != count_m(y)) return count_m(x) > count_m(y);
    return less(atom_of(y), atom_of(x));
  });
  return lits;
}

std::vector<Engine::Lit> Engine::merged(std::vector<Lit> lits) const {
  std::vector<Lit> out;
  for (Lit l : lits)
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  return out;
}

bool Engine::add_lits(std::vector<Lit> lits, Origin origin, ClauseId source) {
  lits = merged(std::move(lits));
  std::vector<Lit> key = lits;
  std::sort(key.begin(), key.end());
  if (!clause_keys_.insert(key).second) return false;
  const std::size_t ci = clauses_.size();
  clauses_.push_back(GroundClause{lits, origin, source, 0, 0});
  for (Lit l : lits) {
    occurs_[atom_of(l)].emplace_back(ci, l);
    count(ci, l, +1);
  }
  classify(ci);
  stats_.ground_clauses = clauses_.size();
  return true;
}

bool Engine::in_g(const Clause& ground) const {
  std::vector<Lit> key;
  for (const Literal& l : ground.literals) {
    auto a = find_atom(l.atom);
    if (!a) return false;
    key.push_back(make_lit(*a, !l.positive));
  }
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  return clause_keys_.count(key) != 0;
}

bool Engine::add_ground_clause(const Clause& c) {
  if (!c.is_ground()) throw ContractError("clause is not ground: " + c.to_string());
  std::vector<Lit> lits;
  for (const Literal& l : c.literals) lits.push_back(to_lit(l));
  return add_lits(std::move(lits),
                  c.origin == Origin::InputNonGround ? Origin::InputGround : c.origin, c.id);
}

Engine::Scan Engine::scan() const {
  if (!conflicting_.empty()) return Scan{Scan::Conflict, *conflicting_.begin(), 0};
  if (units_.empty()) return Scan{};
  const std::size_t ci = *units_.begin();
  for (Lit l : clauses_[ci].lits)
    if (value(l) < 0) return Scan{Scan::Unit, ci, l};
  throw std::logic_error("unit clause without an undefined literal");
}

void Engine::trace(const std::string& line) const {
  if (options_.trace) *options_.trace << line << '\n';
}

bool Engine::detect_conflict() {
  if (conflict_) return false;
  const Scan s = scan();
  if (s.kind != Scan::Conflict) return false;
  std::vector<Lit> c = clauses_[s.clause].lits;
  conflict_ = c;
  conflict_level_ = level_;
  ++stats_.conflicts;
  if (level_ > 0) {
    ++stats_.conflicts_above_level0;
    if (c.size() < 2) ++stats_.short_conflict_violations;
  }
  if (c.size() >= 2) {
    const std::vector<Lit> s2 = sorted(c);
    if (level_of_[atom_of(s2[0])] != level_of_[atom_of(s2[1])]) ++stats_.conflict_level_violations;
  }
  if (options_.trace) trace("conflict " + text(c) + " at level " + std::to_string(level_));
  return true;
}

bool Engine::propagate() {
  if (conflict_) return false;
  const Scan s = scan();
  if (s.kind != Scan::Unit) return false;
  const std::vector<Lit> c = clauses_[s.clause].lits;
  if (c.size() >= 2) {
    // The largest falsified literal must sit at the current level.
    const std::vector<Lit> s2 = sorted(c);
    if (level_of_[atom_of(s2[1])] != level_) ++stats_.propagation_level_violations;
  }
  assign(s.unit, static_cast<int>(s.clause));
  ++stats_.propagations;
  ++steps_since_;
  if (options_.trace) trace("propagate " + to_literal(s.unit).to_string() + " from " + text(c));
  return true;
}

bool Engine::backjump_applicable() const {
  if (!conflict_ || conflict_->empty()) return false;
  const std::vector<Lit> c = sorted(*conflict_);
  const int k = atom_of(c[0]);
  if (reason_of_[k] < 0) return false;
  if (level_of_[k] == 0) return true;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (level_of_[atom_of(c[i])] == level_of_[k]) return true;
  return false;
}

bool Engine::backjump_step() {
  if (!conflict_ || conflict_->empty()) return false;
  const std::vector<Lit> c = sorted(*conflict_);
  const Lit k = c[0];
  const int a = atom_of(k);
  bool shared = level_of_[a] == 0;
  for (std::size_t i = 1; i < c.size() && !shared; ++i)
    shared = level_of_[atom_of(c[i])] == level_of_[a];
  if (!shared) return false;
  if (reason_of_[a] < 0)
    throw std::logic_error("decision literal shares its level with another conflict literal");
  std::vector<Lit> resolvent(c.begin() + 1, c.end());
  for (Lit l : clauses_[reason_of_[a]].lits)
    if (l != negate(k)) resolvent.push_back(l);
  conflict_ = merged(std::move(resolvent));
  ++stats_.backjumps;
  ++backjumps_since_;
  if (options_.trace) trace("backjump on " + atoms_[a].to_string() + " -> " + text(*conflict_));
  return true;
}

void Engine::note_instantiate_or_learn() {
  const std::size_t n = atoms_.size();
  if (steps_since_ > n || backjumps_since_ > n) ++stats_.step_bound_violations;
  stats_.max_steps_between = std::max(stats_.max_steps_between, steps_since_);
  stats_.max_backjumps_between = std::max(stats_.max_backjumps_between, backjumps_since_);
  steps_since_ = 0;
  backjumps_since_ = 0;
}

bool Engine::learn() {
  if (!conflict_ || conflict_->empty() || backjump_applicable()) return false;
  std::vector<Lit> c = sorted(*conflict_);
  if (conflict_level_ == 0 && c.size() > 1) ++stats_.level0_learned_violations;
  ++stats_.learned;
  stats_.max_learned_size = std::max(stats_.max_learned_size, c.size());
  note_instantiate_or_learn();
  const std::size_t keep = c.size() == 1 ? 0 : static_cast<std::size_t>(pos_of_[atom_of(c[1])]) + 1;
  truncate(keep);
  add_lits(c, Origin::Learned, 0);
  if (options_.trace) trace("learn " + text(c) + ", back to level " + std::to_string(level_));
  conflict_.reset();
  return true;
}

void Engine::match_new_literals() {
  for (; matched_upto_ < trail_.size(); ++matched_upto_) {
    const std::size_t i = matched_upto_;
    const Lit fresh = trail_[i];
    const Literal target = to_literal(fresh);
    for (std::size_t t = 0; t < theory_.size(); ++t) {
      const std::vector<Trigger>& ts = triggers_[t];
      for (std::size_t j = 0; j < ts.size(); ++j) {
        if (ts[j].key != key_of(fresh)) continue;
        Substitution theta;
        if (!extend_match(ts[j].pattern, target, theta)) continue;
        std::vector<Lit> support(ts.size(), 0);
        support[j] = fresh;
        // The remaining triggers match literals no newer than the fresh one.
        auto rec = [&](auto&& self, std::size_t k, const Substitution& th) -> void {
          if (k == ts.size()) {
            Clause inst = th.apply(theory_[t].clause);
            if (!inst.is_ground()) return;
            inst.origin = Origin::Instance;
            inst.id = theory_[t].clause.id;
            candidates_.push_back(Candidate{std::move(inst), theory_[t].clause.id, support});
            return;
          }
          if (k == j) return self(self, k + 1, th);
          const int key = ts[k].key;
          if (key >= static_cast<int>(trail_by_key_.size())) return;
          for (int pos : trail_by_key_[key]) {
            if (static_cast<std::size_t>(pos) > i) break;
            Substitution next = th;
            if (!extend_match(ts[k].pattern, to_literal(trail_[pos]), next)) continue;
            support[k] = trail_[pos];
            self(self, k + 1, next);
          }
        };
        rec(rec, 0, theta);
      }
    }
  }
}

bool Engine::live(const Candidate& c) const {
  for (Lit l : c.support)
    if (value(l) != 1) return false;
  return !in_g(c.instance);
}

void Engine::drop_dead_candidates() {
  while (!candidates_.empty() && !live(candidates_.front())) candidates_.pop_front();
}

bool Engine::instantiate_step() {
  if (conflict_) return false;
  match_new_literals();
  drop_dead_candidates();
  if (candidates_.empty()) return false;
  Candidate cand = std::move(candidates_.front());
  candidates_.pop_front();
  std::vector<Lit> lits;
  for (const Literal& l : cand.instance.literals) lits.push_back(to_lit(l));
  lits = sorted(merged(lits));
  ++stats_.instantiations;
  note_instantiate_or_learn();
  if (lits.size() == 1) {
    truncate(0);
  } else if (std::all_of(lits.begin() + 1, lits.end(), [&](Lit l) { return value(l) == 0; })) {
    truncate(static_cast<std::size_t>(pos_of_[atom_of(lits[1])]) + 1);
  }
  add_lits(lits, Origin::Instance, cand.source);
  if (options_.trace) trace("instantiate #" + std::to_string(cand.source) + " -> " + text(lits));
  return true;
}

void Engine::decide() {
  if (conflict_) throw ContractError("Decide outside its guard: a conflict is pending");
  if (scan().kind != Scan::None)
    throw ContractError("Decide outside its guard: Conflict or Propagate applies");
  if (undefined_.empty()) throw ContractError("Decide outside its guard: every atom is defined");
  const int a = *undefined_.begin();
  assign(make_lit(a, true), -1);
  ++stats_.decisions;
  ++steps_since_;
  if (options_.trace) trace("decide ~" + atoms_[a].to_string() + " at level " + std::to_string(level_));
}

bool Engine::failed() const { return conflict_ && conflict_->empty(); }

bool Engine::all_assigned() const { return undefined_.empty(); }

bool Engine::can_succeed() {
  if (conflict_ || !all_assigned() || scan().kind != Scan::None) return false;
  match_new_literals();
  drop_dead_candidates();
  return candidates_.empty();
}

Verdict Engine::run() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  Verdict v;
  auto unknown = [&](std::string reason) {
    v.kind = VerdictKind::Unknown;
    v.reason = std::move(reason);
    v.stats = stats_;
    if (options_.trace) trace("unknown: " + v.reason);
    return v;
  };
  std::size_t tick = 0;
  while (true) {
    if (stats_.instantiations >= options_.max_instantiations)
      return unknown("instantiation budget of " + std::to_string(options_.max_instantiations) +
                     " exhausted");
    if (stats_.conflicts >= options_.max_conflicts)
      return unknown("conflict budget of " + std::to_string(options_.max_conflicts) + " exhausted");
    if (clauses_.size() >= options_.max_ground_clauses)
      return unknown("ground clause budget of " + std::to_string(options_.max_ground_clauses) +
                     " exhausted");
    if (++tick % 64 == 0) {
      const std::chrono::duration<double> elapsed = clock::now() - start;
      if (elapsed.count() > options_.timeout_seconds) return unknown("timeout");
    }

    if (failed()) {
      if (options_.trace) trace("fail");
      v.kind = VerdictKind::Unsat;
      v.stats = stats_;
      return v;
    }
    if (conflict_) {
      if (!backjump_step()) learn();
      continue;
    }
    const Scan s = scan();
    if (s.kind == Scan::Conflict) {
      detect_conflict();
      continue;
    }
    if (s.kind == Scan::Unit) {
      propagate();
      continue;
    }
    if (options_.mode == InstantiationMode::Eager && instantiate_step()) continue;
    if (!all_assigned()) {
      decide();
      continue;
    }
    if (instantiate_step()) continue;
    if (options_.trace) trace("succeed");
    v.kind = VerdictKind::Sat;
    for (Lit l : trail_) v.model.push_back(to_literal(l));
    v.stats = stats_;
    return v;
  }
}

std::vector<TrailEntry> Engine::trail() const {
  std::vector<TrailEntry> out;
  for (auto it = trail_.rbegin(); it != trail_.rend(); ++it) {
    const int a = atom_of(*it);
    TrailEntry e{to_literal(*it), level_of_[a], std::nullopt};
    if (reason_of_[a] >= 0) e.reason = static_cast<std::size_t>(reason_of_[a]);
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<Clause> Engine::conflict_clause() const {
  if (!conflict_) return std::nullopt;
  return to_clause(*conflict_);
}

std::vector<Clause> Engine::ground_clauses() const {
  std::vector<Clause> out;
  for (const GroundClause& g : clauses_) {
    Clause c = to_clause(g.lits);
    c.origin = g.origin;
    c.id = g.source;
    out.push_back(std::move(c));
  }
  return out;
}

Clause Engine::sort_clause(const Clause& c) const {
  std::vector<Lit> lits;
  for (const Literal& l : c.literals) {
    auto a = find_atom(l.atom);
    if (!a) throw ContractError("atom not in G: " + l.atom.to_string());
    lits.push_back(make_lit(*a, !l.positive));
  }
  Clause out = to_clause(sorted(lits));
  out.id = c.id;
  out.origin = c.origin;
  return out;
}

Verdict run(std::span<const Clause> theory, const SelectionMap& sel, std::span<const Clause> ground,
            const OrderingSpec& o, const EngineOptions& options, bool require_saturated) {
  require_valid_selection(theory, sel, o);
  if (require_saturated) {
    SaturationReport r = check_saturated(theory, sel, o);
    if (!r.violations.empty())
      throw ContractError("theory not saturated: " + r.violations.front().to_string());
  }
  std::vector<TheoryClause> tcs;
  for (const Clause& c : theory)
    if (!c.is_ground()) tcs.push_back(TheoryClause{c, sel.at(c.id)});
  Engine e(std::move(tcs), o, options);
  for (const Clause& c : theory)
    if (c.is_ground()) e.add_ground_clause(c);
  for (const Clause& c : ground) e.add_ground_clause(c);
  return e.run();
}

}  // namespace trigsat
