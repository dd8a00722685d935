#pragma once

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trigsat/ordering.hpp"
#include "trigsat/selection.hpp"
#include "trigsat/term.hpp"

namespace trigsat {

enum class InstantiationMode {
  Lazy,   ///< only once every atom has a value
  Eager,  ///< after every propagation fixpoint
};

struct EngineOptions {
  InstantiationMode mode = InstantiationMode::Lazy;
  std::size_t max_instantiations = 50000;
  std::size_t max_conflicts = 200000;
  std::size_t max_ground_clauses = 1000000;
  double timeout_seconds = 120.0;
  /// One line per rule application when set.
  std::ostream* trace = nullptr;
};

/// A non-ground clause together with its triggers (its selected literals).
struct TheoryClause {
  Clause clause;
  std::vector<std::size_t> triggers;
};

struct TrailEntry {
  Literal literal;
  int level = 0;
  /// Index of the producing ground clause; empty for decisions.
  std::optional<std::size_t> reason;
};

/// Counters plus the monitors for the structural CDCL lemmas. A violation
/// counter above zero means the corresponding property failed during the run.
struct EngineStats {
  std::size_t decisions = 0;
  std::size_t propagations = 0;
  std::size_t conflicts = 0;
  std::size_t backjumps = 0;
  std::size_t learned = 0;
  std::size_t instantiations = 0;
  std::size_t conflicts_above_level0 = 0;
  std::size_t max_learned_size = 0;
  /// Propagating clause whose two largest literals sit at different levels.
  std::size_t propagation_level_violations = 0;
  /// Conflict clause whose two newest falsified literals sit at different levels.
  std::size_t conflict_level_violations = 0;
  /// Clause learned from a level-0 conflict with more than one literal.
  std::size_t level0_learned_violations = 0;
  /// Conflict above level 0 in a clause with fewer than two literals.
  std::size_t short_conflict_violations = 0;
  /// More than n Decide+Propagate (or Backjump) steps between two
  /// Instantiate/Learn steps, n the atom count at that point.
  std::size_t step_bound_violations = 0;
  std::size_t max_steps_between = 0;
  std::size_t max_backjumps_between = 0;
  std::size_t atoms = 0;
  std::size_t ground_clauses = 0;
};

enum class VerdictKind { Sat, Unsat, Unknown };

std::string_view verdict_name(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  /// The final trail, oldest assignment first (Sat only).
  std::vector<Literal> model;
  /// Budget diagnostic for Unknown.
  std::string reason;
  EngineStats stats;
};

/// CDCL search over states (G, M, LC) interleaved with trigger-based
/// instantiation of the theory clauses. Each rule is exposed separately so
/// derivations can be replayed step by step; run() applies them with the
/// priority Fail > Conflict > Backjump/Learn > Propagate > Instantiate (eager)
/// > Decide > Instantiate (lazy) > Succeed.
class Engine {
 public:
  Engine(std::vector<TheoryClause> theory, OrderingSpec ordering, EngineOptions options = {});
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Adds a ground clause to G, merging duplicate literals. Returns false when
  /// an identical clause is already present.
  bool add_ground_clause(const Clause& c);

  // --- rules -------------------------------------------------------------
  /// LC := {C} for a clause of G false in M.
  bool detect_conflict();
  /// Pushes the only undefined literal of a clause whose other literals are false.
  bool propagate();
  /// Resolves the conflict clause with the reason of its newest falsified literal.
  bool backjump_step();
  /// Adds LC to G and backtracks. False when LC is empty, is the empty clause
  /// or Backjump still applies.
  bool learn();
  /// Adds one new trigger instance, adjusting M as the rule prescribes.
  bool instantiate_step();
  /// Sets the smallest undefined atom false. Throws ContractError outside the
  /// rule's guard.
  void decide();
  /// LC holds the empty clause.
  bool failed() const;
  /// No conflict, every atom defined and no new instance.
  bool can_succeed();

  Verdict run();

  // --- inspection ----------------------------------------------------------
  /// Newest assignment first.
  std::vector<TrailEntry> trail() const;
  int level() const { return level_; }
  std::optional<Clause> conflict_clause() const;
  std::vector<Clause> ground_clauses() const;
  std::size_t atom_count() const { return atoms_.size(); }
  bool all_assigned() const;
  const EngineStats& stats() const { return stats_; }
  /// Literals in descending order of assignment time (undefined first), ties
  /// broken by descending atom order, then original position.
  Clause sort_clause(const Clause& c) const;
  bool ordering_is_omega() const { return ordering_.omega_isomorphic(); }

 private:
  using Lit = int;
  struct GroundClause {
    std::vector<Lit> lits;
    Origin origin = Origin::InputGround;
    ClauseId source = 0;
    int n_true = 0;
    int n_false = 0;
  };
  struct Scan {
    enum Kind { None, Conflict, Unit } kind = None;
    std::size_t clause = 0;
    Lit unit = 0;
  };
  struct Trigger {
    Literal pattern;  // complement of the selected literal
    int key = 0;      // predicate id * 2 + negative
  };
  struct Candidate {
    Clause instance;
    ClauseId source = 0;
    std::vector<Lit> support;  // true literals the triggers matched
  };
  struct AtomOrder {
    const Engine* engine;
    bool operator()(int a, int b) const;
  };

  static int atom_of(Lit l) { return l >> 1; }
  static bool is_neg(Lit l) { return (l & 1) != 0; }
  static Lit make_lit(int atom, bool negative) { return atom << 1 | (negative ? 1 : 0); }
  static Lit negate(Lit l) { return l ^ 1; }

  int predicate_id(const std::string& name);
  int intern(const Atom& a);
  std::optional<int> find_atom(const Atom& a) const;
  Lit to_lit(const Literal& l);
  Literal to_literal(Lit l) const;
  Clause to_clause(const std::vector<Lit>& lits) const;
  std::string text(const std::vector<Lit>& lits) const;
  int key_of(Lit l) const { return atom_pred_[atom_of(l)] * 2 + (is_neg(l) ? 1 : 0); }
  /// 1 true, 0 false, -1 undefined.
  int value(Lit l) const;
  void assign(Lit l, int reason);
  void unassign_last();
  void truncate(std::size_t keep);
  void count(std::size_t clause, Lit l, int delta);
  void classify(std::size_t clause);
  std::vector<Lit> sorted(std::vector<Lit> lits) const;
  std::vector<Lit> merged(std::vector<Lit> lits) const;
  bool add_lits(std::vector<Lit> lits, Origin origin, ClauseId source);
  bool in_g(const Clause& ground) const;
  Scan scan() const;
  bool backjump_applicable() const;
  void match_new_literals();
  bool live(const Candidate& c) const;
  void drop_dead_candidates();
  void note_instantiate_or_learn();
  void trace(const std::string& line) const;

  std::vector<TheoryClause> theory_;
  std::vector<std::vector<Trigger>> triggers_;
  OrderingSpec ordering_;
  EngineOptions options_;

  std::unordered_map<std::string, int> pred_index_;
  std::vector<Atom> atoms_;
  std::vector<int> atom_pred_;
  std::unordered_map<Atom, int, AtomHash> atom_index_;
  std::set<int, AtomOrder> undefined_;
  std::vector<std::vector<std::pair<std::size_t, Lit>>> occurs_;

  std::vector<GroundClause> clauses_;
  std::set<std::vector<Lit>> clause_keys_;
  std::set<std::size_t> conflicting_;
  std::set<std::size_t> units_;

  std::vector<signed char> value_;
  std::vector<int> level_of_;
  std::vector<int> pos_of_;
  std::vector<int> reason_of_;
  std::vector<Lit> trail_;
  std::vector<std::vector<int>> trail_by_key_;  // trail positions per key
  int level_ = 0;

  std::optional<std::vector<Lit>> conflict_;
  int conflict_level_ = 0;

  std::size_t matched_upto_ = 0;  // trail prefix already matched against triggers
  std::deque<Candidate> candidates_;

  std::size_t steps_since_ = 0;
  std::size_t backjumps_since_ = 0;
  EngineStats stats_;
};

/// Full pipeline for a theory already paired with its selection: validates the
/// selection, checks saturation (unless waived), and runs the engine on the
/// ground clauses. Throws ContractError for an invalid selection or an
/// unsaturated theory when `require_saturated` is set.
Verdict run(std::span<const Clause> theory, const SelectionMap& sel,
            std::span<const Clause> ground, const OrderingSpec& o,
            const EngineOptions& options = {}, bool require_saturated = true);

}  // namespace trigsat
