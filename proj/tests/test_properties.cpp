#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "trigsat/engine.hpp"
#include "trigsat/model.hpp"
#include "trigsat/problem.hpp"
#include "trigsat/saturation.hpp"
#include "trigsat/selection.hpp"
#include "trigsat/solver.hpp"

using namespace trigsat;
using oracle::fn;
using oracle::var;

namespace {

struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool coin() { return below(2) == 0; }
  template <class T>
  const T& pick(const std::vector<T>& xs) { return xs[below(static_cast<int>(xs.size()))]; }

  /// Terms over a, b, f/1, g/2 and the given variables.
  Term term(int depth, const std::vector<std::string>& vars) {
    const int leaves = 2 + static_cast<int>(vars.size());
    if (depth == 0 || below(3) == 0) {
      const int k = below(leaves);
      if (k == 0) return fn("a");
      if (k == 1) return fn("b");
      return var(vars[k - 2]);
    }
    if (coin()) return fn("f", {term(depth - 1, vars)});
    return fn("g", {term(depth - 1, vars), term(depth - 1, vars)});
  }

  Atom atom(int depth, const std::vector<std::string>& vars, const std::string& pred = "p") {
    return Atom(pred, {term(depth, vars), term(depth, vars)});
  }
};

const std::vector<std::string> kXYZ = {"X", "Y", "Z"};

std::map<std::string, Term> ground_theta(Gen& g, const std::set<std::string>& vars, int depth) {
  std::map<std::string, Term> th;
  for (const std::string& x : vars) th.emplace(x, g.term(depth, {}));
  return th;
}

Substitution to_subst(const std::map<std::string, Term>& m) {
  Substitution s;
  for (const auto& [x, t] : m) s.bind(x, t);
  return s;
}

std::set<std::string> vars_of(const Atom& a) {
  std::set<std::string> out;
  a.collect_variables(out);
  return out;
}

void subterms(const Term& t, std::vector<Term>& out) {
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const Term& a : t.args()) subterms(a, out);
}

/// Random function-free clause over p/1, q/1, r/2 with constants a, b.
Clause flat_clause(Gen& g, const std::vector<std::string>& vars, int max_lits) {
  Clause c;
  const int n = 1 + g.below(max_lits);
  auto arg = [&] {
    const int k = g.below(static_cast<int>(vars.size()) + 2);
    if (k == 0) return fn("a");
    if (k == 1) return fn("b");
    return var(vars[k - 2]);
  };
  for (int i = 0; i < n; ++i) {
    const int p = g.below(3);
    Atom a = p == 2 ? Atom("r", {arg(), arg()}) : Atom(p == 0 ? "p" : "q", {arg()});
    c.literals.push_back(Literal{a, g.coin()});
  }
  return c;
}

std::vector<Clause> random_ground(Gen& g, int atoms, int clauses, int max_width) {
  std::vector<Clause> out;
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    const int w = 1 + g.below(max_width);
    for (int j = 0; j < w; ++j) {
      Term t = fn("a");
      for (int k = g.below(atoms); k > 0; --k) t = fn("f", {t});
      c.literals.push_back(Literal{Atom("p", {t}), g.coin()});
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

// --- term-core ------------------------------------------------------------

TEST_CASE("unify agrees with a brute-force ground unifier search") {
  Gen g(11);
  const std::vector<Term> universe = oracle::small_universe(1);
  int unifiable = 0;
  for (int round = 0; round < 1500; ++round) {
    const Atom a = g.atom(2, kXYZ), b = g.atom(2, kXYZ);
    const auto s = unify(a, b);
    if (s) {
      CHECK(s->apply(a) == s->apply(b));
      for (const auto& [x, t] : s->bindings()) CHECK(s->apply(t) == t);
    }
    std::set<std::string> vs = vars_of(a);
    for (const std::string& x : vars_of(b)) vs.insert(x);
    const auto theta = oracle::ground_unifier(a.as_term(), b.as_term(), universe);
    if (!theta) continue;
    ++unifiable;
    CAPTURE(a.to_string());
    CAPTURE(b.to_string());
    REQUIRE(s);
    // theta = sigma theta on every variable, so sigma is more general.
    for (const std::string& x : vs)
      CHECK(oracle::subst(s->apply(var(x)), *theta) == oracle::subst(var(x), *theta));
  }
  CHECK(unifiable > 20);
}

TEST_CASE("match_onto recovers a random ground instance") {
  Gen g(12);
  for (int round = 0; round < 300; ++round) {
    const Atom a = g.atom(2, kXYZ);
    const Literal l{a, g.coin()};
    const auto theta = ground_theta(g, vars_of(a), 2);
    const Literal target{Atom(a.predicate(), {oracle::subst(a.args()[0], theta),
                                              oracle::subst(a.args()[1], theta)}),
                         l.positive};
    const auto s = match_onto(l, target);
    REQUIRE(s);
    for (const auto& [x, t] : theta) CHECK(*s->lookup(x) == t);
  }
}

TEST_CASE("match_onto agrees with a search over target subterms") {
  Gen g(13);
  for (int round = 0; round < 300; ++round) {
    const Literal l{g.atom(1, {"X", "Y"}), true};
    const Literal target{g.atom(2, {}), true};
    std::vector<Term> subs;
    subterms(target.atom.as_term(), subs);
    const auto found = oracle::ground_unifier(l.atom.as_term(), target.atom.as_term(), subs);
    const auto s = match_onto(l, target);
    CAPTURE(l.to_string());
    CAPTURE(target.to_string());
    CHECK(s.has_value() == found.has_value());
    if (s) CHECK(s->apply(l) == target);
  }
}

TEST_CASE("apply preserves size and bounds variables") {
  Gen g(14);
  for (int round = 0; round < 300; ++round) {
    Clause c;
    for (int i = 1 + g.below(3); i > 0; --i) c.literals.push_back(Literal{g.atom(2, kXYZ), g.coin()});
    Substitution s;
    for (const std::string& x : {"X", "Y"})
      if (g.coin()) s.bind(x, g.term(2, {"Z", "W"}));
    const Clause d = apply(s, c);
    CHECK(d.size() == c.size());
    std::set<std::string> allowed;
    for (const std::string& x : c.variables())
      if (!s.lookup(x)) allowed.insert(x);
    for (const auto& [x, t] : s.bindings()) t.collect_variables(allowed);
    for (const std::string& x : d.variables()) CHECK(allowed.count(x) == 1);
  }
}

TEST_CASE("composition applies left then right") {
  Gen g(15);
  for (int round = 0; round < 300; ++round) {
    Substitution s, r;
    for (const std::string& x : {"X", "Y"})
      if (g.coin()) s.bind(x, g.term(2, {"U", "V"}));
    for (const std::string& x : {"U", "X"})
      if (g.coin()) r.bind(x, g.term(1, {"V"}));
    const Substitution c = s.compose(r);
    for (const std::string& x : {"X", "Y", "U", "V"}) CHECK(c.apply(var(x)) == r.apply(s.apply(var(x))));
    for (const auto& [x, t] : c.bindings()) CHECK(t != var(x));
  }
}

// --- ordering ----------------------------------------------------------------

namespace {

std::vector<OrderingSpec> orderings() {
  OrderingSpec w;
  w.precedence = {"g", "f", "b", "a"};
  OrderingSpec s;
  s.kind = OrderingKind::SubtermProduct;
  return {w, s};
}

}  // namespace

TEST_CASE("comparisons are stable under ground substitution and antisymmetric") {
  Gen g(21);
  for (const OrderingSpec& o : orderings()) {
    CAPTURE(ordering_name(o.kind));
    int less = 0;
    for (int round = 0; round < 4000; ++round) {
      const Atom a = g.atom(2, {"X", "Y"}), b = g.atom(2, {"X", "Y"});
      const Comparison c = compare_atoms(o, a, b);
      CHECK(compare_atoms(o, b, a) == reverse(c));
      if (c == Comparison::Equal) CHECK(a == b);
      if (c != Comparison::Less) continue;
      ++less;
      std::set<std::string> vs = vars_of(a);
      for (const std::string& x : vars_of(b)) vs.insert(x);
      for (int k = 0; k < 3; ++k) {
        const Substitution th = to_subst(ground_theta(g, vs, 2));
        CAPTURE(a.to_string());
        CAPTURE(b.to_string());
        CHECK(compare_atoms(o, th.apply(a), th.apply(b)) == Comparison::Less);
      }
    }
    CHECK(less > 50);
  }
}

TEST_CASE("weight-precedence is total on ground atoms") {
  Gen g(22);
  const OrderingSpec o = orderings()[0];
  for (int round = 0; round < 2000; ++round) {
    const Atom a = g.atom(2, {}), b = g.atom(2, {});
    const Comparison c = compare_atoms(o, a, b);
    CAPTURE(a.to_string());
    CAPTURE(b.to_string());
    CHECK(c != Comparison::Incomparable);
    CHECK((c == Comparison::Equal) == (a == b));
  }
}

TEST_CASE("ground comparisons are transitive") {
  Gen g(23);
  for (const OrderingSpec& o : orderings()) {
    for (int round = 0; round < 1500; ++round) {
      const Atom a = g.atom(1, {}), b = g.atom(1, {}), c = g.atom(1, {});
      if (compare_atoms(o, a, b) == Comparison::Less && compare_atoms(o, b, c) == Comparison::Less)
        CHECK(compare_atoms(o, a, c) == Comparison::Less);
      if (compare_ground_atoms_total(o, a, b) == Comparison::Less &&
          compare_ground_atoms_total(o, b, c) == Comparison::Less)
        CHECK(compare_ground_atoms_total(o, a, c) == Comparison::Less);
    }
  }
}

TEST_CASE("weight-precedence: atoms below a ground atom are no larger than it") {
  // Unit weights: smaller atoms have at most as many symbols, so only
  // finitely many ground atoms lie below any ground atom.
  const OrderingSpec o = orderings()[0];
  std::vector<Atom> all;
  for (const Term& s : oracle::small_universe(1))
    for (const Term& t : oracle::small_universe(1)) all.push_back(Atom("p", {s, t}));
  for (const Atom& a : all)
    for (const Atom& b : all)
      if (compare_atoms(o, b, a) == Comparison::Less) CHECK(b.size() <= a.size());
}

TEST_CASE("subterm product: a ground atom of size n has at most n^2 smaller atoms") {
  Gen g(24);
  OrderingSpec o;
  o.kind = OrderingKind::SubtermProduct;
  const std::vector<Term> universe = oracle::small_universe(2);
  for (int round = 0; round < 20; ++round) {
    const Atom a = g.atom(2, {});
    std::size_t smaller = 0;
    for (const Term& s : universe)
      for (const Term& t : universe)
        if (compare_atoms(o, Atom("p", {s, t}), a) == Comparison::Less) ++smaller;
    const std::size_t n = a.size();
    CAPTURE(a.to_string());
    CHECK(smaller <= n * n);
  }
}

// --- selection --------------------------------------------------------------

namespace {

/// Independent re-derivation of the validity condition.
bool brute_valid(const Clause& c, const std::vector<std::size_t>& sel, const OrderingSpec& o) {
  const std::set<std::string> all = c.variables();
  for (std::uint32_t mask = 0; mask < (1u << sel.size()); ++mask) {
    std::vector<std::size_t> t, rest_sel;
    for (std::size_t i = 0; i < sel.size(); ++i) (mask >> i & 1u ? t : rest_sel).push_back(sel[i]);
    std::vector<Literal> tl;
    for (std::size_t p : t) tl.push_back(c.literals[p]);
    if (variables_of(tl) == all) continue;
    bool has_negative = false;
    for (std::size_t p : rest_sel) has_negative |= !c.literals[p].positive;
    if (has_negative) continue;
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < c.size(); ++p)
      if (std::find(t.begin(), t.end(), p) == t.end()) rest.push_back(p);
    for (std::size_t p : rest) {
      bool maximal = true;
      for (std::size_t q : rest)
        if (compare_literals(o, c.literals[q], c.literals[p]) == Comparison::Greater) maximal = false;
      if (maximal && std::find(rest_sel.begin(), rest_sel.end(), p) == rest_sel.end()) return false;
    }
  }
  return true;
}

Clause random_selection_clause(Gen& g) {
  Clause c;
  for (int i = 1 + g.below(4); i > 0; --i) {
    const std::string pred = g.pick(std::vector<std::string>{"p", "q", "r"});
    c.literals.push_back(Literal{Atom(pred, {g.term(1, {"X", "Y", "Z"})}), g.coin()});
  }
  return c;
}

}  // namespace

TEST_CASE("validate_selection agrees with a brute-force checker") {
  Gen g(31);
  OrderingSpec o;
  o.kind = OrderingKind::SubtermProduct;
  o.precedence = {"r", "q", "p"};
  int valid = 0, invalid = 0;
  for (int round = 0; round < 1500; ++round) {
    const Clause c = random_selection_clause(g);
    if (c.is_ground()) continue;
    std::vector<std::size_t> sel;
    for (std::size_t p = 0; p < c.size(); ++p)
      if (g.coin()) sel.push_back(p);
    if (sel.empty()) continue;
    const SelectionCheck r = validate_selection(c, sel, o);
    CAPTURE(c.to_string());
    CHECK(r.valid == brute_valid(c, sel, o));
    std::vector<Literal> sl;
    for (std::size_t p : sel) sl.push_back(c.literals[p]);
    // A valid selection covers the clause's variables.
    if (r.valid) CHECK(variables_of(sl) == c.variables());
    (r.valid ? valid : invalid)++;
  }
  CHECK(valid > 50);
  CHECK(invalid > 50);
}

TEST_CASE("covering all-negative and singleton-maximum selections validate") {
  Gen g(32);
  for (const OrderingSpec& o : orderings()) {
    int negatives = 0, maxima = 0;
    for (int round = 0; round < 1500; ++round) {
      const Clause c = random_selection_clause(g);
      if (c.is_ground()) continue;
      std::vector<std::size_t> neg;
      std::vector<Literal> nl;
      for (std::size_t p = 0; p < c.size(); ++p)
        if (!c.literals[p].positive) {
          neg.push_back(p);
          nl.push_back(c.literals[p]);
        }
      if (!neg.empty() && variables_of(nl) == c.variables()) {
        ++negatives;
        CHECK(validate_selection(c, neg, o).valid);
      }
      if (auto m = maximum_literal(o, c)) {
        const std::vector<Literal> ml = {c.literals[*m]};
        if (variables_of(ml) == c.variables()) {
          ++maxima;
          const std::vector<std::size_t> one = {*m};
          CHECK(validate_selection(c, one, o).valid);
        }
      }
    }
    CHECK(negatives > 20);
    CHECK(maxima > 20);
  }
}

// --- saturation ---------------------------------------------------------------

TEST_CASE("saturation is sound, idempotent and agrees with grounding") {
  Gen g(41);
  OrderingSpec o;
  o.kind = OrderingKind::SubtermProduct;
  o.precedence = {"r", "q", "p"};
  int saturated = 0;
  for (int round = 0; round < 150; ++round) {
    std::vector<Clause> theory;
    for (int i = 0; i < 2 + g.below(2); ++i) {
      Clause c = flat_clause(g, {"X", "Y"}, 3);
      if (c.is_ground()) continue;
      c.id = static_cast<ClauseId>(theory.size() + 1);
      theory.push_back(c);
    }
    SelectionMap sel;
    for (const Clause& c : theory)
      sel.set(c.id, auto_select(c, o, SelectionStrategy::AllLiterals).positions);
    SaturationOptions opts;
    opts.budget.max_clauses = 300;
    const SaturationReport r = saturate(theory, sel, o, opts);
    if (r.outcome == SaturationOutcome::BudgetExceeded) continue;

    Signature sig;
    sig.add_function("a", 0);
    sig.add_function("b", 0);
    std::vector<Clause> grounding;
    for (const Clause& c : theory)
      for (const Clause& i : enumerate_ground_instances(c, sig, 0)) grounding.push_back(i);
    const bool sat = oracle::truth_table(grounding).has_value();
    CAPTURE(round);
    CHECK((r.outcome == SaturationOutcome::DerivedBottom) == !sat);
    if (r.outcome != SaturationOutcome::Saturated) continue;
    ++saturated;
    // Ground conclusions belong to the saturated set as subsumers.
    std::vector<Clause> closed = r.clauses;
    closed.insert(closed.end(), r.ground.begin(), r.ground.end());
    CHECK(check_saturated(closed, r.selection, o).outcome == SaturationOutcome::Saturated);
    // Every retained clause is entailed by the input.
    for (const Clause& c : r.clauses)
      for (const Clause& inst : enumerate_ground_instances(c, sig, 0)) {
        std::vector<Clause> refute = grounding;
        for (const Literal& l : inst.literals) refute.push_back(oracle::clause({l.complement()}));
        CHECK_FALSE(oracle::truth_table(refute).has_value());
      }
  }
  CHECK(saturated > 30);
}

TEST_CASE("subsumption is reflexive and transitive on the corpora") {
  for (const char* name : {"subsumption", "settheory"}) {
    const std::vector<Clause> cs = load_corpus(name).clauses;
    for (const Clause& a : cs) {
      CHECK(subsumes(a, a));
      for (const Clause& b : cs)
        for (const Clause& c : cs)
          if (subsumes(a, b) && subsumes(b, c)) CHECK(subsumes(a, c));
    }
  }
}

// --- cdcl-engine -------------------------------------------------------------

TEST_CASE("engine verdicts match the truth table on random ground sets") {
  Gen g(51);
  for (int round = 0; round < 300; ++round) {
    const std::vector<Clause> cs = random_ground(g, 6, 4 + g.below(14), 3);
    Engine e({}, OrderingSpec{});
    for (const Clause& c : cs) e.add_ground_clause(c);
    const Verdict v = e.run();
    const bool sat = oracle::truth_table(cs).has_value();
    CHECK(v.kind == (sat ? VerdictKind::Sat : VerdictKind::Unsat));
    if (v.kind == VerdictKind::Sat) {
      std::map<Atom, bool> m;
      for (const Literal& l : v.model) m[l.atom] = l.positive;
      for (const Clause& c : cs) CHECK(oracle::holds(c, m));
    }
    const EngineStats& s = v.stats;
    CHECK(s.propagation_level_violations == 0);
    CHECK(s.conflict_level_violations == 0);
    CHECK(s.level0_learned_violations == 0);
    CHECK(s.short_conflict_violations == 0);
    CHECK(s.step_bound_violations == 0);
  }
}

TEST_CASE("solver with saturation agrees with grounding on function-free theories") {
  Gen g(52);
  int sat_count = 0, unsat_count = 0;
  for (int round = 0; round < 400; ++round) {
    std::ostringstream text;
    text << "%! order subterm\n%! precedence r>q>p\n%! select all\n";
    std::vector<Clause> all;
    for (int i = 0; i < 1 + g.below(2); ++i) {
      const Clause c = flat_clause(g, {"X", "Y"}, 3);
      all.push_back(c);
      text << c.to_string() << "\n";
    }
    for (int i = 0; i < 1 + g.below(3); ++i) {
      const Clause c = flat_clause(g, {}, 2);
      all.push_back(c);
      text << c.to_string() << "\n";
    }
    const Problem p = parse_problem(text.str());
    SolveOptions opts;
    opts.saturate = true;
    opts.saturation.max_clauses = 300;
    const SolveResult r = solve(p, opts);
    if (r.verdict.kind == VerdictKind::Unknown) continue;
    Signature sig;
    sig.add_function("a", 0);
    sig.add_function("b", 0);
    std::vector<Clause> grounding;
    for (const Clause& c : all)
      for (const Clause& i : enumerate_ground_instances(c, sig, 0)) grounding.push_back(i);
    const bool sat = oracle::truth_table(grounding).has_value();
    CAPTURE(text.str());
    CHECK(r.verdict.kind == (sat ? VerdictKind::Sat : VerdictKind::Unsat));
    (sat ? sat_count : unsat_count)++;
  }
  CHECK(sat_count > 20);
  CHECK(unsat_count > 20);
}

TEST_CASE("identical inputs give identical traces") {
  const Problem p = parse_problem(
      "%! order subterm\n"
      "~p(X1,Y1) | *q(f(X1),Y1)\n"
      "~q(X2,Y2) | *p(X2,f(Y2))\n"
      "~p(f(f(a)),f(f(b))) | ~p(f(a),f(f(b)))\n"
      "~p(a,f(b)) | p(b,b)\n");
  std::string first;
  for (int run = 0; run < 2; ++run) {
    std::ostringstream trace;
    SolveOptions o;
    o.engine.trace = &trace;
    solve(p, o);
    if (run == 0) first = trace.str();
    else CHECK(trace.str() == first);
  }
  CHECK_FALSE(first.empty());
}

// --- model-toolkit -----------------------------------------------------------

TEST_CASE("filtering a tautology yields nothing or a tautology") {
  Gen g(61);
  for (int round = 0; round < 500; ++round) {
    Clause c = random_ground(g, 4, 1, 3).front();
    const Literal l = g.pick(c.literals);
    c.literals.push_back(l.complement());
    REQUIRE(is_tautology(c));
    Interpretation i;
    for (int k = 0; k < 4; ++k) i.add(Literal{g.pick(c.literals).atom, g.coin()});
    const auto f = filter_clause(c, i);
    if (f) CHECK(is_tautology(*f));
  }
}

TEST_CASE("filtering preserves subsumption between ground instances") {
  Gen g(62);
  for (int round = 0; round < 500; ++round) {
    const Clause sub = random_ground(g, 4, 1, 2).front();
    Clause sup = sub;
    const Clause extra = random_ground(g, 4, 1, 2).front();
    sup.literals.insert(sup.literals.end(), extra.literals.begin(), extra.literals.end());
    Interpretation i;
    for (int k = 0; k < 4; ++k) i.add(Literal{g.pick(sup.literals).atom, g.coin()});
    const auto fd = filter_clause(sup, i);
    if (!fd) continue;
    const auto fc = filter_clause(sub, i);
    REQUIRE(fc);
    CHECK(subsumes(*fc, *fd));
  }
}

TEST_CASE("produced atoms are true in the final model") {
  Gen g(63);
  OrderingSpec o;
  o.kind = OrderingKind::SubtermProduct;
  for (int round = 0; round < 300; ++round) {
    std::vector<SelectedGroundClause> fs;
    for (const Clause& c : random_ground(g, 5, 1 + g.below(6), 3)) {
      std::vector<std::size_t> sel;
      for (std::size_t p = 0; p < c.size(); ++p)
        if (g.coin()) sel.push_back(p);
      fs.push_back({c, sel});
    }
    const ProductionResult r = produce_model(fs, o);
    for (const ProductionRecord& rec : r.records) {
      if (!rec.produced) continue;
      CHECK(r.model.value(*rec.produced) == std::optional<bool>{true});
      CHECK(r.model.satisfies(rec.clause));
    }
  }
}

// --- frontend ------------------------------------------------------------------

TEST_CASE("print then parse round-trips random clause sets") {
  Gen g(71);
  for (int round = 0; round < 200; ++round) {
    std::ostringstream text;
    for (int i = 0; i < 1 + g.below(4); ++i) {
      Clause c;
      for (int k = 1 + g.below(3); k > 0; --k)
        c.literals.push_back(Literal{g.atom(2, {"X", "Y"}, g.coin() ? "p" : "q"), g.coin()});
      std::vector<std::size_t> sel;
      if (!c.is_ground())
        for (std::size_t p = 0; p < c.size(); ++p)
          if (g.coin()) sel.push_back(p);
      text << print_clause(c, sel) << "\n";
    }
    const Problem p = parse_problem(text.str());
    const Problem q = parse_problem(print_problem(p));
    CHECK(print_problem(q) == print_problem(p));
    REQUIRE(q.clauses.size() == p.clauses.size());
    for (std::size_t i = 0; i < p.clauses.size(); ++i) CHECK(same_literals(q.clauses[i], p.clauses[i]));
  }
}
