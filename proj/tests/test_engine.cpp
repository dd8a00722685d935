#include <sstream>

#include "doctest.h"
#include "trigsat/engine.hpp"
#include "trigsat/error.hpp"
#include "trigsat/problem.hpp"

using namespace trigsat;

namespace {

std::vector<TheoryClause> theory_of(const Problem& p) {
  std::vector<TheoryClause> out;
  for (const Clause& c : p.theory()) out.push_back(TheoryClause{c, p.selection.at(c.id)});
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

bool has_clause(const Engine& e, std::string_view text) {
  for (const Clause& c : e.ground_clauses())
    if (c.to_string() == text) return true;
  return false;
}

const char* const kTrig1 =
    "%! order subterm\n"
    "~p(X1,Y1) | *q(f(X1),Y1)\n"
    "~q(X2,Y2) | *p(X2,f(Y2))\n"
    "~p(f(a),f(b))\n";

}  // namespace

TEST_CASE("rules step by step on the first trigger theory") {
  const Problem p = parse_problem(kTrig1);
  Engine e(theory_of(p), p.options.ordering());
  for (const Clause& g : p.ground()) e.add_ground_clause(g);

  CHECK_FALSE(e.detect_conflict());
  REQUIRE(e.propagate());
  CHECK(e.trail().front().literal.to_string() == "~p(f(a),f(b))");
  CHECK(e.trail().front().level == 0);
  CHECK_FALSE(e.propagate());

  REQUIRE(e.instantiate_step());
  CHECK(has_clause(e, "~q(f(a),b) | p(f(a),f(b))"));
  REQUIRE(e.propagate());
  CHECK(e.trail().front().literal.to_string() == "~q(f(a),b)");

  REQUIRE(e.instantiate_step());
  CHECK(has_clause(e, "~p(a,b) | q(f(a),b)"));
  REQUIRE(e.propagate());
  CHECK(e.trail().front().literal.to_string() == "~p(a,b)");

  CHECK_FALSE(e.instantiate_step());
  CHECK(e.all_assigned());
  CHECK(e.can_succeed());
  CHECK(e.stats().instantiations == 2);
}

TEST_CASE("run on the first trigger theory traces C4 then C5") {
  const Problem p = parse_problem(kTrig1);
  std::ostringstream trace;
  EngineOptions opts;
  opts.trace = &trace;
  Engine e(theory_of(p), p.options.ordering(), opts);
  for (const Clause& g : p.ground()) e.add_ground_clause(g);
  const Verdict v = e.run();
  REQUIRE(v.kind == VerdictKind::Sat);
  std::vector<std::string> inst;
  for (const std::string& l : lines(trace.str()))
    if (l.rfind("instantiate", 0) == 0) inst.push_back(l);
  REQUIRE(inst.size() == 2);
  CHECK(inst[0].find("#2") != std::string::npos);
  CHECK(inst[1].find("#1") != std::string::npos);
  std::set<std::string> model;
  for (const Literal& l : v.model) model.insert(l.to_string());
  CHECK(model == std::set<std::string>{"~p(f(a),f(b))", "~q(f(a),b)", "~p(a,b)"});
}

TEST_CASE("the trap theory triggers no instance") {
  const Problem p = parse_problem(
      "%! order subterm\n"
      "~p(X1,Y1) | *q(f(X1),Y1)\n"
      "~*q(X2,Y2) | p(X2,f(Y2))\n"
      "~p(f(a),f(b))\n"
      "p(a,b)\n");
  Engine e(theory_of(p), p.options.ordering());
  for (const Clause& g : p.ground()) e.add_ground_clause(g);
  const Verdict v = e.run();
  CHECK(v.kind == VerdictKind::Sat);
  CHECK(v.stats.instantiations == 0);
  // The pipeline refuses the unsaturated theory instead.
  const std::vector<Clause> th = p.theory(), gr = p.ground();
  CHECK_THROWS_AS(run(th, p.selection, gr, p.options.ordering()), ContractError);
}

TEST_CASE("decide, conflict, backjump and learn") {
  Engine e({}, OrderingSpec{});
  e.add_ground_clause(parse_clause("p(a) | p(f(a))"));
  e.add_ground_clause(parse_clause("p(a) | ~p(f(a))"));
  CHECK_FALSE(e.propagate());
  e.decide();
  CHECK(e.level() == 1);
  CHECK(e.trail().front().literal.to_string() == "~p(a)");
  CHECK_FALSE(e.trail().front().reason);
  REQUIRE(e.propagate());
  CHECK(e.trail().front().literal.to_string() == "p(f(a))");
  REQUIRE(e.detect_conflict());
  CHECK(e.conflict_clause()->to_string() == "p(a) | ~p(f(a))");
  REQUIRE(e.backjump_step());
  CHECK(e.conflict_clause()->to_string() == "p(a)");
  CHECK_FALSE(e.backjump_step());
  REQUIRE(e.learn());
  CHECK(e.level() == 0);
  CHECK_FALSE(e.conflict_clause());
  CHECK(has_clause(e, "p(a)"));
  REQUIRE(e.propagate());
  CHECK(e.trail().front().literal.to_string() == "p(a)");
  CHECK(e.trail().front().level == 0);
}

TEST_CASE("decide outside its guard throws") {
  Engine e({}, OrderingSpec{});
  e.add_ground_clause(parse_clause("p(a) | p(f(a))"));
  e.decide();
  CHECK_THROWS_AS(e.decide(), ContractError);
  REQUIRE(e.propagate());
  CHECK_THROWS_AS(e.decide(), ContractError);  // every atom assigned
}

TEST_CASE("sort_clause puts undefined literals first, then newest") {
  Engine e({}, OrderingSpec{});
  e.add_ground_clause(parse_clause("p(a) | p(f(a)) | p(b)"));
  e.add_ground_clause(parse_clause("~p(a) | ~p(b)"));
  e.decide();  // ~p(a)
  const std::string first = e.trail().front().literal.atom.to_string();
  e.decide();
  const std::string second = e.trail().front().literal.atom.to_string();
  const Clause s = e.sort_clause(parse_clause("p(a) | p(f(a)) | p(b)"));
  REQUIRE(s.size() == 3);
  CHECK(s.literals[1].atom.to_string() == second);
  CHECK(s.literals[2].atom.to_string() == first);
}

TEST_CASE("a unit instance truncates the trail and refutes") {
  const Problem p = parse_problem("*g(s(X),X)\n~*g(X,X)\ng(a,b)\ng(c,c)\n");
  Engine e(theory_of(p), p.options.ordering());
  for (const Clause& g : p.ground()) e.add_ground_clause(g);
  const Verdict v = e.run();
  CHECK(v.kind == VerdictKind::Unsat);
  CHECK(v.stats.instantiations >= 1);
}

TEST_CASE("example one is satisfiable without instances") {
  const Problem p = parse_problem("*g(s(X),X)\n~*g(X,X)\ng(a,b)\n");
  Engine e(theory_of(p), p.options.ordering());
  for (const Clause& g : p.ground()) e.add_ground_clause(g);
  const Verdict v = e.run();
  REQUIRE(v.kind == VerdictKind::Sat);
  REQUIRE(v.model.size() == 1);
  CHECK(v.model[0].to_string() == "g(a,b)");
}

TEST_CASE("ground refutations") {
  for (const char* text : {"[]\n", "p(a)\n~p(a)\n", "p | q\n~p | q\np | ~q\n~p | ~q\n"}) {
    CAPTURE(text);
    const Problem p = parse_problem(text);
    Engine e({}, OrderingSpec{});
    for (const Clause& g : p.ground()) e.add_ground_clause(g);
    const Verdict v = e.run();
    CHECK(v.kind == VerdictKind::Unsat);
    CHECK(v.stats.level0_learned_violations == 0);
    CHECK(v.stats.short_conflict_violations == 0);
  }
}

TEST_CASE("duplicate ground clauses and literals are merged") {
  Engine e({}, OrderingSpec{});
  CHECK(e.add_ground_clause(parse_clause("p(a) | p(a) | q(a)")));
  CHECK_FALSE(e.add_ground_clause(parse_clause("q(a) | p(a)")));
  CHECK(e.ground_clauses().size() == 1);
  CHECK(e.ground_clauses()[0].size() == 2);
}

TEST_CASE("divergent theory stops on the instantiation budget") {
  const Problem p = parse_problem(
      "%! order subterm\n"
      "~*p(X1,Y1) | q(f(X1),Y1)\n"
      "~*q(X2,Y2) | p(X2,f(Y2))\n"
      "p(a,a)\n");
  EngineOptions opts;
  opts.max_instantiations = 200;
  Engine e(theory_of(p), p.options.ordering(), opts);
  for (const Clause& g : p.ground()) e.add_ground_clause(g);
  const Verdict v = e.run();
  CHECK(v.kind == VerdictKind::Unknown);
  CHECK(v.reason.find("instantiation budget") != std::string::npos);
}

TEST_CASE("eager and lazy instantiation agree") {
  const Problem p = parse_problem(kTrig1);
  for (InstantiationMode m : {InstantiationMode::Lazy, InstantiationMode::Eager}) {
    EngineOptions opts;
    opts.mode = m;
    Engine e(theory_of(p), p.options.ordering(), opts);
    for (const Clause& g : p.ground()) e.add_ground_clause(g);
    CHECK(e.run().kind == VerdictKind::Sat);
  }
}
