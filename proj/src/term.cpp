#include "trigsat/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "trigsat/error.hpp"

namespace trigsat {

struct Term::Node {
  bool variable = false;
  std::string symbol;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  int depth = 0;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::variable(std::string name) {
  auto node = std::make_shared<Node>();
  node->variable = true;
  node->hash = mix(0x51ed27, std::hash<std::string>{}(name));
  node->symbol = std::move(name);
  node->ground = false;
  return Term(std::move(node));
}

Term Term::function(std::string symbol, std::vector<Term> args) {
  auto node = std::make_shared<Node>();
  std::size_t h = mix(0x7f4a7c15, std::hash<std::string>{}(symbol));
  int depth = -1;
  for (const Term& a : args) {
    h = mix(h, a.hash());
    node->size += a.size();
    depth = std::max(depth, a.depth());
    node->ground = node->ground && a.is_ground();
  }
  node->depth = args.empty() ? 0 : depth + 1;
  node->hash = mix(h, args.size());
  node->symbol = std::move(symbol);
  node->args = std::move(args);
  return Term(std::move(node));
}

bool Term::is_variable() const { return node_->variable; }
bool Term::is_ground() const { return node_->ground; }
const std::string& Term::symbol() const { return node_->symbol; }
std::span<const Term> Term::args() const { return node_->args; }
int Term::depth() const { return node_->depth; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }

bool Term::contains_variable(std::string_view name) const {
  if (node_->ground) return false;
  if (node_->variable) return node_->symbol == name;
  return std::any_of(node_->args.begin(), node_->args.end(),
                     [&](const Term& a) { return a.contains_variable(name); });
}

bool Term::has_subterm(const Term& t) const {
  if (*this == t) return true;
  if (t.size() >= size()) return false;
  return std::any_of(node_->args.begin(), node_->args.end(),
                     [&](const Term& a) { return a.has_subterm(t); });
}

void Term::collect_variables(std::set<std::string>& out) const {
  if (node_->ground) return;
  if (node_->variable) {
    out.insert(node_->symbol);
    return;
  }
  for (const Term& a : node_->args) a.collect_variables(out);
}

void Term::count_variables(std::map<std::string, int>& out) const {
  if (node_->ground) return;
  if (node_->variable) {
    ++out[node_->symbol];
    return;
  }
  for (const Term& a : node_->args) a.count_variables(out);
}

std::string Term::to_string() const {
  if (node_->args.empty()) return node_->symbol;
  std::string s = node_->symbol + "(";
  for (std::size_t i = 0; i < node_->args.size(); ++i) {
    if (i) s += ",";
    s += node_->args[i].to_string();
  }
  return s + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
  if (a.node_->variable != b.node_->variable || a.node_->symbol != b.node_->symbol) return false;
  return a.node_->args == b.node_->args;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  // Variables sort before applications.
  if (a.node_->variable != b.node_->variable)
    return a.node_->variable ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.node_->symbol <=> b.node_->symbol; c != 0) return c;
  if (auto c = a.node_->args.size() <=> b.node_->args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.node_->args.size(); ++i)
    if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Atom::Atom(std::string predicate, std::vector<Term> args)
    : app_(Term::function(std::move(predicate), std::move(args))) {}

std::string_view origin_name(Origin origin) {
  switch (origin) {
    case Origin::InputGround: return "input-ground";
    case Origin::InputNonGround: return "input-nonground";
    case Origin::Resolvent: return "resolvent";
    case Origin::Factor: return "factor";
    case Origin::Instance: return "instance";
    case Origin::Learned: return "learned";
  }
  return "?";
}

bool Clause::is_ground() const {
  return std::all_of(literals.begin(), literals.end(),
                     [](const Literal& l) { return l.is_ground(); });
}

bool Clause::is_horn() const {
  return std::count_if(literals.begin(), literals.end(),
                       [](const Literal& l) { return l.positive; }) <= 1;
}

std::set<std::string> Clause::variables() const { return variables_of(literals); }

std::string Clause::to_string() const {
  if (literals.empty()) return "[]";
  std::string s;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) s += " | ";
    s += literals[i].to_string();
  }
  return s;
}

bool same_literals(const Clause& a, const Clause& b) {
  if (a.size() != b.size()) return false;
  std::vector<Literal> x = a.literals;
  std::vector<Literal> y = b.literals;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

std::set<std::string> variables_of(std::span<const Literal> literals) {
  std::set<std::string> vars;
  for (const Literal& l : literals) l.atom.collect_variables(vars);
  return vars;
}

// ---------------------------------------------------------------------------
// Substitution

const Term* Substitution::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

void Substitution::bind(const std::string& var, Term t) {
  if (t.is_variable() && t.symbol() == var) {
    bindings_.erase(var);
    return;
  }
  bindings_.insert_or_assign(var, std::move(t));
}

std::set<std::string> Substitution::domain() const {
  std::set<std::string> d;
  for (const auto& [v, _] : bindings_) d.insert(v);
  return d;
}

Term Substitution::apply(const Term& t) const {
  if (t.is_ground() || bindings_.empty()) return t;
  if (t.is_variable()) {
    const Term* b = lookup(t.symbol());
    return b ? *b : t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(apply(a));
  return Term::function(t.symbol(), std::move(args));
}

Atom Substitution::apply(const Atom& a) const {
  if (a.is_ground() || bindings_.empty()) return a;
  return Atom(apply(a.as_term()));
}

Literal Substitution::apply(const Literal& l) const { return Literal{apply(l.atom), l.positive}; }

Clause Substitution::apply(const Clause& c) const {
  Clause out;
  out.id = c.id;
  out.origin = c.origin;
  out.literals.reserve(c.size());
  for (const Literal& l : c.literals) out.literals.push_back(apply(l));
  return out;
}

Substitution Substitution::compose(const Substitution& other) const {
  Substitution out;
  for (const auto& [v, t] : bindings_) out.bind(v, other.apply(t));
  for (const auto& [v, t] : other.bindings_)
    if (!bindings_.count(v)) out.bind(v, t);
  return out;
}

std::string Substitution::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [v, t] : bindings_) {
    if (!first) s += ", ";
    first = false;
    s += v + "->" + t.to_string();
  }
  return s + "}";
}

Clause apply(const Substitution& s, const Clause& c) { return s.apply(c); }

// ---------------------------------------------------------------------------
// Unification and matching

namespace {

// Follows variable bindings in a triangular substitution.
Term walk(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_variable()) {
    const Term* b = s.lookup(cur.symbol());
    if (!b) break;
    cur = *b;
  }
  return cur;
}

bool occurs(const std::string& var, const Term& t, const Substitution& s) {
  Term w = walk(t, s);
  if (w.is_variable()) return w.symbol() == var;
  for (const Term& a : w.args())
    if (occurs(var, a, s)) return true;
  return false;
}

Term resolve(const Term& t, const Substitution& s) {
  Term w = walk(t, s);
  if (w.is_variable() || w.is_ground()) return w;
  std::vector<Term> args;
  args.reserve(w.arity());
  for (const Term& a : w.args()) args.push_back(resolve(a, s));
  return Term::function(w.symbol(), std::move(args));
}

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  std::vector<std::pair<Term, Term>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = walk(x, s);
    y = walk(y, s);
    if (x == y) continue;
    if (x.is_variable()) {
      if (occurs(x.symbol(), y, s)) return false;
      s.bind(x.symbol(), y);
    } else if (y.is_variable()) {
      if (occurs(y.symbol(), x, s)) return false;
      s.bind(y.symbol(), x);
    } else {
      if (x.symbol() != y.symbol() || x.arity() != y.arity()) return false;
      for (std::size_t i = 0; i < x.arity(); ++i) work.emplace_back(x.args()[i], y.args()[i]);
    }
  }
  return true;
}

std::optional<Substitution> finish(const Substitution& triangular) {
  Substitution out;
  for (const auto& [v, t] : triangular.bindings()) out.bind(v, resolve(t, triangular));
  return out;
}

}  // namespace

std::optional<Substitution> unify_terms(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_into(a, b, s)) return std::nullopt;
  return finish(s);
}

std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (a.predicate() != b.predicate() || a.arity() != b.arity()) return std::nullopt;
  return unify_terms(a.as_term(), b.as_term());
}

bool extend_match(const Term& pattern, const Term& target, Substitution& theta) {
  if (pattern.is_variable()) {
    if (const Term* b = theta.lookup(pattern.symbol())) return *b == target;
    theta.bind(pattern.symbol(), target);
    return true;
  }
  if (pattern.is_ground()) return pattern == target;
  if (target.is_variable() || pattern.symbol() != target.symbol() ||
      pattern.arity() != target.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!extend_match(pattern.args()[i], target.args()[i], theta)) return false;
  return true;
}

bool extend_match(const Literal& pattern, const Literal& target, Substitution& theta) {
  if (pattern.positive != target.positive) return false;
  return extend_match(pattern.atom.as_term(), target.atom.as_term(), theta);
}

std::optional<Substitution> match_onto(const Literal& pattern, const Literal& target) {
  if (!target.is_ground()) throw ContractError("target not ground: " + target.to_string());
  Substitution theta;
  if (!extend_match(pattern, target, theta)) return std::nullopt;
  return theta;
}

Clause rename_variables(const Clause& c, std::string_view suffix) {
  Substitution s;
  for (const std::string& v : c.variables()) s.bind(v, Term::variable(v + std::string(suffix)));
  return s.apply(c);
}

Clause canonical_variables(const Clause& c) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  std::function<void(const Term&)> visit = [&](const Term& t) {
    if (t.is_ground()) return;
    if (t.is_variable()) {
      if (seen.insert(t.symbol()).second) order.push_back(t.symbol());
      return;
    }
    for (const Term& a : t.args()) visit(a);
  };
  for (const Literal& l : c.literals) visit(l.atom.as_term());
  Substitution s;
  for (std::size_t i = 0; i < order.size(); ++i)
    s.bind(order[i], Term::variable("X" + std::to_string(i + 1)));
  return s.apply(c);
}

// ---------------------------------------------------------------------------
// Signature and Herbrand enumeration

Signature Signature::harvest(std::span<const Clause> clauses) {
  Signature sig;
  std::function<void(const Term&)> visit = [&](const Term& t) {
    if (t.is_variable()) return;
    sig.add_function(t.symbol(), t.arity());
    for (const Term& a : t.args()) visit(a);
  };
  for (const Clause& c : clauses)
    for (const Literal& l : c.literals) {
      sig.add_predicate(l.atom.predicate(), l.atom.arity());
      for (const Term& a : l.atom.args()) visit(a);
    }
  if (!sig.has_constant()) {
    std::string name = "c0";
    for (int i = 1; sig.functions_.count(name); ++i) name = "c" + std::to_string(i);
    sig.add_function(name, 0);
    sig.injected_ = name;
  }
  return sig;
}

void Signature::add_function(const std::string& name, std::size_t arity) {
  auto [it, inserted] = functions_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw Error("function symbol " + name + " used with arities " + std::to_string(it->second) +
                " and " + std::to_string(arity));
}

void Signature::add_predicate(const std::string& name, std::size_t arity) {
  auto [it, inserted] = predicates_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw Error("predicate symbol " + name + " used with arities " + std::to_string(it->second) +
                " and " + std::to_string(arity));
}

bool Signature::has_constant() const {
  return std::any_of(functions_.begin(), functions_.end(),
                     [](const auto& f) { return f.second == 0; });
}

std::vector<Term> Signature::ground_terms(int max_depth) const {
  if (!has_constant()) throw Error("signature has no constant; the Herbrand universe is empty");
  if (max_depth < 0) return {};
  std::vector<Term> all;
  std::vector<std::size_t> depth_end;  // all[0, depth_end[d]) has depth <= d
  for (const auto& [name, arity] : functions_)
    if (arity == 0) all.push_back(Term::function(name));
  depth_end.push_back(all.size());
  for (int d = 1; d <= max_depth; ++d) {
    const std::size_t prev_end = depth_end.back();
    const std::size_t prev_begin = d >= 2 ? depth_end[d - 2] : 0;
    for (const auto& [name, arity] : functions_) {
      if (arity == 0) continue;
      // Argument tuples over terms of depth <= d-1 with at least one of depth d-1.
      std::vector<std::size_t> idx(arity, 0);
      while (true) {
        const bool deep = std::any_of(idx.begin(), idx.end(),
                                      [&](std::size_t i) { return i >= prev_begin; });
        if (deep) {
          std::vector<Term> args;
          args.reserve(arity);
          for (std::size_t i : idx) args.push_back(all[i]);
          all.push_back(Term::function(name, std::move(args)));
        }
        std::size_t k = arity;
        while (k > 0) {
          if (++idx[k - 1] < prev_end) break;
          idx[k - 1] = 0;
          --k;
        }
        if (k == 0) break;
      }
    }
    depth_end.push_back(all.size());
  }
  return all;
}

std::vector<Clause> enumerate_ground_instances(const Clause& c, const Signature& sig, int depth) {
  if (depth < 0) throw Error("depth must be non-negative");
  if (!sig.has_constant()) throw Error("signature has no constant; the Herbrand universe is empty");
  const std::set<std::string> var_set = c.variables();
  if (var_set.empty()) return {c};
  const std::vector<std::string> vars(var_set.begin(), var_set.end());
  const std::vector<Term> universe = sig.ground_terms(depth);
  std::vector<Clause> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], universe[idx[i]]);
    out.push_back(s.apply(c));
    std::size_t k = vars.size();
    while (k > 0) {
      if (++idx[k - 1] < universe.size()) break;
      idx[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

}  // namespace trigsat
