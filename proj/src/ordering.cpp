#include "trigsat/ordering.hpp"

#include <algorithm>
#include <numeric>

#include "trigsat/error.hpp"

namespace trigsat {

std::string_view comparison_name(Comparison c) {
  switch (c) {
    case Comparison::Less: return "LT";
    case Comparison::Greater: return "GT";
    case Comparison::Equal: return "EQ";
    case Comparison::Incomparable: return "INCOMPARABLE";
  }
  return "?";
}

Comparison reverse(Comparison c) {
  if (c == Comparison::Less) return Comparison::Greater;
  if (c == Comparison::Greater) return Comparison::Less;
  return c;
}

std::string_view ordering_name(OrderingKind kind) {
  return kind == OrderingKind::WeightPrecedence ? "weight" : "subterm";
}

int OrderingSpec::weight(const std::string& symbol) const {
  auto it = weights.find(symbol);
  return it == weights.end() ? 1 : it->second;
}

int OrderingSpec::compare_predicates(const std::string& p, const std::string& q) const {
  if (p == q) return 0;
  auto pi = std::find(precedence.begin(), precedence.end(), p);
  auto qi = std::find(precedence.begin(), precedence.end(), q);
  const bool pl = pi != precedence.end();
  const bool ql = qi != precedence.end();
  if (pl && ql) return pi < qi ? 1 : -1;
  if (pl != ql) return pl ? 1 : -1;
  return p < q ? -1 : 1;
}

bool OrderingSpec::omega_isomorphic() const {
  return !(kind == OrderingKind::WeightPrecedence && precedence_dominant);
}

std::string OrderingSpec::describe() const {
  std::string s(ordering_name(kind));
  if (!precedence.empty()) {
    s += " precedence ";
    for (std::size_t i = 0; i < precedence.size(); ++i) s += (i ? ">" : "") + precedence[i];
  }
  if (precedence_dominant) s += " (precedence-dominant)";
  return s;
}

std::vector<std::string> parse_precedence(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == '>') {
      if (cur.empty()) throw Error("empty symbol in precedence '" + std::string(text) + "'");
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

namespace {

// Total order on function symbols used as a KBO tie-break.
int compare_function_symbols(const Term& a, const Term& b) {
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  if (a.symbol() == b.symbol()) return 0;
  return a.symbol() < b.symbol() ? -1 : 1;
}

long weight_of(const OrderingSpec& o, const Term& t) {
  if (t.is_variable()) return 1;
  long w = o.weight(t.symbol());
  for (const Term& a : t.args()) w += weight_of(o, a);
  return w;
}

// Every variable occurs in `big` at least as often as in `small`.
bool variables_dominate(const Term& big, const Term& small) {
  std::map<std::string, int> cb, cs;
  big.count_variables(cb);
  small.count_variables(cs);
  for (const auto& [v, n] : cs) {
    auto it = cb.find(v);
    if (it == cb.end() || it->second < n) return false;
  }
  return true;
}

Comparison guarded(Comparison c, const Term& a, const Term& b) {
  if (c == Comparison::Greater) return variables_dominate(a, b) ? c : Comparison::Incomparable;
  if (c == Comparison::Less) return variables_dominate(b, a) ? c : Comparison::Incomparable;
  return c;
}

// Knuth-Bendix comparison; `head_cmp` orders the root symbols when weights tie.
template <class HeadCmp>
Comparison kbo(const OrderingSpec& o, const Term& a, const Term& b, HeadCmp head_cmp) {
  if (a == b) return Comparison::Equal;
  if (a.is_variable())
    return b.contains_variable(a.symbol()) ? Comparison::Less : Comparison::Incomparable;
  if (b.is_variable())
    return a.contains_variable(b.symbol()) ? Comparison::Greater : Comparison::Incomparable;
  const long wa = weight_of(o, a);
  const long wb = weight_of(o, b);
  if (wa != wb) return guarded(wa > wb ? Comparison::Greater : Comparison::Less, a, b);
  if (int h = head_cmp(a, b); h != 0)
    return guarded(h > 0 ? Comparison::Greater : Comparison::Less, a, b);
  for (std::size_t i = 0; i < a.arity(); ++i) {
    Comparison c = kbo(o, a.args()[i], b.args()[i], compare_function_symbols);
    if (c == Comparison::Equal) continue;
    if (c == Comparison::Incomparable) return c;
    return guarded(c, a, b);
  }
  return Comparison::Equal;
}

Comparison compare_weight_precedence(const OrderingSpec& o, const Atom& a, const Atom& b) {
  if (o.precedence_dominant && a.predicate() != b.predicate())
    return o.compare_predicates(a.predicate(), b.predicate()) > 0 ? Comparison::Greater
                                                                  : Comparison::Less;
  auto head = [&](const Term& x, const Term& y) {
    int p = o.compare_predicates(x.symbol(), y.symbol());
    if (p != 0) return p;
    return x.arity() == y.arity() ? 0 : (x.arity() < y.arity() ? -1 : 1);
  };
  return kbo(o, a.as_term(), b.as_term(), head);
}

Comparison compare_subterm_product(const OrderingSpec& o, const Atom& a, const Atom& b) {
  if (a == b) return Comparison::Equal;
  if (a.arity() != b.arity()) return Comparison::Incomparable;
  bool a_below = true, b_below = true, identical = true;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const Term& s = a.args()[i];
    const Term& t = b.args()[i];
    if (s == t) continue;
    identical = false;
    if (!t.has_subterm(s)) a_below = false;
    if (!s.has_subterm(t)) b_below = false;
  }
  if (identical) {
    int p = o.compare_predicates(a.predicate(), b.predicate());
    return p > 0 ? Comparison::Greater : Comparison::Less;
  }
  if (a_below) return Comparison::Less;
  if (b_below) return Comparison::Greater;
  return Comparison::Incomparable;
}

template <class LitCmp>
Comparison multiset_compare(const Clause& a, const Clause& b, LitCmp cmp) {
  std::vector<Literal> x = a.literals;
  std::vector<Literal> y = b.literals;
  for (auto it = x.begin(); it != x.end();) {
    auto m = std::find(y.begin(), y.end(), *it);
    if (m != y.end()) {
      y.erase(m);
      it = x.erase(it);
    } else {
      ++it;
    }
  }
  if (x.empty() && y.empty()) return Comparison::Equal;
  auto dominates = [&](const std::vector<Literal>& big, const std::vector<Literal>& small) {
    return std::all_of(small.begin(), small.end(), [&](const Literal& s) {
      return std::any_of(big.begin(), big.end(),
                         [&](const Literal& g) { return cmp(g, s) == Comparison::Greater; });
    });
  };
  if (!x.empty() && dominates(x, y)) return Comparison::Greater;
  if (!y.empty() && dominates(y, x)) return Comparison::Less;
  return Comparison::Incomparable;
}

Comparison ground_term_total(const OrderingSpec& o, const Term& a, const Term& b) {
  return kbo(o, a, b, compare_function_symbols);
}

}  // namespace

Comparison compare_atoms(const OrderingSpec& o, const Atom& a, const Atom& b) {
  if (o.kind == OrderingKind::WeightPrecedence) return compare_weight_precedence(o, a, b);
  return compare_subterm_product(o, a, b);
}

Comparison compare_literals(const OrderingSpec& o, const Literal& a, const Literal& b) {
  Comparison c = compare_atoms(o, a.atom, b.atom);
  if (c != Comparison::Equal) return c;
  if (a.positive == b.positive) return Comparison::Equal;
  return a.positive ? Comparison::Less : Comparison::Greater;
}

Comparison compare_clauses(const OrderingSpec& o, const Clause& a, const Clause& b) {
  return multiset_compare(a, b, [&](const Literal& x, const Literal& y) {
    return compare_literals(o, x, y);
  });
}

Comparison compare_ground_atoms_total(const OrderingSpec& o, const Atom& a, const Atom& b) {
  if (o.kind == OrderingKind::WeightPrecedence) return compare_weight_precedence(o, a, b);
  // Extension of the subterm product: argument size, then arguments, then
  // predicate precedence. A strict subterm step always shrinks the size.
  if (a == b) return Comparison::Equal;
  auto arg_size = [](const Atom& x) {
    std::size_t n = 0;
    for (const Term& t : x.args()) n += t.size();
    return n;
  };
  const std::size_t sa = arg_size(a);
  const std::size_t sb = arg_size(b);
  if (sa != sb) return sa < sb ? Comparison::Less : Comparison::Greater;
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? Comparison::Less : Comparison::Greater;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    Comparison c = ground_term_total(o, a.args()[i], b.args()[i]);
    if (c != Comparison::Equal) return c;
  }
  return o.compare_predicates(a.predicate(), b.predicate()) > 0 ? Comparison::Greater
                                                                : Comparison::Less;
}

Comparison compare_ground_literals_total(const OrderingSpec& o, const Literal& a,
                                         const Literal& b) {
  Comparison c = compare_ground_atoms_total(o, a.atom, b.atom);
  if (c != Comparison::Equal) return c;
  if (a.positive == b.positive) return Comparison::Equal;
  return a.positive ? Comparison::Less : Comparison::Greater;
}

Comparison compare_ground_clauses_total(const OrderingSpec& o, const Clause& a, const Clause& b) {
  return multiset_compare(a, b, [&](const Literal& x, const Literal& y) {
    return compare_ground_literals_total(o, x, y);
  });
}

std::vector<std::size_t> maximal_among(const OrderingSpec& o, const Clause& c,
                                       std::span<const std::size_t> positions) {
  std::vector<std::size_t> out;
  for (std::size_t i : positions) {
    bool dominated = std::any_of(positions.begin(), positions.end(), [&](std::size_t j) {
      return j != i && compare_literals(o, c.literals[j], c.literals[i]) == Comparison::Greater;
    });
    if (!dominated) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> maximal_literals(const OrderingSpec& o, const Clause& c) {
  if (c.empty()) throw ContractError("maximal literals of the empty clause");
  std::vector<std::size_t> all(c.size());
  std::iota(all.begin(), all.end(), 0);
  return maximal_among(o, c, all);
}

std::optional<std::size_t> maximum_literal(const OrderingSpec& o, const Clause& c) {
  if (c.empty()) throw ContractError("maximum literal of the empty clause");
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool above_all = true;
    for (std::size_t j = 0; j < c.size() && above_all; ++j)
      if (j != i && compare_literals(o, c.literals[i], c.literals[j]) != Comparison::Greater)
        above_all = false;
    if (above_all) return i;
  }
  return std::nullopt;
}

}  // namespace trigsat
