#include "trigsat/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "trigsat/error.hpp"

namespace trigsat {

namespace {

constexpr std::size_t kMaxReported = 16;

}  // namespace

Interpretation Interpretation::from_literals(std::span<const Literal> literals) {
  Interpretation i;
  for (const Literal& l : literals) {
    if (!l.is_ground()) throw ContractError("model literal not ground: " + l.to_string());
    if (!i.add(l)) throw ContractError("inconsistent model at " + l.atom.to_string());
  }
  return i;
}

bool Interpretation::add(const Literal& l) {
  auto [it, inserted] = values_.emplace(l.atom, l.positive);
  return inserted || it->second == l.positive;
}

std::optional<bool> Interpretation::value(const Atom& a) const {
  auto it = values_.find(a);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool Interpretation::satisfies(const Literal& l) const {
  auto v = value(l.atom);
  return v && *v == l.positive;
}

bool Interpretation::satisfies(const Clause& c) const {
  return std::any_of(c.literals.begin(), c.literals.end(),
                     [&](const Literal& l) { return satisfies(l); });
}

bool Interpretation::falsifies(const Clause& c) const {
  return std::all_of(c.literals.begin(), c.literals.end(),
                     [&](const Literal& l) { return falsifies(l); });
}

std::vector<Literal> Interpretation::literals() const {
  std::vector<Literal> out;
  for (const auto& [atom, positive] : values_) out.push_back(Literal{atom, positive});
  return out;
}

std::optional<Clause> filter_clause(const Clause& c, const Interpretation& i) {
  if (!c.is_ground()) throw ContractError("cannot filter non-ground clause " + c.to_string());
  if (i.satisfies(c)) return std::nullopt;
  Clause out = c;
  std::erase_if(out.literals, [&](const Literal& l) { return i.falsifies(l); });
  return out;
}

std::vector<Clause> filter_set(std::span<const Clause> s, const Interpretation& i) {
  std::vector<Clause> out;
  for (const Clause& c : s)
    if (auto f = filter_clause(c, i)) out.push_back(std::move(*f));
  return out;
}

Interpretation int_of(std::span<const Literal> t, std::span<const Literal> u) {
  Interpretation i;
  for (const Literal& l : t) {
    if (!l.positive) throw ContractError("Int expects positive literals, got " + l.to_string());
    i.add(l);
  }
  for (const Literal& l : u)
    if (!i.value(l.atom)) i.add(Literal{l.atom, false});
  return i;
}

std::vector<SelectedGroundClause> filtered_instances(std::span<const Clause> theory,
                                                     const SelectionMap& sel,
                                                     const Interpretation& ground_model,
                                                     const Signature& sig, int depth) {
  std::vector<SelectedGroundClause> out;
  for (const Clause& c : theory) {
    if (c.is_ground()) continue;
    const std::vector<std::size_t>& selected = sel.at(c.id);
    for (const Clause& inst : enumerate_ground_instances(c, sig, depth)) {
      if (ground_model.satisfies(inst)) continue;
      SelectedGroundClause f;
      f.clause.id = c.id;
      f.clause.origin = Origin::Instance;
      for (std::size_t p = 0; p < inst.size(); ++p) {
        if (ground_model.falsifies(inst.literals[p])) continue;
        if (std::binary_search(selected.begin(), selected.end(), p))
          f.selected.push_back(f.clause.size());
        f.clause.literals.push_back(inst.literals[p]);
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

ProductionResult produce_model(std::span<const SelectedGroundClause> fs, const OrderingSpec& o,
                               bool totalize) {
  for (const SelectedGroundClause& f : fs)
    if (!f.clause.is_ground()) throw ContractError("production needs ground clauses");
  auto cmp = [&](const Clause& a, const Clause& b) {
    return totalize ? compare_ground_clauses_total(o, a, b) : compare_clauses(o, a, b);
  };
  auto lit_cmp = [&](const Literal& a, const Literal& b) {
    return totalize ? compare_ground_literals_total(o, a, b) : compare_literals(o, a, b);
  };
  if (!totalize)
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        if (cmp(fs[i].clause, fs[j].clause) == Comparison::Incomparable)
          throw Error("ordering not total on ground clauses");

  std::vector<std::size_t> order(fs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cmp(fs[a].clause, fs[b].clause) == Comparison::Less;
  });

  ProductionResult result;
  std::set<Atom> produced;
  for (std::size_t idx : order) {
    const SelectedGroundClause& f = fs[idx];
    const Clause& c = f.clause;
    ProductionRecord rec{c, std::nullopt};
    // Every atom of C lies in the universe of M_<C, so a negative literal is
    // true exactly when its atom was not produced.
    const bool true_below = std::any_of(c.literals.begin(), c.literals.end(), [&](const Literal& l) {
      return produced.count(l.atom) != 0 ? l.positive : !l.positive;
    });
    if (!true_below && !c.empty()) {
      std::size_t top = 0;
      for (std::size_t p = 1; p < c.size(); ++p)
        if (lit_cmp(c.literals[p], c.literals[top]) == Comparison::Greater) top = p;
      const Literal& a = c.literals[top];
      const bool largest = std::all_of(c.literals.begin(), c.literals.end(), [&](const Literal& l) {
        return l == a || lit_cmp(l, a) == Comparison::Less;
      });
      const bool once = std::count(c.literals.begin(), c.literals.end(), a) == 1;
      const bool selected = std::any_of(f.selected.begin(), f.selected.end(), [&](std::size_t p) {
        return p < c.size() && c.literals[p] == a;
      });
      if (a.positive && largest && once && selected) {
        produced.insert(a.atom);
        rec.produced = a.atom;
      }
    }
    result.records.push_back(std::move(rec));
  }

  std::vector<Literal> t, u;
  for (const Atom& a : produced) t.push_back(Literal{a, true});
  for (const SelectedGroundClause& f : fs)
    u.insert(u.end(), f.clause.literals.begin(), f.clause.literals.end());
  result.model = int_of(t, u);
  return result;
}

VerificationReport verify_no_falsified(const Interpretation& combined,
                                       std::span<const Clause> theory,
                                       std::span<const Clause> ground, const Signature& sig,
                                       int depth) {
  if (depth < 0) throw ContractError("verification depth must be non-negative");
  VerificationReport r;
  auto check = [&](const Clause& c) {
    ++r.instances_checked;
    if (combined.falsifies(c) && r.falsified.size() < kMaxReported) r.falsified.push_back(c);
  };
  for (const Clause& c : ground) check(c);
  for (const Clause& c : theory) {
    if (c.is_ground()) {
      check(c);
      continue;
    }
    for (const Clause& inst : enumerate_ground_instances(c, sig, depth)) check(inst);
  }
  return r;
}

VerificationReport verify_no_falsified(const Interpretation& produced,
                                       const Interpretation& ground_model,
                                       std::span<const Clause> theory,
                                       std::span<const Clause> ground, const Signature& sig,
                                       int depth) {
  Interpretation combined = ground_model;
  std::vector<Atom> clashes;
  for (const Literal& l : produced.literals())
    if (!combined.add(l)) clashes.push_back(l.atom);
  VerificationReport r = verify_no_falsified(combined, theory, ground, sig, depth);
  r.clashes = std::move(clashes);
  return r;
}

Certificate certify(std::span<const Clause> theory, const SelectionMap& sel,
                    std::span<const Clause> ground, std::span<const Literal> ground_model,
                    const OrderingSpec& o, int depth) {
  std::vector<Clause> all(theory.begin(), theory.end());
  all.insert(all.end(), ground.begin(), ground.end());
  const Signature sig = Signature::harvest(all);
  const Interpretation mg = Interpretation::from_literals(ground_model);
  Certificate cert;
  cert.filtered = filtered_instances(theory, sel, mg, sig, depth);
  cert.production = produce_model(cert.filtered, o, true);
  cert.verification = verify_no_falsified(cert.production.model, mg, theory, ground, sig, depth);
  return cert;
}

}  // namespace trigsat
