#include "trigsat/selection.hpp"

#include <algorithm>
#include <numeric>

#include "trigsat/error.hpp"

namespace trigsat {

void SelectionMap::set(ClauseId id, std::vector<std::size_t> positions) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  map_[id] = std::move(positions);
}

const std::vector<std::size_t>& SelectionMap::at(ClauseId id) const {
  auto it = map_.find(id);
  if (it == map_.end()) throw ContractError("no selection for clause #" + std::to_string(id));
  return it->second;
}

bool SelectionMap::is_selected(ClauseId id, std::size_t position) const {
  auto it = map_.find(id);
  if (it == map_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), position);
}

std::string_view strategy_name(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::Annotated: return "annotated";
    case SelectionStrategy::MaxLiteral: return "max";
    case SelectionStrategy::AllMaximal: return "maximal";
    case SelectionStrategy::AllNegative: return "neg";
    case SelectionStrategy::AllLiterals: return "all";
  }
  return "?";
}

namespace {

std::set<std::string> vars_at(const Clause& c, std::span<const std::size_t> positions) {
  std::set<std::string> v;
  for (std::size_t p : positions) c.literals[p].atom.collect_variables(v);
  return v;
}

std::string positions_text(const Clause& c, std::span<const std::size_t> positions) {
  std::string s = "{";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) s += ", ";
    s += c.literals[positions[i]].to_string();
  }
  return s + "}";
}

}  // namespace

SelectionCheck validate_selection(const Clause& c, std::span<const std::size_t> selected,
                                  const OrderingSpec& o) {
  if (c.is_ground()) throw ContractError("selection applies to non-ground clauses only");
  std::vector<std::size_t> sel(selected.begin(), selected.end());
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  if (sel.size() > kMaxSelected)
    throw ContractError("selection of " + std::to_string(sel.size()) +
                        " literals exceeds the limit of " + std::to_string(kMaxSelected));
  for (std::size_t p : sel)
    if (p >= c.size()) throw ContractError("selected position out of range");

  const std::set<std::string> all_vars = c.variables();
  const std::size_t n = sel.size();
  // Subsets by increasing size so the smallest witness is reported.
  std::vector<unsigned> masks(1u << n);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  for (unsigned mask : masks) {
    std::vector<std::size_t> removed, kept;
    for (std::size_t i = 0; i < n; ++i) (mask >> i & 1u ? removed : kept).push_back(sel[i]);
    if (vars_at(c, removed) == all_vars) continue;
    const bool has_negative = std::any_of(kept.begin(), kept.end(), [&](std::size_t p) {
      return c.literals[p].is_negative();
    });
    if (has_negative) continue;
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < c.size(); ++p)
      if (!std::binary_search(removed.begin(), removed.end(), p)) rest.push_back(p);
    const std::vector<std::size_t> maximal = maximal_among(o, c, rest);
    const bool covers = std::all_of(maximal.begin(), maximal.end(), [&](std::size_t p) {
      return std::binary_search(kept.begin(), kept.end(), p);
    });
    if (covers) continue;

    SelectionCheck bad;
    bad.witness = removed;
    if (removed.size() == n) {
      const std::set<std::string> covered = vars_at(c, sel);
      for (const std::string& v : all_vars)
        if (!covered.count(v)) bad.uncovered.push_back(v);
      bad.reason = "selected literals do not cover all variables of the clause";
    } else {
      bad.reason = "removing " + positions_text(c, removed) + " leaves " +
                   positions_text(c, kept) + ", which has no negative literal and misses a "
                   "maximal literal of the rest";
    }
    return bad;
  }
  return SelectionCheck{true, {}, {}, {}};
}

AutoSelection auto_select(const Clause& c, const OrderingSpec& o, SelectionStrategy strategy) {
  if (c.is_ground()) throw ContractError("selection applies to non-ground clauses only");
  AutoSelection out;
  const std::set<std::string> all_vars = c.variables();
  auto uncovered_by = [&](const std::vector<std::size_t>& positions) {
    std::vector<std::string> missing;
    const std::set<std::string> covered = vars_at(c, positions);
    for (const std::string& v : all_vars)
      if (!covered.count(v)) missing.push_back(v);
    return missing;
  };

  switch (strategy) {
    case SelectionStrategy::Annotated:
      throw ContractError("annotated selection is not an automatic strategy");
    case SelectionStrategy::MaxLiteral: {
      auto m = maximum_literal(o, c);
      if (!m) {
        out.failure = "clause has no maximum literal";
        return out;
      }
      out.positions = {*m};
      break;
    }
    case SelectionStrategy::AllMaximal:
      out.positions = maximal_literals(o, c);
      break;
    case SelectionStrategy::AllNegative:
      for (std::size_t p = 0; p < c.size(); ++p)
        if (c.literals[p].is_negative()) out.positions.push_back(p);
      if (out.positions.empty()) {
        out.failure = "clause has no negative literal";
        return out;
      }
      break;
    case SelectionStrategy::AllLiterals:
      out.positions.resize(c.size());
      std::iota(out.positions.begin(), out.positions.end(), 0);
      break;
  }

  out.uncovered = uncovered_by(out.positions);
  if (!out.uncovered.empty()) {
    out.failure = std::string(strategy_name(strategy)) + " selection " +
                  positions_text(c, out.positions) + " does not cover all variables";
    return out;
  }
  if (out.positions.size() > kMaxSelected) {
    out.failure = "selection exceeds " + std::to_string(kMaxSelected) + " literals";
    return out;
  }
  SelectionCheck check = validate_selection(c, out.positions, o);
  if (!check.valid) {
    out.failure = check.reason;
    out.witness = check.witness;
  }
  return out;
}

AutoSelection select_derived(const Clause& c, const OrderingSpec& o, SelectionStrategy strategy) {
  if (strategy != SelectionStrategy::Annotated) return auto_select(c, o, strategy);
  AutoSelection last;
  for (SelectionStrategy s : {SelectionStrategy::MaxLiteral, SelectionStrategy::AllMaximal,
                              SelectionStrategy::AllNegative, SelectionStrategy::AllLiterals}) {
    last = auto_select(c, o, s);
    if (last.ok()) return last;
  }
  return last;
}

}  // namespace trigsat
