#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trigsat/ordering.hpp"
#include "trigsat/term.hpp"

namespace trigsat {

/// Selected literal positions per non-ground clause. The same map drives
/// resolution (selection) and instantiation (triggers).
class SelectionMap {
 public:
  void set(ClauseId id, std::vector<std::size_t> positions);
  bool contains(ClauseId id) const { return map_.count(id) != 0; }
  /// Throws ContractError when the clause has no entry.
  const std::vector<std::size_t>& at(ClauseId id) const;
  bool is_selected(ClauseId id, std::size_t position) const;
  std::size_t size() const { return map_.size(); }
  const std::map<ClauseId, std::vector<std::size_t>>& entries() const { return map_; }

 private:
  std::map<ClauseId, std::vector<std::size_t>> map_;
};

enum class SelectionStrategy {
  Annotated,   ///< taken from the input (`*` markers)
  MaxLiteral,  ///< the single maximum literal
  AllMaximal,  ///< every maximal literal
  AllNegative, ///< every negative literal
  AllLiterals, ///< the whole clause; always valid
};

std::string_view strategy_name(SelectionStrategy s);

/// Largest selected set validate_selection accepts (2^8 subsets).
inline constexpr std::size_t kMaxSelected = 8;

struct SelectionCheck {
  bool valid = false;
  std::string reason;
  /// The subset T of selected positions that violates the condition.
  std::vector<std::size_t> witness;
  /// Clause variables not covered by the selection, when that is the cause.
  std::vector<std::string> uncovered;
};

/// Checks that for every T within `selected` whose variables differ from the
/// clause's, selected - T holds a negative literal or every maximal literal
/// of C - T. Throws ContractError for ground clauses or |selected| > 8.
SelectionCheck validate_selection(const Clause& c, std::span<const std::size_t> selected,
                                  const OrderingSpec& o);

struct AutoSelection {
  std::vector<std::size_t> positions;
  /// Empty on success.
  std::string failure;
  std::vector<std::string> uncovered;
  std::vector<std::size_t> witness;

  bool ok() const { return failure.empty(); }
};

/// Selection by strategy; successful results always validate. Annotated is
/// not an auto strategy and is rejected with ContractError.
AutoSelection auto_select(const Clause& c, const OrderingSpec& o, SelectionStrategy strategy);

/// Selection for clauses derived during saturation. With `strategy` set to
/// Annotated, tries MaxLiteral, AllMaximal, AllNegative and AllLiterals in turn.
AutoSelection select_derived(const Clause& c, const OrderingSpec& o, SelectionStrategy strategy);

}  // namespace trigsat
