#include "corpus_data.hpp"
#include "trigsat/error.hpp"
#include "trigsat/problem.hpp"

namespace trigsat {

Problem load_corpus(std::string_view name) {
  if (name == "subsumption") return parse_problem(corpus_data::kSubsumption);
  if (name == "settheory") return parse_problem(corpus_data::kSettheory);
  throw Error("unknown corpus '" + std::string(name) + "' (expected subsumption or settheory)");
}

}  // namespace trigsat
