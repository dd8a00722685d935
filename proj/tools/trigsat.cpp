#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "trigsat/error.hpp"
#include "trigsat/solver.hpp"

namespace {

using namespace trigsat;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Common {
  std::string file;
  std::string order;
  std::string precedence;
  bool dominant = false;
  std::string select;

  void add_to(CLI::App* app) {
    app->add_option("file", file, "Problem file")->required();
    app->add_option("--order", order, "Atom ordering")->check(CLI::IsMember({"weight", "subterm"}));
    app->add_option("--precedence", precedence, "Predicate precedence, e.g. p>q>r");
    app->add_flag("--precedence-dominant", dominant, "Compare predicates before weights");
    app->add_option("--select", select, "Selection strategy")
        ->check(CLI::IsMember({"annotated", "max", "maximal", "neg", "all"}));
  }

  void apply(SolveOptions& o) const {
    if (!order.empty())
      o.order = order == "subterm" ? OrderingKind::SubtermProduct : OrderingKind::WeightPrecedence;
    if (!precedence.empty()) o.precedence = parse_precedence(precedence);
    if (dominant) o.precedence_dominant = true;
    static const std::map<std::string, SelectionStrategy> strategies = {
        {"annotated", SelectionStrategy::Annotated}, {"max", SelectionStrategy::MaxLiteral},
        {"maximal", SelectionStrategy::AllMaximal},  {"neg", SelectionStrategy::AllNegative},
        {"all", SelectionStrategy::AllLiterals}};
    if (!select.empty()) o.select = strategies.at(select);
  }
};

void print_stats(const EngineStats& s) {
  std::cerr << "% decisions " << s.decisions << ", propagations " << s.propagations
            << ", conflicts " << s.conflicts << ", learned " << s.learned << ", instantiations "
            << s.instantiations << ", atoms " << s.atoms << ", ground clauses "
            << s.ground_clauses << "\n";
}

void write_model(std::ostream& out, const std::vector<Literal>& model) {
  for (const Literal& l : model) out << l.to_string() << "\n";
}

int run_solve(const Common& common, const SolveOptions& base, const std::string& emit_model,
              bool stats) {
  SolveOptions opts = base;
  common.apply(opts);
  const Problem p = parse_problem(read_file(common.file));
  const SolveResult r = solve(p, opts);
  std::cout << verdict_name(r.verdict.kind) << "\n";
  if (r.verdict.kind == VerdictKind::Unknown && !r.verdict.reason.empty())
    std::cout << "% " << r.verdict.reason << "\n";
  if (r.verdict.kind == VerdictKind::Sat && !emit_model.empty()) {
    if (emit_model == "-") {
      write_model(std::cout, r.verdict.model);
    } else {
      std::ofstream out(emit_model);
      if (!out) throw Error("cannot write '" + emit_model + "'");
      write_model(out, r.verdict.model);
    }
  }
  if (r.certificate) {
    const VerificationReport& v = r.certificate->verification;
    if (v.ok()) {
      std::cout << "% verified to depth " << opts.verify_depth << ": no falsified instance ("
                << v.instances_checked << " checked)\n";
    } else {
      for (const Atom& a : v.clashes) std::cout << "% clash on " << a.to_string() << "\n";
      for (const Clause& c : v.falsified) std::cout << "% falsified " << c.to_string() << "\n";
    }
  }
  if (stats) print_stats(r.verdict.stats);
  return 0;
}

int run_check_saturation(const Common& common) {
  SolveOptions opts;
  common.apply(opts);
  const Problem p = parse_problem(read_file(common.file));
  const OrderingSpec o = resolve_ordering(p, opts);
  const SelectionMap sel = resolve_selection(p, o, resolve_strategy(p, opts));
  const SaturationReport r = check_saturated(p.clauses, sel, o);
  std::cout << (r.violations.empty() ? "saturated" : "not saturated") << "\n";
  for (const Inference& inf : r.violations) std::cout << "% " << inf.to_string() << "\n";
  return 0;
}

int run_check_selection(const Common& common) {
  SolveOptions opts;
  common.apply(opts);
  const Problem p = parse_problem(read_file(common.file));
  const OrderingSpec o = resolve_ordering(p, opts);
  const SelectionStrategy strategy = resolve_strategy(p, opts);
  std::vector<std::string> lines;
  bool all_valid = true;
  for (const Clause& c : p.clauses) {
    if (c.is_ground()) continue;
    std::string line = "% #" + std::to_string(c.id) + " ";
    std::vector<std::size_t> positions;
    std::string failure;
    if (strategy == SelectionStrategy::Annotated) {
      if (p.selection.contains(c.id)) positions = p.selection.at(c.id);
      else failure = "no selected literal";
    } else {
      AutoSelection a = auto_select(c, o, strategy);
      positions = a.positions;
      failure = a.failure;
    }
    if (failure.empty()) {
      SelectionCheck check = validate_selection(c, positions, o);
      if (!check.valid) {
        failure = check.reason;
        if (!check.uncovered.empty()) {
          failure += " (";
          for (std::size_t i = 0; i < check.uncovered.size(); ++i)
            failure += (i ? ", " : "") + check.uncovered[i];
          failure += ")";
        }
      }
    }
    line += print_clause(c, positions);
    if (failure.empty()) {
      line += ": valid";
    } else {
      all_valid = false;
      line += ": invalid, " + failure;
    }
    lines.push_back(line);
  }
  std::cout << (all_valid ? "valid" : "invalid") << "\n";
  for (const std::string& l : lines) std::cout << l << "\n";
  return 0;
}

int run_verify_model(const std::string& file, const std::string& model_file, int depth) {
  const Problem p = parse_problem(read_file(file));
  const Interpretation m = Interpretation::from_literals(parse_literals(read_file(model_file)));
  const std::vector<Clause> theory = p.theory();
  const std::vector<Clause> ground = p.ground();
  const VerificationReport r = verify_no_falsified(m, theory, ground, p.signature(), depth);
  if (r.ok()) {
    std::cout << "no falsified instance\n";
  } else {
    std::cout << "falsified\n";
    for (const Clause& c : r.falsified) std::cout << "% " << c.to_string() << "\n";
  }
  std::cout << "% " << r.instances_checked << " clauses checked to depth " << depth << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trigger-based instantiation with CDCL for saturated first-order theories"};
  app.require_subcommand(1);

  Common solve_common, sat_common, sel_common;
  SolveOptions solve_opts;
  std::string instantiate = "lazy";
  std::string emit_model;
  bool trace = false;
  bool stats = false;
  double timeout = solve_opts.engine.timeout_seconds;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Decide a problem: prints sat, unsat or unknown");
  solve_common.add_to(solve_cmd);
  solve_cmd->add_option("--instantiate", instantiate, "When Instantiate runs")
      ->check(CLI::IsMember({"lazy", "eager"}));
  solve_cmd->add_option("--max-instantiations", solve_opts.engine.max_instantiations,
                        "Instantiation budget");
  solve_cmd->add_option("--max-clauses", solve_opts.saturation.max_clauses,
                        "Clause budget for saturation");
  solve_cmd->add_option("--max-conflicts", solve_opts.engine.max_conflicts, "Conflict budget");
  solve_cmd->add_option("--timeout", timeout, "Wall-clock budget in seconds");
  solve_cmd->add_option("--verify-depth", solve_opts.verify_depth,
                        "Certify a sat verdict on instances up to this depth");
  solve_cmd->add_flag("--trace", trace, "Print every rule application to stderr");
  solve_cmd->add_flag("--stats", stats, "Print engine counters to stderr");
  solve_cmd->add_option("--emit-model", emit_model, "Write the model to FILE, or - for stdout");
  solve_cmd->add_flag("--allow-unsaturated", solve_opts.allow_unsaturated,
                      "Run even if the theory is not saturated");
  solve_cmd->add_flag("--saturate", solve_opts.saturate, "Saturate the theory before solving");

  CLI::App* sat_cmd = app.add_subcommand("check-saturation", "Report Resolution/Factoring saturation");
  sat_common.add_to(sat_cmd);

  CLI::App* sel_cmd = app.add_subcommand("check-selection", "Validate the selection of every clause");
  sel_common.add_to(sel_cmd);

  std::string verify_file, model_file;
  int verify_depth = 3;
  CLI::App* verify_cmd = app.add_subcommand("verify-model", "Look for instances falsified by a model");
  verify_cmd->add_option("file", verify_file, "Problem file")->required();
  verify_cmd->add_option("model", model_file, "Model file, one literal per line")->required();
  verify_cmd->add_option("--verify-depth", verify_depth, "Maximum term depth of instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) {
      solve_opts.engine.mode =
          instantiate == "eager" ? InstantiationMode::Eager : InstantiationMode::Lazy;
      solve_opts.engine.timeout_seconds = timeout;
      solve_opts.saturation.timeout_seconds = timeout;
      if (trace) solve_opts.engine.trace = &std::cerr;
      return run_solve(solve_common, solve_opts, emit_model, stats);
    }
    if (*sat_cmd) return run_check_saturation(sat_common);
    if (*sel_cmd) return run_check_selection(sel_common);
    if (*verify_cmd) return run_verify_model(verify_file, model_file, verify_depth);
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
