// fmfind: finite model finder for multi-sorted first-order logic.
//
// Exit codes: 0 on a verdict (Satisfiable / Unsatisfiable / ResourceOut),
// 1 on parse or sort errors, 2 on internal errors.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fmf/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string input;
  std::string mode = "pointwise";
  bool no_constraints = false;
  bool no_collapse = false;
  bool no_expand = false;
  bool no_bounds = false;
  bool no_symmetry = false;
  bool no_definitions = false;
  bool no_splitting = false;
  bool no_verify = false;
  bool keep_conjecture = false;
  int split_max_vars = 4;
  double time_limit = 60.0;
  std::uint64_t clause_cap = 50'000'000;
  std::string trace_path;
  std::string dimacs_path;
  bool stats = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("input", f.input, "problem file (TPTP subset)")->required();
  cmd->add_option("--mode", f.mode, "search strategy: pointwise or contour")
      ->check(CLI::IsMember({"pointwise", "contour"}));
  cmd->add_flag("--no-constraints", f.no_constraints,
                "plain encodings, no core learning");
  cmd->add_flag("--no-collapse", f.no_collapse, "keep monotonic sorts separate");
  cmd->add_flag("--no-expand", f.no_expand, "do not expand inferred subsorts");
  cmd->add_flag("--no-bounds", f.no_bounds, "skip inter-sort bound detection");
  cmd->add_flag("--no-symmetry", f.no_symmetry, "skip symmetry breaking");
  cmd->add_flag("--no-definitions", f.no_definitions,
                "skip ground definition introduction");
  cmd->add_flag("--no-splitting", f.no_splitting, "skip clause splitting");
  cmd->add_flag("--no-verify", f.no_verify, "skip model verification");
  cmd->add_flag("--keep-conjecture", f.keep_conjecture,
                "treat conjectures as axioms instead of negating them");
  cmd->add_option("--split-max-vars", f.split_max_vars,
                  "split clauses with more variables than this");
  cmd->add_option("--time-limit", f.time_limit, "wall clock budget in seconds");
  cmd->add_option("--clause-cap", f.clause_cap, "per-encoding clause budget");
  cmd->add_option("--trace", f.trace_path, "write the search trace to a file");
  cmd->add_option("--dimacs", f.dimacs_path,
                  "dump the final encoding in DIMACS CNF");
  cmd->add_flag("--stats", f.stats, "print search statistics");
}

fmf::PipelineConfig to_config(const CommonFlags& f) {
  fmf::PipelineConfig c;
  c.mode = f.mode == "contour" ? fmf::EncodingMode::Contour
                               : fmf::EncodingMode::Pointwise;
  c.constraints = !f.no_constraints;
  c.collapse_monotonic_sorts = !f.no_collapse;
  c.expand_subsort_sorts = !f.no_expand;
  c.bounds_detection = !f.no_bounds;
  c.symmetry = !f.no_symmetry;
  c.definitions = !f.no_definitions;
  c.splitting = !f.no_splitting;
  c.verify_models = !f.no_verify;
  c.negate_conjectures = !f.keep_conjecture;
  c.split_max_vars = f.split_max_vars;
  c.time_limit_seconds = f.time_limit;
  c.clause_cap = f.clause_cap;
  c.trace = !f.trace_path.empty();
  return c;
}

void print_stats(const fmf::PipelineResult& r) {
  std::cout << "% stats checked=" << r.search_stats.nodes_checked
            << " ignored=" << r.search_stats.nodes_ignored
            << " pruned=" << r.search_stats.nodes_pruned
            << " learned=" << r.search_stats.constraints_learned;
  if (r.status == fmf::PipelineResult::Status::Satisfiable) {
    const fmf::EncodingStats& s = r.final_encoding_stats;
    std::cout << " final-clauses=" << s.total() << " instances=" << s.instances
              << " functionality=" << s.functionality
              << " totality=" << s.totality << " symmetry=" << s.symmetry;
  }
  std::cout << "\n";
}

int run_solve(const CommonFlags& f) {
  fmf::PipelineResult r =
      fmf::run_file(f.input, to_config(f), !f.dimacs_path.empty());
  std::cout << r.status_line() << "\n";
  if (r.status == fmf::PipelineResult::Status::Satisfiable)
    std::cout << r.model_text;
  if (f.stats) print_stats(r);
  if (!f.trace_path.empty()) {
    std::ofstream t(f.trace_path);
    for (const std::string& line : r.trace) t << line << "\n";
  }
  if (!f.dimacs_path.empty()) {
    std::ofstream d(f.dimacs_path);
    d << r.dimacs;
  }
  return 0;
}

int run_compare(const CommonFlags& f) {
  fmf::PipelineConfig base = to_config(f);
  const char* names[2] = {"pointwise", "contour"};
  fmf::PipelineResult results[2];
  for (int i = 0; i < 2; i++) {
    fmf::PipelineConfig c = base;
    c.mode = i == 0 ? fmf::EncodingMode::Pointwise : fmf::EncodingMode::Contour;
    results[i] = fmf::run_file(f.input, c);
    std::string status = results[i].status_line();
    std::cout << "% compare " << names[i] << " "
              << status.substr(status.rfind(' ') + 1)
              << " checked=" << results[i].search_stats.nodes_checked << "\n";
  }
  bool agree = results[0].status == results[1].status;
  std::cout << "% compare verdicts " << (agree ? "agree" : "DISAGREE") << "\n";
  return agree ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite model finder for multi-sorted first-order logic"};
  app.require_subcommand(1);

  CommonFlags solve_flags, compare_flags;
  CLI::App* solve = app.add_subcommand("solve", "search for a finite model");
  add_common(solve, solve_flags);
  CLI::App* compare =
      app.add_subcommand("compare", "run both strategies and report agreement");
  add_common(compare, compare_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_flags);
    return run_compare(compare_flags);
  } catch (const fmf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const fmf::SortError& e) {
    std::cerr << "sort error: " << e.what() << "\n";
    return 1;
  } catch (const fmf::ResourceLimitError& e) {
    std::cout << "% SZS status ResourceOut\n";
    std::cerr << e.what() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
