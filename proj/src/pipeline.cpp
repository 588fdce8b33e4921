#include "fmf/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "fmf/preprocess.hpp"

namespace fmf {

CompiledProblem compile(const Problem& clausified, const PipelineConfig& config) {
  CompiledProblem cp;
  cp.original = clausified;
  cp.solve = clausified;

  // facts read off the input shape before flattening reshapes it
  std::vector<FunctionFacts> function_facts;
  if (config.bounds_detection)
    function_facts = detect_function_facts(cp.solve);
  std::map<SortId, int> input_caps = detect_input_caps(cp.solve);

  PreprocessOptions pre;
  pre.definitions = config.definitions;
  pre.ground_depth_threshold = config.ground_depth_threshold;
  preprocess(cp.solve, pre);

  int declared_sorts = cp.solve.signature.num_sorts();

  if (config.expand_subsort_sorts) {
    SubsortPartition partition = infer_subsorts(cp.solve);
    std::vector<bool> class_mono = detect_monotonic_classes(cp.solve, partition);
    auto expansion_constraints =
        expand_subsorts(cp.solve, partition, class_mono, cp.transforms);
    cp.seeded.insert(cp.seeded.end(), expansion_constraints.begin(),
                     expansion_constraints.end());
  }

  if (config.collapse_monotonic_sorts) {
    SubsortPartition partition = infer_subsorts(cp.solve);
    std::vector<bool> class_mono = detect_monotonic_classes(cp.solve, partition);
    std::vector<bool> sort_mono = detect_monotonic(cp.solve, partition, class_mono);
    std::vector<SortId> candidates;
    for (SortId s = 0; s < declared_sorts; s++) {
      if (!sort_mono[s]) continue;
      if (partition.classes_of_sort(s).empty()) continue;
      candidates.push_back(s);
    }
    if (!candidates.empty())
      collapse_monotonic(cp.solve, candidates, cp.transforms);
  }

  if (config.splitting) split_clauses(cp.solve, config.split_max_vars);

  // final analysis drives the encoder and the constraint store
  cp.facts.partition = infer_subsorts(cp.solve);
  cp.facts.class_monotonic = detect_monotonic_classes(cp.solve, cp.facts.partition);
  cp.facts.sort_monotonic =
      detect_monotonic(cp.solve, cp.facts.partition, cp.facts.class_monotonic);
  MaxSizes max_sizes = detect_max_sizes(cp.solve, cp.facts.partition,
                                        cp.facts.class_monotonic, input_caps);
  cp.facts.class_caps = max_sizes.class_caps;
  cp.sort_caps = max_sizes.sort_caps;

  for (const auto& ex : cp.transforms.expansions) {
    if (cp.facts.partition.classes_of_sort(ex.parent).empty())
      cp.phantom_parents.insert(ex.parent);
    else
      cp.facts.expansion_parents.emplace_back(ex.new_sort, ex.parent);
  }

  if (config.bounds_detection) {
    auto bound_constraints =
        materialize_bounds(function_facts, cp.solve.signature);
    cp.seeded.insert(cp.seeded.end(), bound_constraints.begin(),
                     bound_constraints.end());
  }
  for (auto [s, cap] : cp.sort_caps)
    cp.seeded.push_back({{ConstraintAtom::size_cmp(s, Rel::Le, cap)}});

  std::set<SortId> active;
  for (SortId s = 0; s < cp.solve.signature.num_sorts(); s++)
    if (!cp.facts.partition.classes_of_sort(s).empty()) active.insert(s);
  for (const Constraint& c : cp.seeded)
    for (const ConstraintAtom& a : c.disjuncts) {
      active.insert(a.sort_a);
      if (a.kind == ConstraintAtom::Kind::InterSort) active.insert(a.sort_b);
    }
  cp.active_sorts.assign(active.begin(), active.end());
  return cp;
}

std::string PipelineResult::status_line() const {
  switch (status) {
    case Status::Satisfiable: return "% SZS status Satisfiable";
    case Status::Unsatisfiable: return "% SZS status Unsatisfiable";
    case Status::ResourceOut: break;
  }
  return "% SZS status ResourceOut";
}

PipelineResult run_problem(const Problem& clausified,
                           const PipelineConfig& config, bool want_dimacs) {
  auto diagnostics = check_well_sorted(clausified);
  if (!diagnostics.empty()) {
    std::string msg = "ill-sorted input";
    for (const Diagnostic& d : diagnostics)
      msg += "\n  " + d.where + ": " + d.message;
    throw SortError(msg);
  }

  CompiledProblem cp = compile(clausified, config);
  EncoderOptions eopts;
  eopts.symmetry = config.symmetry;
  eopts.clause_cap = config.clause_cap;
  Encoder encoder(cp.solve, cp.facts, eopts);

  SearchConfig sc;
  sc.constraints = config.constraints;
  sc.trace = config.trace;
  sc.time_limit_seconds = config.time_limit_seconds;
  sc.clause_cap = config.clause_cap;
  sc.max_total_size = config.max_total_size;
  sc.minimize_cores = config.minimize_cores;

  int num_sorts = cp.solve.signature.num_sorts();
  PipelineResult result;
  SearchOutcome outcome;
  try {
    if (config.mode == EncodingMode::Contour)
      outcome = contour_search(encoder, cp.seeded, cp.active_sorts, num_sorts,
                               sc, cp.sort_caps, cp.facts.expansion_parents);
    else
      outcome = pointwise_search(encoder, cp.seeded, cp.active_sorts,
                                 num_sorts, sc);
  } catch (const ResourceLimitError&) {
    outcome.verdict = SearchOutcome::Verdict::ResourceOut;
  }
  result.search_stats = outcome.stats;
  result.trace = std::move(outcome.trace);

  switch (outcome.verdict) {
    case SearchOutcome::Verdict::Unsat:
      result.status = PipelineResult::Status::Unsatisfiable;
      return result;
    case SearchOutcome::Verdict::ResourceOut:
      result.status = PipelineResult::Status::ResourceOut;
      return result;
    case SearchOutcome::Verdict::Sat:
      break;
  }

  const Encoding& enc = *outcome.encoding;
  result.final_encoding_stats = enc.stats;
  if (want_dimacs) {
    std::ostringstream dimacs;
    std::vector<std::string> comments = enc.atom_comments(cp.solve.signature);
    sat::write_dimacs(dimacs, enc.num_vars, enc.clauses, comments);
    result.dimacs = dimacs.str();
  }

  FiniteModel raw = config.mode == EncodingMode::Contour
                        ? extract_contour(cp.solve, enc, outcome.sat_model)
                        : extract_pointwise(cp.solve, enc, outcome.sat_model);
  FiniteModel model = translate_back(raw, cp.solve.signature, cp.transforms,
                                     cp.original, cp.phantom_parents);
  result.model_text = print_model(model, cp.original.signature);
  if (config.verify_models) {
    VerifyResult vr = verify(cp.original, model);
    if (!vr.ok)
      throw InternalError("model verification failed: " + vr.witness);
    result.verified = true;
  }
  result.model = std::move(model);
  result.status = PipelineResult::Status::Satisfiable;
  return result;
}

PipelineResult run_text(const std::string& text, const PipelineConfig& config,
                        bool want_dimacs) {
  ParseResult parsed = parse(text);
  ClausifyOptions copts;
  copts.negate_conjectures = config.negate_conjectures;
  Problem clausified = clausify(parsed, copts);
  return run_problem(clausified, config, want_dimacs);
}

PipelineResult run_file(const std::string& path, const PipelineConfig& config,
                        bool want_dimacs) {
  ParseResult parsed = parse_file(path);
  ClausifyOptions copts;
  copts.negate_conjectures = config.negate_conjectures;
  Problem clausified = clausify(parsed, copts);
  return run_problem(clausified, config, want_dimacs);
}

}  // namespace fmf
