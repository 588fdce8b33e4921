// Driver wiring parse -> clausify -> preprocess -> analyze -> search ->
// model printing, shared by the command line tool, the Python module and the
// test suites.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "fmf/analysis.hpp"
#include "fmf/clausify.hpp"
#include "fmf/encoder.hpp"
#include "fmf/logic.hpp"
#include "fmf/model.hpp"
#include "fmf/parser.hpp"
#include "fmf/search.hpp"

namespace fmf {

struct PipelineConfig {
  EncodingMode mode = EncodingMode::Pointwise;  // Pointwise or Contour
  bool constraints = true;
  bool collapse_monotonic_sorts = true;
  bool expand_subsort_sorts = true;
  bool bounds_detection = true;
  bool symmetry = true;
  bool definitions = true;
  bool splitting = true;
  bool verify_models = true;
  bool negate_conjectures = true;
  bool minimize_cores = true;
  bool trace = false;
  int split_max_vars = 4;
  int ground_depth_threshold = 1;
  double time_limit_seconds = 60.0;
  std::uint64_t clause_cap = 50'000'000;
  std::uint64_t max_total_size = 10'000;
};

// Everything the search needs, plus what model translation needs afterwards.
struct CompiledProblem {
  Problem original;  // post-clausification snapshot, the verification target
  Problem solve;     // flattened, transformed, split
  EncoderFacts facts;
  std::vector<Constraint> seeded;
  std::vector<SortId> active_sorts;
  SortTransforms transforms;
  std::set<SortId> phantom_parents;
  std::map<SortId, int> sort_caps;
};

CompiledProblem compile(const Problem& clausified, const PipelineConfig& config);

struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PipelineResult {
  enum class Status { Satisfiable, Unsatisfiable, ResourceOut };
  Status status = Status::ResourceOut;
  std::optional<FiniteModel> model;  // over the original signature
  std::string model_text;
  bool verified = false;
  SearchStats search_stats;
  EncodingStats final_encoding_stats;
  std::vector<std::string> trace;
  std::string dimacs;  // final encoding dump, when requested

  std::string status_line() const;
};

PipelineResult run_problem(const Problem& clausified, const PipelineConfig& config,
                           bool want_dimacs = false);

// Parses and clausifies, then runs. Throws ParseError on syntax errors and
// SortError on ill-sorted input.
PipelineResult run_file(const std::string& path, const PipelineConfig& config,
                        bool want_dimacs = false);
PipelineResult run_text(const std::string& text, const PipelineConfig& config,
                        bool want_dimacs = false);

}  // namespace fmf
