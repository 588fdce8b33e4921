// Finite models: extraction from SAT models, translation back through the
// sort transforms, exhaustive verification, and the documented text format.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fmf/analysis.hpp"
#include "fmf/encoder.hpp"
#include "fmf/logic.hpp"

namespace fmf {

// Per-sort domain sizes plus total function tables and predicate tables.
// Tables are row-major over argument tuples ranked by the sort sizes.
struct FiniteModel {
  std::vector<int> sizes;
  std::vector<std::vector<int>> functions;
  std::vector<std::vector<char>> predicates;

  int function_value(const Signature& sig, int f,
                     const std::vector<int>& args) const;
  bool predicate_value(const Signature& sig, int p,
                       const std::vector<int>& args) const;
};

// Reads principal atoms from the SAT model. Functionality and totality hold
// by construction of the encoding; violations raise InternalError.
FiniteModel extract_pointwise(const Problem& problem, const Encoding& enc,
                              const std::vector<bool>& sat_model);

// As above; the actual size of each sort is the smallest level whose bound
// variable is false in the SAT model.
FiniteModel extract_contour(const Problem& problem, const Encoding& enc,
                            const std::vector<bool>& sat_model);

// Replays the sort transforms backward: collapsed monotonic sorts report the
// merged size, expanded-subsort elements map to same-index parent elements,
// and symbols beyond the original signature (definitions, split predicates)
// are dropped. Parents that no longer occur in any clause take the largest
// subsort size; for others a subsort size exceeding the parent is an
// internal error.
FiniteModel translate_back(const FiniteModel& final_model,
                           const Signature& final_sig,
                           const SortTransforms& transforms,
                           const Problem& original,
                           const std::set<SortId>& phantom_parents);

struct VerifyResult {
  bool ok = false;
  std::string witness;  // first failing clause instance
};

// Evaluates every clause under every sort-respecting substitution; the
// project-wide oracle. Throws ResourceLimitError past the instance limit.
VerifyResult verify(const Problem& problem, const FiniteModel& model,
                    std::uint64_t instance_limit = 50'000'000);

// Documented finite-interpretation text; deterministic ordering. Symbols
// introduced by definitions or splitting are excluded, skolem functions are
// printed.
std::string print_model(const FiniteModel& model, const Signature& sig);

// Inverse of print_model over the same signature.
FiniteModel parse_model(const std::string& text, const Signature& sig);

}  // namespace fmf
