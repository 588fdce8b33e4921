// Exhaustive model search over a fixed domain-size assignment. The oracle
// behind the encoding-soundness and preprocessing-preservation tests; it
// shares no code with the encoder, the SAT solver or the production
// verifier. Backtracks cell by cell over the interpretation tables,
// evaluating each clause instance as soon as the cells it reads are all
// assigned.

#pragma once

#include <cstdint>
#include <optional>

#include "fmf/formula.hpp"
#include "fmf/logic.hpp"
#include "fmf/model.hpp"

namespace fmf::test {

// Returns a model when one exists at exactly this assignment, nullopt when
// the exhaustive search finds none.
std::optional<FiniteModel> brute_force_model(const Problem& problem,
                                             const DomainSizeAssignment& n,
                                             std::uint64_t node_limit = 200'000'000);

bool brute_force_satisfiable(const Problem& problem,
                             const DomainSizeAssignment& n);

// Direct evaluation of a quantified formula in a model; used to check the
// clausifier against the original formulas.
bool eval_formula(const Formula& f, const Signature& sig,
                  const FiniteModel& model);

}  // namespace fmf::test
