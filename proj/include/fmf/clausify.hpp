#pragma once

#include <cstdint>

#include "fmf/formula.hpp"
#include "fmf/logic.hpp"
#include "fmf/parser.hpp"

namespace fmf {

struct ClausifyOptions {
  // conjectures are negated before clausification (refutation reading);
  // turn off for pure model finding on axioms
  bool negate_conjectures = true;
  // guard against CNF blow-up during distribution
  std::uint64_t clause_limit = 200000;
};

// Negation normal form, miniscoped prenexing, Skolemization with fresh
// function symbols over the governing universal variables, distribution to
// CNF. The output is equisatisfiable with the input.
Problem clausify(const ParseResult& input, const ClausifyOptions& opts = {});

}  // namespace fmf
