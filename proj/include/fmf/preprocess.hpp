#pragma once

#include "fmf/logic.hpp"

namespace fmf {

struct PreprocessOptions {
  bool definitions = true;
  int ground_depth_threshold = 1;  // extract every nested complex ground term
  bool splitting = true;
  int max_variables = 4;
};

// A literal is flat when it is p(xs)/~p(xs), f(xs)=y / f(xs)!=y with y a
// variable, or an equality x=y between variables.
bool is_flat(const Literal& l);
bool is_flat(const Clause& c);

// Replaces every x!=y \/ C[x] by C[y] to fixpoint; logically equivalent.
// A clause reducing to the empty clause is returned as such.
Clause eliminate_variable_inequalities(Clause clause);

// Equivalence-preserving rewrite to flat form; fresh variables take the sort
// of the extracted term. Expects variable inequalities already eliminated
// (re-eliminates ones created by extraction).
Clause flatten(Clause clause, const Signature& sig);

// Complex ground subterms at argument positions whose depth reaches the
// threshold become fresh constants with defining unit equalities; shared
// subterms get one definition.
void introduce_definitions(Problem& problem, int ground_depth_threshold);

// Clauses with more than max_variables variables are split with fresh
// predicates over the shared variables; the result is equisatisfiable.
void split_clauses(Problem& problem, int max_variables);

// Full pipeline stage: eliminate inequalities, optionally introduce
// definitions, flatten every clause. Splitting runs separately, after the
// sort analyses.
void preprocess(Problem& problem, const PreprocessOptions& opts);

}  // namespace fmf
