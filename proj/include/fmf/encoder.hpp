// Propositional encoding of a flat problem for one domain-size assignment
// (pointwise, plain) or bound vector (contour): DC-instances, functionality
// and totality definitions, symmetry breaking, marking/guard variables.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fmf/analysis.hpp"
#include "fmf/logic.hpp"
#include "fmf/sat.hpp"

namespace fmf {

enum class EncodingMode { Plain, Pointwise, Contour };

struct EncodingStats {
  std::uint64_t instances = 0;
  std::uint64_t functionality = 0;
  std::uint64_t totality = 0;
  std::uint64_t symmetry = 0;

  std::uint64_t total() const {
    return instances + functionality + totality + symmetry;
  }
};

// Bijection between propositional variables and principal atoms: p(ds) for
// predicates over domain constants, t=d for principal terms, both over the
// per-class grounding widths. Atoms are numbered by (symbol index, argument
// tuple lexicographic, value) so DIMACS dumps are reproducible.
struct PrincipalAtomTable {
  std::vector<int> func_base;
  std::vector<std::vector<int>> func_widths;  // arg widths then result width
  std::vector<int> pred_base;
  std::vector<std::vector<int>> pred_widths;
  int num_atom_vars = 0;

  int func_atom(int f, const std::vector<int>& args, int value) const {
    int rank = 0;
    const std::vector<int>& w = func_widths[f];
    for (size_t i = 0; i < args.size(); i++) rank = rank * w[i] + args[i];
    return func_base[f] + rank * w.back() + value;
  }
  int pred_atom(int p, const std::vector<int>& args) const {
    int rank = 0;
    const std::vector<int>& w = pred_widths[p];
    for (size_t i = 0; i < args.size(); i++) rank = rank * w[i] + args[i];
    return pred_base[p] + rank;
  }
};

// Pointwise: per sort the variables "|s|>n_s" and "|s|<n_s". Contour: per
// sort and level i <= n_s the variable bound_s(i); monotonic sorts carry only
// the top level. Disjoint from the principal atom variables.
struct MarkingVars {
  std::vector<int> larger;              // 0 when absent
  std::vector<int> smaller;             // 0 when absent
  std::vector<std::vector<int>> bound;  // bound[s][i-1] = var for level i, 0 absent
};

struct Encoding {
  EncodingMode mode = EncodingMode::Plain;
  DomainSizeAssignment sizes;  // exact sizes, or bounds in contour mode
  std::vector<std::vector<sat::Lit>> clauses;
  PrincipalAtomTable atoms;
  MarkingVars marking;
  std::vector<sat::Lit> assumptions;
  EncodingStats stats;
  int num_vars = 0;

  std::vector<std::string> atom_comments(const Signature& sig) const;
};

// Analysis results the encoder consumes; computed on the same problem.
struct EncoderFacts {
  SubsortPartition partition;
  std::vector<bool> class_monotonic;
  std::vector<bool> sort_monotonic;
  std::map<int, int> class_caps;
  // expanded subsort -> parent, for parents that still occur in clauses;
  // contour encodings force the parent's size up to the subsort's bound
  std::vector<std::pair<SortId, SortId>> expansion_parents;
};

struct EncoderOptions {
  bool symmetry = true;
  std::uint64_t clause_cap = 50'000'000;
};

class Encoder {
public:
  Encoder(const Problem& problem, const EncoderFacts& facts,
          const EncoderOptions& opts);

  // Assembles instance, functionality, totality and symmetry clauses plus
  // marking/guard variables and the assumption list. Plain mode creates no
  // marking variables. Throws ResourceLimitError past the clause cap.
  Encoding build(const DomainSizeAssignment& sizes, EncodingMode mode) const;

  // Ground clause count of the plain encoding plus the sum of all sizes;
  // strictly grows from a node to its children. Instance counts ignore
  // variable-equality deletions, so this is an upper bound on the built
  // size and exact for clauses without variable equalities.
  std::uint64_t estimate_size(const DomainSizeAssignment& sizes) const;

  int width_of_class(int cls, const DomainSizeAssignment& sizes) const;

  const Problem& problem() const { return problem_; }
  const EncoderFacts& facts() const { return facts_; }

private:
  struct ClauseVars {
    std::vector<int> var_ids;
    std::vector<SortId> var_sorts;
    std::vector<int> var_classes;
  };

  const Problem& problem_;
  const EncoderFacts& facts_;
  EncoderOptions opts_;
  std::vector<ClauseVars> clause_vars_;
};

}  // namespace fmf
