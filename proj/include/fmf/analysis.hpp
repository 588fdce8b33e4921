// Subsort inference, monotonicity detection, inter-sort size constraints,
// per-sort maximum sizes, and the collapse/expansion transforms.

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fmf/constraint.hpp"
#include "fmf/logic.hpp"

namespace fmf {

// Union-find over signature positions: function argument positions, function
// return positions, predicate argument positions, plus one anchor position
// per sort for variables that occur only in variable equalities. Positions
// connected by a shared variable or by both sides of an equality end up in
// one class; every class refines exactly one declared sort.
class SubsortPartition {
public:
  static SubsortPartition build(const Problem& flat);

  int num_classes() const { return static_cast<int>(class_sort_.size()); }
  SortId sort_of_class(int cls) const { return class_sort_[cls]; }
  const std::vector<int>& classes_of_sort(SortId s) const {
    return by_sort_[s];
  }

  int func_arg_class(int func, int arg) const {
    return class_of_[func_base_[func] + arg];
  }
  int func_ret_class(int func) const {
    return class_of_[func_base_[func] + func_arity_[func]];
  }
  int pred_arg_class(int pred, int arg) const {
    return class_of_[pred_base_[pred] + arg];
  }
  int anchor_class(SortId s) const { return class_of_[anchor_base_ + s]; }

  // Class of a variable of the given clause. All positions a variable
  // occupies are in one class; variables with no symbol position land in
  // their sort's anchor class.
  int variable_class(const Signature& sig, const Clause& clause, int var) const;

private:
  std::vector<int> class_of_;  // position index -> class id
  std::vector<SortId> class_sort_;
  std::vector<std::vector<int>> by_sort_;
  std::vector<int> func_base_;
  std::vector<int> func_arity_;
  std::vector<int> pred_base_;
  int anchor_base_ = 0;
};

SubsortPartition infer_subsorts(const Problem& flat);

// Per-class monotonicity: a class is monotonic unless some clause has a
// positive equality with one of its variables on a side, where flat
// function-definition literals f(xs)=y do not count when y is also guarded
// by a negative literal t != y with t non-variable in the same clause.
std::vector<bool> detect_monotonic_classes(const Problem& flat,
                                           const SubsortPartition& partition);

// Sorts all of whose classes are monotonic.
std::vector<bool> detect_monotonic(const Problem& flat,
                                   const SubsortPartition& partition,
                                   const std::vector<bool>& class_monotonic);

// Syntactic function-property detection on input (unflattened) clauses.
struct FunctionFacts {
  int func = -1;
  bool injective = false;
  bool surjective = false;
  bool non_surjective = false;
  bool non_injective = false;
};

std::vector<FunctionFacts> detect_function_facts(const Problem& input);

// Injectivity/surjectivity facts as inter-sort size constraints over the
// given signature's current symbol sorts. Trivial same-sort comparisons are
// dropped.
std::vector<Constraint> detect_bounds(const Problem& input);
std::vector<Constraint> materialize_bounds(const std::vector<FunctionFacts>& facts,
                                           const Signature& sig);

// Maximum-size detection.
struct MaxSizes {
  std::map<SortId, int> sort_caps;
  std::map<int, int> class_caps;  // EPR-style, for monotonic classes only
};

// Patterns on input clauses: (a) a clause of positive variable equalities
// among m same-sorted variables caps the sort at m-1; (b) a single-variable
// clause x=t1 | ... | x=tk with ground ti caps the sort at k.
std::map<SortId, int> detect_input_caps(const Problem& input);

// (c) a monotonic class whose value-producing symbols are all constants is
// capped by the constant count (at least 1). Sorts whose classes are all
// capped get the maximum as a sort cap.
MaxSizes detect_max_sizes(const Problem& flat, const SubsortPartition& partition,
                          const std::vector<bool>& class_monotonic,
                          const std::map<SortId, int>& input_caps);

// Sort transforms, applied forward as expansion then collapse; model
// translation replays them backward.
struct SortTransforms {
  struct Expansion {
    SortId new_sort;
    SortId parent;
  };
  std::vector<Expansion> expansions;
  struct Collapse {
    std::vector<SortId> originals;
    SortId merged;
  };
  std::optional<Collapse> collapse;
};

// Each monotonic inferred subsort of a multi-class sort becomes a proper
// sort; emitted constraints |subsort| <= |parent| feed the search.
std::vector<Constraint> expand_subsorts(Problem& problem,
                                        const SubsortPartition& partition,
                                        const std::vector<bool>& class_monotonic,
                                        SortTransforms& transforms);

// Merges the given sorts into one fresh sort; the mapping is recorded for
// model translation.
void collapse_monotonic(Problem& problem, const std::vector<SortId>& sorts,
                        SortTransforms& transforms);

}  // namespace fmf
