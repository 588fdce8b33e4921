// Exploration of the domain-size-assignment graph: pointwise strategy with a
// constraint store, beam pruning and a priority queue; contour strategy with
// monotone bound growth; SAT cores converted to constraints.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fmf/constraint.hpp"
#include "fmf/encoder.hpp"
#include "fmf/logic.hpp"
#include "fmf/sat.hpp"

namespace fmf {

// Learned constraints plus detected bounds, max sizes and subsort limits.
// Every stored constraint is sound: any assignment admitting a model
// satisfies it.
class ConstraintStore {
public:
  void add(Constraint c) { constraints_.push_back(std::move(c)); }
  void add_contradiction() { contradiction_ = true; }
  bool has_contradiction() const { return contradiction_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

private:
  std::vector<Constraint> constraints_;
  bool contradiction_ = false;
};

// True iff every constraint has at least one true disjunct under the node.
bool satisfies(const ConstraintStore& store, const DomainSizeAssignment& node);

// True iff the node violates the constraint and no disjunct can become true
// as the given sort grows; such a constraint excludes the node and all its
// s-descendants.
bool has_beam(const Constraint& constraint, const DomainSizeAssignment& node,
              SortId sort);

// Failed assumptions, all negated marking variables, become a disjunction of
// |s|>n_s / |s|<n_s atoms. A non-marking literal is an encoding bug.
Constraint core_to_constraint(const std::vector<sat::Lit>& core,
                              const MarkingVars& marking,
                              const DomainSizeAssignment& n);

// Deterministic growth choice: among core sorts, the one with the smallest
// current bound; ties by sort declaration order.
SortId choose_growth_sort(const std::vector<SortId>& core_sorts,
                          const DomainSizeAssignment& bounds);

struct SearchConfig {
  bool constraints = true;  // marked encodings + core learning (pointwise)
  bool trace = false;
  double time_limit_seconds = 60.0;
  std::uint64_t clause_cap = 50'000'000;
  std::uint64_t max_total_size = 10'000;
  bool minimize_cores = true;
};

struct SearchStats {
  std::uint64_t nodes_checked = 0;
  std::uint64_t nodes_ignored = 0;
  std::uint64_t nodes_pruned = 0;
  std::uint64_t constraints_learned = 0;
};

struct SearchOutcome {
  enum class Verdict { Sat, Unsat, ResourceOut };
  Verdict verdict = Verdict::ResourceOut;
  std::optional<Encoding> encoding;         // final encoding, when Sat
  std::vector<bool> sat_model;              // SAT model, when Sat
  SearchStats stats;
  std::vector<std::string> trace;           // one line per node when enabled
};

// Steps 1-4 with 4' beam pruning of the search strategy: priority queue
// ordered by encoding size estimate (FIFO tiebreak), constraint filtering at
// pop time, core learning. An exhausted queue means Unsatisfiable.
SearchOutcome pointwise_search(const Encoder& encoder,
                               const std::vector<Constraint>& seeded,
                               const std::vector<SortId>& active_sorts,
                               int num_sorts, const SearchConfig& config);

// Monotone bound growth: solve under the negated top bound variables, grow
// one core sort at a time; an empty core, or every core sort at its cap,
// means Unsatisfiable.
SearchOutcome contour_search(const Encoder& encoder,
                             const std::vector<Constraint>& seeded,
                             const std::vector<SortId>& active_sorts,
                             int num_sorts, const SearchConfig& config,
                             const std::map<SortId, int>& sort_caps,
                             const std::vector<std::pair<SortId, SortId>>&
                                 expansion_parents);

}  // namespace fmf
