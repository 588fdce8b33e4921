// Propositional CDCL solver: two watched literals, first-UIP learning,
// activity-based branching, solving under assumptions with failed-assumption
// extraction. Deterministic by construction; restarts are off. A solver
// instance is single-owner; distinct instances may run in parallel.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fmf/logic.hpp"

namespace fmf::sat {

// Literal over a positive variable index; code = 2*var + (1 if negated).
struct Lit {
  int code = -2;

  static Lit make(int var, bool positive) {
    return Lit{2 * var + (positive ? 0 : 1)};
  }
  static Lit pos(int var) { return Lit{2 * var}; }
  static Lit neg(int var) { return Lit{2 * var + 1}; }
  static Lit from_dimacs(int d) { return d > 0 ? pos(d) : neg(-d); }

  int var() const { return code >> 1; }
  bool positive() const { return (code & 1) == 0; }
  Lit operator~() const { return Lit{code ^ 1}; }
  int to_dimacs() const { return positive() ? var() : -var(); }

  bool operator==(const Lit& o) const { return code == o.code; }
  bool operator<(const Lit& o) const { return code < o.code; }
};

enum class Status { Sat, Unsat };

struct Outcome {
  Status status = Status::Unsat;
  // indexed by variable, valid when Sat; assigns every variable created
  std::vector<bool> model;
  // subset of the passed assumptions, valid when Unsat
  std::vector<Lit> failed_assumptions;

  bool sat() const { return status == Status::Sat; }
};

struct SolverStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
};

class Solver {
public:
  Solver();

  int new_var();
  void ensure_var(int var);
  int num_vars() const { return num_vars_; }

  // Stores the clause; subsequent solves respect it. The empty clause is
  // permitted and makes all solves Unsat.
  void add_clause(const std::vector<Lit>& lits);

  // Sat: the model satisfies all clauses and assumptions. Unsat: the clause
  // set conjoined with the failed assumptions is unsatisfiable. Throws
  // ResourceLimitError when the conflict budget is exceeded.
  Outcome solve(const std::vector<Lit>& assumptions = {});

  void set_conflict_budget(std::int64_t budget) { conflict_budget_ = budget; }
  const SolverStats& stats() const { return stats_; }

private:
  struct Watcher {
    int cref;
    Lit blocker;
  };

  int value(Lit p) const {
    int8_t a = assigns_[p.var()];
    return p.positive() ? a : static_cast<int8_t>(-a);
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void attach_clause(int cref);
  void enqueue(Lit p, int reason);
  int propagate();  // returns conflicting clause index or -1
  void cancel_until(int level);
  void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }
  void analyze(int confl, std::vector<Lit>& learnt, int& backtrack_level);
  void analyze_final(Lit p, std::vector<Lit>& out_core);
  Lit pick_branch();
  void bump(int var);
  void decay() { var_inc_ *= (1.0 / 0.95); }
  void rescale();

  // heap ordered by activity, ties broken by variable index
  bool heap_less(int a, int b) const;
  void heap_insert(int v);
  void heap_update_up(int i);
  void heap_update_down(int i);
  int heap_pop();

  bool ok_ = true;
  int num_vars_ = 0;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by lit code
  std::vector<int8_t> assigns_;                // 0 undef, 1 true, -1 false
  std::vector<int> reason_;
  std::vector<int> level_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  int qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;  // -1 when not in heap
  std::vector<int8_t> polarity_;
  std::vector<int8_t> seen_;

  std::int64_t conflict_budget_ = -1;
  SolverStats stats_;
};

// Standard "p cnf V C" header, clauses as zero-terminated integer lines,
// preceded by the given comment block ("c " prefixed).
void write_dimacs(std::ostream& out, int num_vars,
                  const std::vector<std::vector<Lit>>& clauses,
                  const std::vector<std::string>& comments);

// Pluggable external solver speaking DIMACS extended with one assumption
// line ("a <lits> 0") and answering with "s SATISFIABLE" / "v <lits> 0"
// or "s UNSATISFIABLE" / "f <failed assumption lits> 0". The internal
// solver stays the default; this exists for experiments with other CDCL
// engines.
class ExternalSolver {
public:
  explicit ExternalSolver(std::string command) : command_(std::move(command)) {}

  Outcome solve(int num_vars, const std::vector<std::vector<Lit>>& clauses,
                const std::vector<Lit>& assumptions) const;

private:
  std::string command_;
};

}  // namespace fmf::sat
