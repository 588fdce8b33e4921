#include "fmf/search.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace fmf {

using sat::Lit;

bool satisfies(const ConstraintStore& store, const DomainSizeAssignment& node) {
  if (store.has_contradiction()) return false;
  for (const Constraint& c : store.constraints())
    if (!c.satisfied_by(node)) return false;
  return true;
}

bool has_beam(const Constraint& constraint, const DomainSizeAssignment& node,
              SortId sort) {
  if (constraint.satisfied_by(node)) return false;
  for (const ConstraintAtom& a : constraint.disjuncts)
    if (!a.non_increasing_in(sort)) return false;
  return true;
}

Constraint core_to_constraint(const std::vector<Lit>& core,
                              const MarkingVars& marking,
                              const DomainSizeAssignment& n) {
  Constraint c;
  for (Lit l : core) {
    if (l.positive())
      throw InternalError("core contains a positive marking literal");
    int v = l.var();
    bool found = false;
    for (SortId s = 0; s < static_cast<SortId>(marking.larger.size()); s++) {
      if (marking.larger[s] == v) {
        c.disjuncts.push_back(
            ConstraintAtom::size_cmp(s, Rel::Gt, n.size_of(s)));
        found = true;
      } else if (marking.smaller[s] == v) {
        c.disjuncts.push_back(
            ConstraintAtom::size_cmp(s, Rel::Lt, n.size_of(s)));
        found = true;
      }
    }
    if (!found) throw InternalError("core contains a non-marking literal");
  }
  return c;
}

SortId choose_growth_sort(const std::vector<SortId>& core_sorts,
                          const DomainSizeAssignment& bounds) {
  if (core_sorts.empty())
    throw InternalError("choose_growth_sort: empty core");
  SortId best = core_sorts[0];
  for (SortId s : core_sorts) {
    if (bounds.size_of(s) < bounds.size_of(best) ||
        (bounds.size_of(s) == bounds.size_of(best) && s < best))
      best = s;
  }
  return best;
}

namespace {

std::string sizes_csv(const DomainSizeAssignment& n) {
  std::string s;
  for (size_t i = 0; i < n.sizes.size(); i++) {
    if (i) s += ",";
    s += std::to_string(n.sizes[i]);
  }
  return s;
}

struct Budget {
  std::chrono::steady_clock::time_point start;
  double limit_seconds;

  bool expired() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
               .count() > limit_seconds;
  }
};

// one fresh solver per encoding; the non-incremental design of the method
sat::Outcome solve_encoding(const Encoding& enc, sat::Solver& solver) {
  solver.ensure_var(enc.num_vars);
  for (const auto& c : enc.clauses) solver.add_clause(c);
  return solver.solve(enc.assumptions);
}

// deletion-based minimization reusing the same solver's learned clauses
std::vector<Lit> minimize_core(sat::Solver& solver, std::vector<Lit> core) {
  size_t i = 0;
  while (i < core.size() && core.size() > 1) {
    std::vector<Lit> test;
    for (size_t j = 0; j < core.size(); j++)
      if (j != i) test.push_back(core[j]);
    sat::Outcome out = solver.solve(test);
    if (out.status == sat::Status::Unsat) {
      core = out.failed_assumptions;
      i = 0;
    } else {
      i++;
    }
  }
  return core;
}

std::uint64_t total_size(const DomainSizeAssignment& n) {
  std::uint64_t t = 0;
  for (int s : n.sizes) t += static_cast<std::uint64_t>(s);
  return t;
}

}  // namespace

SearchOutcome pointwise_search(const Encoder& encoder,
                               const std::vector<Constraint>& seeded,
                               const std::vector<SortId>& active_sorts,
                               int num_sorts, const SearchConfig& config) {
  SearchOutcome out;
  Budget budget{std::chrono::steady_clock::now(), config.time_limit_seconds};
  ConstraintStore store;
  if (config.constraints)
    for (const Constraint& c : seeded) store.add(c);

  struct QueueEntry {
    std::uint64_t estimate;
    std::uint64_t seq;
    DomainSizeAssignment node;
    bool operator>(const QueueEntry& o) const {
      if (estimate != o.estimate) return estimate > o.estimate;
      return seq > o.seq;
    }
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
  std::set<std::vector<int>> visited;
  std::uint64_t seq = 0;
  bool truncated = false;

  DomainSizeAssignment start = DomainSizeAssignment::ones(num_sorts);
  queue.push({encoder.estimate_size(start), seq++, start});

  auto trace_line = [&](const DomainSizeAssignment& n, const std::string& action,
                        const std::string& extra = "") {
    if (!config.trace) return;
    std::string line = "node " + sizes_csv(n) + " " + action;
    if (!extra.empty()) line += " " + extra;
    out.trace.push_back(std::move(line));
  };

  while (!queue.empty()) {
    if (budget.expired()) {
      out.verdict = SearchOutcome::Verdict::ResourceOut;
      return out;
    }
    QueueEntry top = queue.top();
    queue.pop();
    const DomainSizeAssignment node = top.node;
    if (visited.count(node.sizes)) continue;
    visited.insert(node.sizes);

    if (!satisfies(store, node)) {
      out.stats.nodes_ignored++;
      trace_line(node, "ignored");
    } else {
      Encoding enc = encoder.build(
          node, config.constraints ? EncodingMode::Pointwise
                                   : EncodingMode::Plain);
      sat::Solver solver;
      sat::Outcome sat_out = solve_encoding(enc, solver);
      out.stats.nodes_checked++;
      if (sat_out.status == sat::Status::Sat) {
        trace_line(node, "checked-sat");
        out.verdict = SearchOutcome::Verdict::Sat;
        out.encoding = std::move(enc);
        out.sat_model = std::move(sat_out.model);
        return out;
      }
      std::string learned_text;
      if (config.constraints) {
        std::vector<Lit> core = sat_out.failed_assumptions;
        if (config.minimize_cores && core.size() > 1)
          core = minimize_core(solver, std::move(core));
        if (core.empty()) {
          store.add_contradiction();
          learned_text = "learned (false)";
        } else {
          Constraint c = core_to_constraint(core, enc.marking, node);
          learned_text = "learned " + c.to_string(encoder.problem().signature);
          store.add(std::move(c));
        }
        out.stats.constraints_learned++;
      }
      trace_line(node, "checked-unsat", learned_text);
    }

    for (SortId s : active_sorts) {
      DomainSizeAssignment child = node;
      child.sizes[s]++;
      if (visited.count(child.sizes)) continue;
      if (total_size(child) > config.max_total_size) {
        truncated = true;
        continue;
      }
      // step 4' narrowed: prune the edge only for constraints no growth
      // direction can ever satisfy (max-size style); pruning on every
      // single-sort beam deadlocks chained inter-sort constraints such as
      // |s1|<|s2|, |s2|<=|s3| right at the start node
      bool pruned = false;
      if (store.has_contradiction()) {
        pruned = true;
      } else {
        for (const Constraint& c : store.constraints()) {
          if (c.satisfied_by(child)) continue;
          bool dead_end = true;
          for (const ConstraintAtom& a : c.disjuncts)
            dead_end = dead_end && a.non_increasing_everywhere();
          if (dead_end) {
            pruned = true;
            break;
          }
        }
      }
      if (pruned) {
        out.stats.nodes_pruned++;
        trace_line(child, "pruned");
        continue;
      }
      std::uint64_t est = encoder.estimate_size(child);
      if (est <= top.estimate && est < kCountCap)
        throw InternalError("estimate not strictly increasing");
      queue.push({est, seq++, child});
    }
  }
  out.verdict = truncated ? SearchOutcome::Verdict::ResourceOut
                          : SearchOutcome::Verdict::Unsat;
  return out;
}

SearchOutcome contour_search(const Encoder& encoder,
                             const std::vector<Constraint>& seeded,
                             const std::vector<SortId>& active_sorts,
                             int num_sorts, const SearchConfig& config,
                             const std::map<SortId, int>& sort_caps,
                             const std::vector<std::pair<SortId, SortId>>&
                                 expansion_parents) {
  (void)seeded;
  SearchOutcome out;
  Budget budget{std::chrono::steady_clock::now(), config.time_limit_seconds};
  DomainSizeAssignment bounds = DomainSizeAssignment::ones(num_sorts);

  auto capped = [&](SortId s) {
    auto it = sort_caps.find(s);
    return it != sort_caps.end() && bounds.size_of(s) >= it->second;
  };
  auto raise_parents = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto [sub, parent] : expansion_parents) {
        if (bounds.sizes[parent] < bounds.sizes[sub]) {
          bounds.sizes[parent] = bounds.sizes[sub];
          changed = true;
        }
      }
    }
  };

  auto trace_line = [&](const std::string& action, const std::string& extra) {
    if (!config.trace) return;
    std::string line = "node " + sizes_csv(bounds) + " " + action;
    if (!extra.empty()) line += " " + extra;
    out.trace.push_back(std::move(line));
  };

  while (true) {
    if (budget.expired()) {
      out.verdict = SearchOutcome::Verdict::ResourceOut;
      return out;
    }
    if (total_size(bounds) > config.max_total_size) {
      out.verdict = SearchOutcome::Verdict::ResourceOut;
      return out;
    }
    Encoding enc = encoder.build(bounds, EncodingMode::Contour);
    sat::Solver solver;
    sat::Outcome sat_out = solve_encoding(enc, solver);
    out.stats.nodes_checked++;
    if (sat_out.status == sat::Status::Sat) {
      trace_line("checked-sat", "");
      out.verdict = SearchOutcome::Verdict::Sat;
      out.encoding = std::move(enc);
      out.sat_model = std::move(sat_out.model);
      return out;
    }
    std::vector<Lit> core = sat_out.failed_assumptions;
    if (config.minimize_cores && core.size() > 1)
      core = minimize_core(solver, std::move(core));
    if (core.empty()) {
      trace_line("checked-unsat", "core ()");
      out.verdict = SearchOutcome::Verdict::Unsat;
      return out;
    }
    std::vector<SortId> core_sorts;
    for (Lit l : core) {
      bool found = false;
      for (SortId s = 0; s < num_sorts; s++) {
        const auto& bv = enc.marking.bound[s];
        if (!bv.empty() && bv[bounds.size_of(s) - 1] == l.var()) {
          core_sorts.push_back(s);
          found = true;
          break;
        }
      }
      if (!found) throw InternalError("contour core contains a non-bound literal");
    }
    std::sort(core_sorts.begin(), core_sorts.end());
    std::vector<SortId> growable;
    for (SortId s : core_sorts)
      if (!capped(s)) growable.push_back(s);
    if (growable.empty()) {
      // bounds never shrink and every core sort is at its proven maximum,
      // so this refutation persists at all future bound vectors
      trace_line("checked-unsat", "core capped");
      out.verdict = SearchOutcome::Verdict::Unsat;
      return out;
    }
    SortId grow = choose_growth_sort(growable, bounds);
    std::string sort_name = encoder.problem().signature.sort(grow).name;
    trace_line("checked-unsat", "grow " + sort_name);
    bounds.sizes[grow]++;
    raise_parents();
  }
}

}  // namespace fmf
