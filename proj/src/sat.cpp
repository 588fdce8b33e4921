#include "fmf/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fmf::sat {

// var 0 is unused; keep index arithmetic simple
namespace {
constexpr int kVarBase = 1;
}

Solver::Solver() {
  assigns_.push_back(0);
  reason_.push_back(-1);
  level_.push_back(0);
  activity_.push_back(0.0);
  polarity_.push_back(0);
  seen_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.resize(2);
}

int Solver::new_var() {
  ensure_var(num_vars_ + 1);
  return num_vars_;
}

void Solver::ensure_var(int var) {
  while (num_vars_ < var) {
    num_vars_++;
    assigns_.push_back(0);
    reason_.push_back(-1);
    level_.push_back(0);
    activity_.push_back(0.0);
    polarity_.push_back(0);
    seen_.push_back(0);
    heap_pos_.push_back(-1);
    heap_insert(num_vars_);
  }
  watches_.resize(2 * (num_vars_ + 1));
}

void Solver::attach_clause(int cref) {
  const std::vector<Lit>& c = clauses_[cref];
  watches_[(~c[0]).code].push_back({cref, c[1]});
  watches_[(~c[1]).code].push_back({cref, c[0]});
}

void Solver::add_clause(const std::vector<Lit>& lits) {
  cancel_until(0);
  if (!ok_) return;
  std::vector<Lit> c;
  c.reserve(lits.size());
  for (Lit l : lits) {
    ensure_var(l.var());
    if (value(l) == 1 && level_[l.var()] == 0) return;  // satisfied at root
    if (value(l) == -1 && level_[l.var()] == 0) continue;
    c.push_back(l);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (size_t i = 0; i + 1 < c.size(); i++)
    if (c[i].var() == c[i + 1].var()) return;  // tautology
  if (c.empty()) {
    ok_ = false;
    return;
  }
  if (c.size() == 1) {
    if (value(c[0]) == -1) {
      ok_ = false;
      return;
    }
    if (value(c[0]) == 0) {
      enqueue(c[0], -1);
      if (propagate() != -1) ok_ = false;
    }
    return;
  }
  clauses_.push_back(std::move(c));
  attach_clause(static_cast<int>(clauses_.size()) - 1);
}

void Solver::enqueue(Lit p, int reason) {
  assigns_[p.var()] = p.positive() ? 1 : -1;
  reason_[p.var()] = reason;
  level_[p.var()] = decision_level();
  trail_.push_back(p);
}

int Solver::propagate() {
  while (qhead_ < static_cast<int>(trail_.size())) {
    Lit p = trail_[qhead_++];
    stats_.propagations++;
    std::vector<Watcher>& ws = watches_[p.code];
    size_t keep = 0;
    for (size_t i = 0; i < ws.size(); i++) {
      Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[keep++] = w;
        continue;
      }
      std::vector<Lit>& c = clauses_[w.cref];
      if (c[0] == ~p) std::swap(c[0], c[1]);
      // now c[1] == ~p
      if (value(c[0]) == 1) {
        ws[keep++] = {w.cref, c[0]};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.size(); k++) {
        if (value(c[k]) != -1) {
          std::swap(c[1], c[k]);
          watches_[(~c[1]).code].push_back({w.cref, c[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = {w.cref, c[0]};
      if (value(c[0]) == -1) {
        // conflict: keep remaining watchers and bail out
        for (size_t j = i + 1; j < ws.size(); j++) ws[keep++] = ws[j];
        ws.resize(keep);
        qhead_ = static_cast<int>(trail_.size());
        return w.cref;
      }
      enqueue(c[0], w.cref);
    }
    ws.resize(keep);
  }
  return -1;
}

void Solver::cancel_until(int target) {
  if (decision_level() <= target) return;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[target]; i--) {
    int v = trail_[i].var();
    assigns_[v] = 0;
    reason_[v] = -1;
    polarity_[v] = trail_[i].positive() ? 1 : 0;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[target]);
  trail_lim_.resize(target);
  qhead_ = static_cast<int>(trail_.size());
}

void Solver::analyze(int confl, std::vector<Lit>& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(Lit{-2});  // slot for the asserting literal
  int path = 0;
  Lit p{-2};
  int index = static_cast<int>(trail_.size()) - 1;
  int cref = confl;
  do {
    const std::vector<Lit>& c = clauses_[cref];
    for (size_t j = (p.code == -2 ? 0 : 1); j < c.size(); j++) {
      Lit q = c[j];
      if (!seen_[q.var()] && level_[q.var()] > 0) {
        seen_[q.var()] = 1;
        bump(q.var());
        if (level_[q.var()] >= decision_level())
          path++;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[trail_[index].var()]) index--;
    p = trail_[index];
    cref = reason_[p.var()];
    seen_[p.var()] = 0;
    index--;
    path--;
  } while (path > 0);
  learnt[0] = ~p;

  // self-subsumption: drop literals whose reason is covered by the clause
  std::vector<Lit> minimized;
  minimized.push_back(learnt[0]);
  for (size_t i = 1; i < learnt.size(); i++) {
    int r = reason_[learnt[i].var()];
    bool redundant = false;
    if (r != -1) {
      redundant = true;
      const std::vector<Lit>& rc = clauses_[r];
      for (size_t j = 1; j < rc.size(); j++) {
        if (!seen_[rc[j].var()] && level_[rc[j].var()] > 0) {
          redundant = false;
          break;
        }
      }
    }
    if (!redundant) minimized.push_back(learnt[i]);
  }
  for (size_t i = 1; i < learnt.size(); i++) seen_[learnt[i].var()] = 0;
  learnt = std::move(minimized);

  backtrack_level = 0;
  if (learnt.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < learnt.size(); i++)
      if (level_[learnt[i].var()] > level_[learnt[max_i].var()]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[learnt[1].var()];
  }
}

void Solver::analyze_final(Lit p, std::vector<Lit>& out_core) {
  out_core.clear();
  out_core.push_back(p);
  if (decision_level() == 0) return;
  seen_[p.var()] = 1;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[0]; i--) {
    int v = trail_[i].var();
    if (!seen_[v]) continue;
    if (reason_[v] == -1) {
      // an assumption decision this falsification rests on
      out_core.push_back(trail_[i]);
    } else {
      const std::vector<Lit>& c = clauses_[reason_[v]];
      for (size_t j = 1; j < c.size(); j++)
        if (level_[c[j].var()] > 0) seen_[c[j].var()] = 1;
    }
    seen_[v] = 0;
  }
  seen_[p.var()] = 0;
}

void Solver::bump(int var) {
  activity_[var] += var_inc_;
  if (activity_[var] > 1e100) rescale();
  if (heap_pos_[var] >= 0) heap_update_up(heap_pos_[var]);
}

void Solver::rescale() {
  for (int v = kVarBase; v <= num_vars_; v++) activity_[v] *= 1e-100;
  var_inc_ *= 1e-100;
}

bool Solver::heap_less(int a, int b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  return a < b;
}

void Solver::heap_insert(int v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_update_up(heap_pos_[v]);
}

void Solver::heap_update_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_update_down(int i) {
  int v = heap_[i];
  int n = static_cast<int>(heap_.size());
  while (true) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) child++;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

int Solver::heap_pop() {
  int v = heap_[0];
  heap_pos_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_update_down(0);
  }
  return v;
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assigns_[v] == 0)
      return Lit::make(v, polarity_[v] != 0);
  }
  return Lit{-2};
}

Outcome Solver::solve(const std::vector<Lit>& assumptions) {
  Outcome out;
  cancel_until(0);
  if (!ok_) {
    out.status = Status::Unsat;
    return out;
  }
  for (Lit a : assumptions) ensure_var(a.var());

  while (true) {
    int confl = propagate();
    if (confl != -1) {
      stats_.conflicts++;
      if (conflict_budget_ >= 0 &&
          stats_.conflicts > static_cast<std::uint64_t>(conflict_budget_))
        throw ResourceLimitError("sat: conflict budget exceeded");
      if (decision_level() == 0) {
        // unsatisfiable independently of any assumption
        ok_ = false;
        out.status = Status::Unsat;
        return out;
      }
      std::vector<Lit> learnt;
      int bt;
      analyze(confl, learnt, bt);
      cancel_until(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        clauses_.push_back(learnt);
        int cref = static_cast<int>(clauses_.size()) - 1;
        attach_clause(cref);
        enqueue(learnt[0], cref);
      }
      decay();
      continue;
    }
    if (decision_level() < static_cast<int>(assumptions.size())) {
      Lit p = assumptions[decision_level()];
      if (value(p) == 1) {
        new_decision_level();  // already satisfied, dummy level
      } else if (value(p) == -1) {
        analyze_final(p, out.failed_assumptions);
        std::sort(out.failed_assumptions.begin(), out.failed_assumptions.end());
        out.failed_assumptions.erase(std::unique(out.failed_assumptions.begin(),
                                                 out.failed_assumptions.end()),
                                     out.failed_assumptions.end());
        out.status = Status::Unsat;
        cancel_until(0);
        return out;
      } else {
        stats_.decisions++;
        new_decision_level();
        enqueue(p, -1);
      }
      continue;
    }
    Lit next = pick_branch();
    if (next.code == -2) {
      out.status = Status::Sat;
      out.model.assign(num_vars_ + 1, false);
      for (int v = kVarBase; v <= num_vars_; v++) out.model[v] = assigns_[v] == 1;
      cancel_until(0);
      return out;
    }
    stats_.decisions++;
    new_decision_level();
    enqueue(next, -1);
  }
}

void write_dimacs(std::ostream& out, int num_vars,
                  const std::vector<std::vector<Lit>>& clauses,
                  const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << "c " << c << "\n";
  out << "p cnf " << num_vars << " " << clauses.size() << "\n";
  for (const std::vector<Lit>& clause : clauses) {
    for (Lit l : clause) out << l.to_dimacs() << " ";
    out << "0\n";
  }
}

Outcome ExternalSolver::solve(int num_vars,
                              const std::vector<std::vector<Lit>>& clauses,
                              const std::vector<Lit>& assumptions) const {
  std::string in_path = "/tmp/fmf_ext_in.cnf";
  std::string out_path = "/tmp/fmf_ext_out.txt";
  {
    std::ofstream f(in_path);
    write_dimacs(f, num_vars, clauses, {});
    f << "a ";
    for (Lit l : assumptions) f << l.to_dimacs() << " ";
    f << "0\n";
  }
  std::string cmd = command_ + " < " + in_path + " > " + out_path;
  int rc = std::system(cmd.c_str());
  if (rc != 0) throw ResourceLimitError("external solver failed: " + command_);

  std::ifstream f(out_path);
  Outcome out;
  out.model.assign(num_vars + 1, false);
  std::string line;
  bool have_status = false;
  while (std::getline(f, line)) {
    if (line.rfind("s ", 0) == 0) {
      have_status = true;
      out.status = line.find("UNSAT") != std::string::npos ? Status::Unsat
                                                           : Status::Sat;
    } else if (line.rfind("v ", 0) == 0 || line.rfind("f ", 0) == 0) {
      bool core = line[0] == 'f';
      std::istringstream ls(line.substr(2));
      int d;
      while (ls >> d && d != 0) {
        if (core)
          out.failed_assumptions.push_back(Lit::from_dimacs(d));
        else if (d > 0 && d <= num_vars)
          out.model[d] = true;
      }
    }
  }
  if (!have_status)
    throw ResourceLimitError("external solver produced no status line");
  return out;
}

}  // namespace fmf::sat
