#include "fmf/preprocess.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fmf {

bool is_flat(const Literal& l) {
  if (!l.is_equality()) {
    for (const Term& t : l.args)
      if (!t.is_var()) return false;
    return true;
  }
  const Term& a = l.lhs();
  const Term& b = l.rhs();
  if (a.is_var() && b.is_var()) return l.positive;  // x != y is not flat
  auto flat_app = [](const Term& t) {
    if (!t.is_app()) return false;
    for (const Term& u : t.args)
      if (!u.is_var()) return false;
    return true;
  };
  if (flat_app(a) && b.is_var()) return true;
  if (flat_app(b) && a.is_var()) return true;
  return false;
}

bool is_flat(const Clause& c) {
  for (const Literal& l : c.literals)
    if (!is_flat(l)) return false;
  return true;
}

namespace {

Term subst_var(const Term& t, int from, const Term& to) {
  if (t.is_var()) return t.var == from ? to : t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(subst_var(a, from, to));
  return Term::app(t.func, std::move(args));
}

void subst_var(Clause& c, int from, const Term& to) {
  for (Literal& l : c.literals)
    for (Term& t : l.args) t = subst_var(t, from, to);
}

int max_var_id(const Clause& c) {
  int m = -1;
  for (auto [v, s] : clause_variables(c)) m = std::max(m, v);
  return m;
}

}  // namespace

Clause eliminate_variable_inequalities(Clause clause) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < clause.literals.size(); i++) {
      const Literal& l = clause.literals[i];
      if (!l.is_equality() || l.positive) continue;
      if (!l.lhs().is_var() || !l.rhs().is_var()) continue;
      int x = l.lhs().var, y = l.rhs().var;
      SortId xs = l.lhs().var_sort;
      clause.literals.erase(clause.literals.begin() + i);
      if (x != y) subst_var(clause, y, Term::variable(x, xs));
      changed = true;
      break;
    }
  }
  return clause;
}

namespace {

// Replaces every occurrence of the subterm `what` in the clause by a fresh
// variable and appends the definition literal what != x.
void extract_subterm(Clause& c, const Term& what, int fresh_var,
                     const Signature& sig) {
  Term x = Term::variable(fresh_var, what.sort(sig));
  std::vector<Term (*)(const Term&, const Term&, const Term&)> unused;
  struct Replacer {
    const Term& what;
    const Term& x;
    Term run(const Term& t) const {
      if (t == what) return x;
      if (t.is_var()) return t;
      std::vector<Term> args;
      args.reserve(t.args.size());
      for (const Term& a : t.args) args.push_back(run(a));
      return Term::app(t.func, std::move(args));
    }
  } rep{what, x};
  for (Literal& l : c.literals)
    for (Term& t : l.args) t = rep.run(t);
  c.literals.push_back(Literal::equality(false, what, x));
}

// First offending subterm in a fixed scan order, or nullopt when flat.
std::optional<Term> find_extraction(const Clause& c) {
  for (const Literal& l : c.literals) {
    if (is_flat(l)) continue;
    if (!l.is_equality()) {
      for (const Term& t : l.args)
        if (!t.is_var()) return t;
      continue;
    }
    const Term& a = l.lhs();
    const Term& b = l.rhs();
    // equality between two applications: pull out the right side whole
    if (a.is_app() && b.is_app()) return b;
    const Term& app_side = a.is_app() ? a : b;
    for (const Term& t : app_side.args)
      if (!t.is_var()) return t;
  }
  return std::nullopt;
}

}  // namespace

Clause flatten(Clause clause, const Signature& sig) {
  clause = eliminate_variable_inequalities(std::move(clause));
  int next_var = max_var_id(clause) + 1;
  while (true) {
    auto t = find_extraction(clause);
    if (!t) break;
    extract_subterm(clause, *t, next_var++, sig);
    clause = eliminate_variable_inequalities(std::move(clause));
  }
  return clause;
}

namespace {

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  for (const Term& a : t.args)
    if (!is_ground(a)) return false;
  return true;
}

int term_depth(const Term& t) {
  if (t.is_var() || t.args.empty()) return 0;
  int m = 0;
  for (const Term& a : t.args) m = std::max(m, term_depth(a));
  return m + 1;
}

struct DefIntroducer {
  Problem& problem;
  int threshold;
  std::vector<Clause> definitions;
  // structural hashing keyed by the printed term
  std::map<std::string, int> cache;

  Term walk(const Term& t, bool nested) {
    if (t.is_var()) return t;
    int original_depth = term_depth(t);
    std::vector<Term> args;
    args.reserve(t.args.size());
    for (const Term& a : t.args) args.push_back(walk(a, true));
    Term rebuilt = Term::app(t.func, std::move(args));
    if (!nested || rebuilt.args.empty() || !is_ground(rebuilt) ||
        original_depth < threshold)
      return rebuilt;
    std::string key = to_string(rebuilt, problem.signature);
    auto it = cache.find(key);
    if (it == cache.end()) {
      int c = problem.signature.add_function(
          {problem.signature.fresh_name("e"), {},
           rebuilt.sort(problem.signature), SymbolOrigin::Definition});
      Clause def;
      def.origin = "definition of " + key;
      def.literals.push_back(
          Literal::equality(true, Term::app(c), rebuilt));
      definitions.push_back(std::move(def));
      it = cache.emplace(key, c).first;
    }
    return Term::app(it->second);
  }
};

}  // namespace

void introduce_definitions(Problem& problem, int ground_depth_threshold) {
  DefIntroducer intro{problem, ground_depth_threshold, {}, {}};
  for (Clause& c : problem.clauses)
    for (Literal& l : c.literals)
      for (Term& t : l.args) {
        if (l.is_equality())
          t = intro.walk(t, false);  // equality sides are not argument positions
        else
          t = intro.walk(t, true);
      }
  for (Clause& d : intro.definitions) problem.clauses.push_back(std::move(d));
}

namespace {

std::set<int> literal_vars(const Literal& l) {
  std::set<int> vars;
  std::vector<const Term*> stack;
  for (const Term& t : l.args) stack.push_back(&t);
  while (!stack.empty()) {
    const Term* t = stack.back();
    stack.pop_back();
    if (t->is_var())
      vars.insert(t->var);
    else
      for (const Term& a : t->args) stack.push_back(&a);
  }
  return vars;
}

struct SplitPlan {
  std::vector<size_t> part_a;
  std::vector<size_t> part_b;
  std::vector<int> shared_vars;
  size_t worst = SIZE_MAX;  // larger part's variable count
};

std::optional<SplitPlan> plan_cut(const Clause& c,
                                  const std::vector<std::set<int>>& lit_vars,
                                  int cut_var) {
  size_t n = c.literals.size();
  // components of the literal graph ignoring cut_var
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (size_t i = 0; i < n; i++) {
    if (comp[i] != -1) continue;
    std::vector<size_t> stack = {i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (size_t v2 = 0; v2 < n; v2++) {
        if (comp[v2] != -1) continue;
        bool linked = false;
        for (int w : lit_vars[u])
          if (w != cut_var && lit_vars[v2].count(w)) {
            linked = true;
            break;
          }
        if (linked) {
          comp[v2] = ncomp;
          stack.push_back(v2);
        }
      }
    }
    ncomp++;
  }
  if (ncomp < 2) return std::nullopt;

  // heaviest component against the rest
  std::vector<std::set<int>> comp_vars(ncomp);
  for (size_t i = 0; i < n; i++)
    comp_vars[comp[i]].insert(lit_vars[i].begin(), lit_vars[i].end());
  int heaviest = 0;
  for (int k = 1; k < ncomp; k++)
    if (comp_vars[k].size() > comp_vars[heaviest].size()) heaviest = k;

  SplitPlan plan;
  std::set<int> va, vb;
  for (size_t i = 0; i < n; i++) {
    if (comp[i] == heaviest) {
      plan.part_a.push_back(i);
      va.insert(lit_vars[i].begin(), lit_vars[i].end());
    } else {
      plan.part_b.push_back(i);
      vb.insert(lit_vars[i].begin(), lit_vars[i].end());
    }
  }
  for (int v : va)
    if (vb.count(v)) plan.shared_vars.push_back(v);
  plan.worst = std::max(va.size(), vb.size());
  return plan;
}

}  // namespace

void split_clauses(Problem& problem, int max_variables) {
  if (max_variables < 2) max_variables = 2;
  std::vector<Clause> done;
  std::vector<Clause> work = std::move(problem.clauses);
  std::reverse(work.begin(), work.end());
  while (!work.empty()) {
    Clause c = std::move(work.back());
    work.pop_back();
    auto vars = clause_variables(c);
    if (static_cast<int>(vars.size()) <= max_variables || c.literals.size() < 2) {
      done.push_back(std::move(c));
      continue;
    }
    std::vector<std::set<int>> lit_vars;
    for (const Literal& l : c.literals) lit_vars.push_back(literal_vars(l));

    // cut at the variable whose removal minimizes the larger part's
    // variable count; ties broken by first occurrence
    std::optional<SplitPlan> best;
    for (auto [v, s] : vars) {
      auto plan = plan_cut(c, lit_vars, v);
      if (plan && (!best || plan->worst < best->worst)) best = plan;
    }
    if (!best) {
      // no single variable disconnects; peel off the widest literal
      size_t widest = 0;
      for (size_t i = 1; i < c.literals.size(); i++)
        if (lit_vars[i].size() > lit_vars[widest].size()) widest = i;
      SplitPlan plan;
      std::set<int> vb;
      plan.part_a.push_back(widest);
      for (size_t i = 0; i < c.literals.size(); i++)
        if (i != widest) {
          plan.part_b.push_back(i);
          vb.insert(lit_vars[i].begin(), lit_vars[i].end());
        }
      for (int v : lit_vars[widest])
        if (vb.count(v)) plan.shared_vars.push_back(v);
      plan.worst = std::max(lit_vars[widest].size(), vb.size());
      best = plan;
    }
    if (best->worst >= vars.size()) {
      done.push_back(std::move(c));  // no split makes progress
      continue;
    }

    std::map<int, SortId> sort_of;
    for (auto [v, s] : vars) sort_of[v] = s;
    std::vector<SortId> arg_sorts;
    std::vector<Term> args;
    for (int v : best->shared_vars) {
      arg_sorts.push_back(sort_of[v]);
      args.push_back(Term::variable(v, sort_of[v]));
    }
    int p = problem.signature.add_predicate(
        {problem.signature.fresh_name("sp"), arg_sorts, SymbolOrigin::Split});

    Clause a, b;
    a.origin = c.origin;
    b.origin = c.origin;
    for (size_t i : best->part_a) a.literals.push_back(c.literals[i]);
    a.literals.push_back(Literal::predicate(true, p, args));
    b.literals.push_back(Literal::predicate(false, p, args));
    for (size_t i : best->part_b) b.literals.push_back(c.literals[i]);
    work.push_back(std::move(b));
    work.push_back(std::move(a));
  }
  problem.clauses = std::move(done);
}

void preprocess(Problem& problem, const PreprocessOptions& opts) {
  for (Clause& c : problem.clauses)
    c = eliminate_variable_inequalities(std::move(c));
  if (opts.definitions)
    introduce_definitions(problem, opts.ground_depth_threshold);
  for (Clause& c : problem.clauses)
    c = normalize_clause(flatten(std::move(c), problem.signature));
}

}  // namespace fmf
