#include "fmf/logic.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fmf {

SortId Signature::add_sort(const std::string& name) {
  if (sort_by_name_.count(name))
    throw InternalError("duplicate sort name: " + name);
  sorts_.push_back({name});
  SortId id = static_cast<SortId>(sorts_.size()) - 1;
  sort_by_name_[name] = id;
  return id;
}

int Signature::add_function(FuncSymbol f) {
  if (func_by_name_.count(f.name))
    throw InternalError("duplicate function name: " + f.name);
  if (f.ret_sort < 0 || f.ret_sort >= num_sorts())
    throw InternalError("function " + f.name + " has unknown return sort");
  for (SortId s : f.arg_sorts)
    if (s < 0 || s >= num_sorts())
      throw InternalError("function " + f.name + " has unknown argument sort");
  funcs_.push_back(std::move(f));
  int id = static_cast<int>(funcs_.size()) - 1;
  func_by_name_[funcs_.back().name] = id;
  return id;
}

int Signature::add_predicate(PredSymbol p) {
  if (pred_by_name_.count(p.name))
    throw InternalError("duplicate predicate name: " + p.name);
  for (SortId s : p.arg_sorts)
    if (s < 0 || s >= num_sorts())
      throw InternalError("predicate " + p.name + " has unknown argument sort");
  preds_.push_back(std::move(p));
  int id = static_cast<int>(preds_.size()) - 1;
  pred_by_name_[preds_.back().name] = id;
  return id;
}

std::optional<SortId> Signature::find_sort(const std::string& name) const {
  auto it = sort_by_name_.find(name);
  if (it == sort_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Signature::find_function(const std::string& name) const {
  auto it = func_by_name_.find(name);
  if (it == func_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Signature::find_predicate(const std::string& name) const {
  auto it = pred_by_name_.find(name);
  if (it == pred_by_name_.end()) return std::nullopt;
  return it->second;
}

std::string Signature::fresh_name(const std::string& stem) const {
  for (int i = 1;; i++) {
    std::string candidate = stem + std::to_string(i);
    if (!func_by_name_.count(candidate) && !pred_by_name_.count(candidate) &&
        !sort_by_name_.count(candidate))
      return candidate;
  }
}

bool Term::operator==(const Term& o) const { return compare(*this, o) == 0; }

int compare(const Term& a, const Term& b) {
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (a.is_var()) {
    if (a.var != b.var) return a.var < b.var ? -1 : 1;
    if (a.var_sort != b.var_sort) return a.var_sort < b.var_sort ? -1 : 1;
    return 0;
  }
  if (a.func != b.func) return a.func < b.func ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); i++) {
    int c = compare(a.args[i], b.args[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool Literal::operator==(const Literal& o) const { return compare(*this, o) == 0; }

int compare(const Literal& a, const Literal& b) {
  if (a.is_equality() != b.is_equality()) return a.is_equality() ? 1 : -1;
  if (a.pred != b.pred) return a.pred < b.pred ? -1 : 1;
  if (a.positive != b.positive) return a.positive ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); i++) {
    int c = compare(a.args[i], b.args[i]);
    if (c != 0) return c;
  }
  return 0;
}

namespace {

void check_term(const Term& t, SortId expected, const Signature& sig,
                const std::string& where, std::vector<Diagnostic>& out) {
  if (t.is_var()) {
    if (t.var_sort != expected)
      out.push_back({where, "variable of sort " + sig.sort(t.var_sort).name +
                                " used where " + sig.sort(expected).name +
                                " is required"});
    return;
  }
  const FuncSymbol& f = sig.function(t.func);
  if (f.ret_sort != expected)
    out.push_back({where, "term headed by " + f.name + " has sort " +
                              sig.sort(f.ret_sort).name + " but " +
                              sig.sort(expected).name + " is required"});
  if (static_cast<int>(t.args.size()) != f.arity()) {
    out.push_back({where, f.name + " applied to " +
                              std::to_string(t.args.size()) +
                              " arguments, arity is " +
                              std::to_string(f.arity())});
    return;
  }
  for (size_t i = 0; i < t.args.size(); i++)
    check_term(t.args[i], f.arg_sorts[i], sig, where, out);
}

}  // namespace

std::vector<Diagnostic> check_well_sorted(const Problem& problem) {
  std::vector<Diagnostic> out;
  const Signature& sig = problem.signature;
  for (const Clause& c : problem.clauses) {
    const std::string& where = c.origin;
    // consistency of variable sorts across the clause
    std::map<int, SortId> var_sorts;
    std::vector<const Term*> stack;
    for (const Literal& l : c.literals)
      for (const Term& t : l.args) stack.push_back(&t);
    while (!stack.empty()) {
      const Term* t = stack.back();
      stack.pop_back();
      if (t->is_var()) {
        auto [it, inserted] = var_sorts.emplace(t->var, t->var_sort);
        if (!inserted && it->second != t->var_sort)
          out.push_back({where, "variable used at two different sorts"});
      } else {
        for (const Term& a : t->args) stack.push_back(&a);
      }
    }
    for (const Literal& l : c.literals) {
      if (l.is_equality()) {
        SortId ls = l.lhs().sort(sig);
        SortId rs = l.rhs().sort(sig);
        if (ls != rs) {
          out.push_back({where, "equality between terms of sorts " +
                                    sig.sort(ls).name + " and " +
                                    sig.sort(rs).name});
          continue;
        }
        check_term(l.lhs(), ls, sig, where, out);
        check_term(l.rhs(), ls, sig, where, out);
      } else {
        const PredSymbol& p = sig.predicate(l.pred);
        if (static_cast<int>(l.args.size()) != p.arity()) {
          out.push_back({where, p.name + " applied to " +
                                    std::to_string(l.args.size()) +
                                    " arguments, arity is " +
                                    std::to_string(p.arity())});
          continue;
        }
        for (size_t i = 0; i < l.args.size(); i++)
          check_term(l.args[i], p.arg_sorts[i], sig, where, out);
      }
    }
  }
  return out;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kCountCap / b) return kCountCap;
  std::uint64_t r = a * b;
  return r > kCountCap ? kCountCap : r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r < a || r > kCountCap) return kCountCap;
  return r;
}

std::vector<std::pair<int, SortId>> clause_variables(const Clause& clause) {
  std::vector<std::pair<int, SortId>> vars;
  std::set<int> seen;
  std::vector<const Term*> stack;
  auto visit = [&](const Term& t) {
    stack.push_back(&t);
    while (!stack.empty()) {
      const Term* u = stack.back();
      stack.pop_back();
      if (u->is_var()) {
        if (seen.insert(u->var).second) vars.emplace_back(u->var, u->var_sort);
      } else {
        for (auto it = u->args.rbegin(); it != u->args.rend(); ++it)
          stack.push_back(&*it);
      }
    }
  };
  for (const Literal& l : clause.literals)
    for (const Term& t : l.args) visit(t);
  return vars;
}

std::uint64_t count_dc_instances(const Clause& clause, const Signature&,
                                 const DomainSizeAssignment& n) {
  std::uint64_t count = 1;
  for (auto [var, sort] : clause_variables(clause))
    count = sat_mul(count, static_cast<std::uint64_t>(n.size_of(sort)));
  return count;
}

namespace {

Term rename_term(const Term& t, std::map<int, int>& renaming, int& next) {
  if (t.is_var()) {
    auto [it, inserted] = renaming.emplace(t.var, next);
    if (inserted) next++;
    return Term::variable(it->second, t.var_sort);
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(rename_term(a, renaming, next));
  return Term::app(t.func, std::move(args));
}

}  // namespace

Clause normalize_clause(Clause clause) {
  for (Literal& l : clause.literals) {
    // orient equalities: non-variable side first, then smaller term first
    if (!l.is_equality()) continue;
    bool swap = false;
    if (l.args[0].is_var() && l.args[1].is_app())
      swap = true;
    else if (l.args[0].is_var() == l.args[1].is_var())
      swap = compare(l.args[0], l.args[1]) > 0;
    if (swap) std::swap(l.args[0], l.args[1]);
  }
  std::sort(clause.literals.begin(), clause.literals.end(),
            [](const Literal& a, const Literal& b) { return compare(a, b) < 0; });
  clause.literals.erase(std::unique(clause.literals.begin(), clause.literals.end()),
                        clause.literals.end());
  std::map<int, int> renaming;
  int next = 0;
  for (Literal& l : clause.literals)
    for (Term& t : l.args) t = rename_term(t, renaming, next);
  return clause;
}

std::string to_string(const Term& t, const Signature& sig) {
  if (t.is_var()) return "X" + std::to_string(t.var);
  std::string s = sig.function(t.func).name;
  if (!t.args.empty()) {
    s += "(";
    for (size_t i = 0; i < t.args.size(); i++) {
      if (i) s += ",";
      s += to_string(t.args[i], sig);
    }
    s += ")";
  }
  return s;
}

std::string to_string(const Literal& l, const Signature& sig) {
  if (l.is_equality())
    return to_string(l.lhs(), sig) + (l.positive ? " = " : " != ") +
           to_string(l.rhs(), sig);
  std::string s;
  if (!l.positive) s += "~";
  s += sig.predicate(l.pred).name;
  if (!l.args.empty()) {
    s += "(";
    for (size_t i = 0; i < l.args.size(); i++) {
      if (i) s += ",";
      s += to_string(l.args[i], sig);
    }
    s += ")";
  }
  return s;
}

std::string to_string(const Clause& c, const Signature& sig) {
  if (c.literals.empty()) return "$false";
  std::string s;
  for (size_t i = 0; i < c.literals.size(); i++) {
    if (i) s += " | ";
    s += to_string(c.literals[i], sig);
  }
  return s;
}

}  // namespace fmf
