#include "fmf/clausify.hpp"

#include <algorithm>
#include <set>

namespace fmf {

namespace {

void free_vars(const Formula& f, std::set<int>& out) {
  switch (f.kind) {
    case FormulaKind::Atom: {
      std::vector<const Term*> stack;
      for (const Term& t : f.atom.args) stack.push_back(&t);
      while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        if (t->is_var())
          out.insert(t->var);
        else
          for (const Term& a : t->args) stack.push_back(&a);
      }
      break;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      std::set<int> inner;
      free_vars(f.children[0], inner);
      for (auto [v, s] : f.binders) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      break;
    }
    default:
      for (const Formula& c : f.children) free_vars(c, out);
  }
}

bool contains_var(const Formula& f, int var) {
  std::set<int> fv;
  free_vars(f, fv);
  return fv.count(var) > 0;
}

Term subst_term(const Term& t, int var, const Term& replacement) {
  if (t.is_var()) return t.var == var ? replacement : t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(subst_term(a, var, replacement));
  return Term::app(t.func, std::move(args));
}

void subst(Formula& f, int var, const Term& replacement) {
  if (f.kind == FormulaKind::Atom) {
    for (Term& t : f.atom.args) t = subst_term(t, var, replacement);
    return;
  }
  for (Formula& c : f.children) subst(c, var, replacement);
}

Formula mk_and(std::vector<Formula> parts);
Formula mk_or(std::vector<Formula> parts);

Formula mk_and(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (Formula& p : parts) {
    if (p.kind == FormulaKind::True) continue;
    if (p.kind == FormulaKind::False) return Formula::constant(false);
    if (p.kind == FormulaKind::And)
      for (Formula& c : p.children) flat.push_back(std::move(c));
    else
      flat.push_back(std::move(p));
  }
  if (flat.empty()) return Formula::constant(true);
  if (flat.size() == 1) return std::move(flat[0]);
  return Formula::nary(FormulaKind::And, std::move(flat));
}

Formula mk_or(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (Formula& p : parts) {
    if (p.kind == FormulaKind::False) continue;
    if (p.kind == FormulaKind::True) return Formula::constant(true);
    if (p.kind == FormulaKind::Or)
      for (Formula& c : p.children) flat.push_back(std::move(c));
    else
      flat.push_back(std::move(p));
  }
  if (flat.empty()) return Formula::constant(false);
  if (flat.size() == 1) return std::move(flat[0]);
  return Formula::nary(FormulaKind::Or, std::move(flat));
}

Formula nnf(const Formula& f, bool positive) {
  switch (f.kind) {
    case FormulaKind::True:
      return Formula::constant(positive);
    case FormulaKind::False:
      return Formula::constant(!positive);
    case FormulaKind::Atom: {
      Literal l = f.atom;
      if (!positive) l.positive = !l.positive;
      return Formula::make_atom(std::move(l));
    }
    case FormulaKind::Not:
      return nnf(f.children[0], !positive);
    case FormulaKind::And:
    case FormulaKind::Or: {
      bool conj = (f.kind == FormulaKind::And) == positive;
      std::vector<Formula> parts;
      for (const Formula& c : f.children) parts.push_back(nnf(c, positive));
      return conj ? mk_and(std::move(parts)) : mk_or(std::move(parts));
    }
    case FormulaKind::Implies: {
      const Formula& a = f.children[0];
      const Formula& b = f.children[1];
      if (positive) return mk_or({nnf(a, false), nnf(b, true)});
      return mk_and({nnf(a, true), nnf(b, false)});
    }
    case FormulaKind::Iff: {
      const Formula& a = f.children[0];
      const Formula& b = f.children[1];
      if (positive)
        return mk_and({mk_or({nnf(a, false), nnf(b, true)}),
                       mk_or({nnf(b, false), nnf(a, true)})});
      return mk_or({mk_and({nnf(a, true), nnf(b, false)}),
                    mk_and({nnf(b, true), nnf(a, false)})});
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool universal = (f.kind == FormulaKind::Forall) == positive;
      Formula body = nnf(f.children[0], positive);
      if (body.kind == FormulaKind::True || body.kind == FormulaKind::False)
        return body;
      return Formula::quantified(
          universal ? FormulaKind::Forall : FormulaKind::Exists, f.binders,
          std::move(body));
    }
  }
  throw InternalError("nnf: unreachable");
}

// pushes a single quantified variable into an NNF body as far as it goes
Formula push_quant(FormulaKind q, int var, SortId sort, Formula body) {
  if (!contains_var(body, var)) return body;
  FormulaKind distributive = q == FormulaKind::Forall ? FormulaKind::And
                                                      : FormulaKind::Or;
  FormulaKind blocking = q == FormulaKind::Forall ? FormulaKind::Or
                                                  : FormulaKind::And;
  if (body.kind == distributive) {
    std::vector<Formula> parts;
    for (Formula& c : body.children)
      parts.push_back(push_quant(q, var, sort, std::move(c)));
    return distributive == FormulaKind::And ? mk_and(std::move(parts))
                                            : mk_or(std::move(parts));
  }
  if (body.kind == blocking) {
    std::vector<Formula> with, without;
    for (Formula& c : body.children) {
      if (contains_var(c, var))
        with.push_back(std::move(c));
      else
        without.push_back(std::move(c));
    }
    Formula bound = Formula::quantified(
        q, {{var, sort}},
        blocking == FormulaKind::Or ? mk_or(std::move(with))
                                    : mk_and(std::move(with)));
    without.push_back(std::move(bound));
    return blocking == FormulaKind::Or ? mk_or(std::move(without))
                                       : mk_and(std::move(without));
  }
  return Formula::quantified(q, {{var, sort}}, std::move(body));
}

Formula miniscope(Formula f) {
  switch (f.kind) {
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> parts;
      for (Formula& c : f.children) parts.push_back(miniscope(std::move(c)));
      return f.kind == FormulaKind::And ? mk_and(std::move(parts))
                                        : mk_or(std::move(parts));
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      Formula body = miniscope(std::move(f.children[0]));
      for (auto it = f.binders.rbegin(); it != f.binders.rend(); ++it)
        body = push_quant(f.kind, it->first, it->second, std::move(body));
      return body;
    }
    default:
      return f;
  }
}

struct Skolemizer {
  Signature& sig;
  std::vector<std::pair<int, SortId>> universal;

  Formula walk(Formula f) {
    switch (f.kind) {
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> parts;
        for (Formula& c : f.children) parts.push_back(walk(std::move(c)));
        return f.kind == FormulaKind::And ? mk_and(std::move(parts))
                                          : mk_or(std::move(parts));
      }
      case FormulaKind::Forall: {
        size_t mark = universal.size();
        for (auto b : f.binders) universal.push_back(b);
        Formula body = walk(std::move(f.children[0]));
        universal.resize(mark);
        // universally quantified variables stay free in the matrix
        return body;
      }
      case FormulaKind::Exists: {
        Formula body = std::move(f.children[0]);
        for (auto [var, sort] : f.binders) {
          std::set<int> fv;
          free_vars(body, fv);
          std::vector<Term> args;
          std::vector<SortId> arg_sorts;
          for (auto [uv, us] : universal) {
            if (fv.count(uv)) {
              args.push_back(Term::variable(uv, us));
              arg_sorts.push_back(us);
            }
          }
          int sk = sig.add_function({sig.fresh_name("sk"), arg_sorts, sort,
                                     SymbolOrigin::Skolem});
          subst(body, var, Term::app(sk, args));
        }
        return walk(std::move(body));
      }
      default:
        return f;
    }
  }
};

void distribute(const Formula& f, std::vector<std::vector<Literal>>& clauses,
                std::uint64_t limit) {
  switch (f.kind) {
    case FormulaKind::True:
      return;
    case FormulaKind::False:
      clauses.push_back({});
      return;
    case FormulaKind::Atom:
      clauses.push_back({f.atom});
      return;
    case FormulaKind::And:
      for (const Formula& c : f.children) distribute(c, clauses, limit);
      return;
    case FormulaKind::Or: {
      std::vector<std::vector<Literal>> acc = {{}};
      for (const Formula& c : f.children) {
        std::vector<std::vector<Literal>> child;
        distribute(c, child, limit);
        std::vector<std::vector<Literal>> next;
        for (const auto& a : acc) {
          for (const auto& b : child) {
            std::vector<Literal> merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            next.push_back(std::move(merged));
            if (next.size() + clauses.size() > limit)
              throw ResourceLimitError("clausify: CNF clause limit exceeded");
          }
        }
        acc = std::move(next);
        if (acc.empty()) return;  // a child produced no clauses: child is true
      }
      for (auto& c : acc) clauses.push_back(std::move(c));
      return;
    }
    default:
      throw InternalError("distribute: input not in skolemized NNF");
  }
}

// true when the clause is valid regardless of interpretation
bool tautological(const Clause& c) {
  for (const Literal& l : c.literals) {
    if (l.is_equality() && l.positive && l.lhs() == l.rhs()) return true;
    for (const Literal& m : c.literals)
      if (l.positive && !m.positive && l.pred == m.pred && l.args == m.args)
        return true;
  }
  return false;
}

}  // namespace

Problem clausify(const ParseResult& input, const ClausifyOptions& opts) {
  Problem out;
  out.signature = input.signature;
  for (const SourceFormula& sf : input.formulas) {
    Formula body = sf.body;
    if (sf.role == Role::Conjecture && opts.negate_conjectures)
      body = Formula::unary(FormulaKind::Not, std::move(body));
    body = nnf(body, true);
    body = miniscope(std::move(body));
    Skolemizer sk{out.signature, {}};
    body = sk.walk(std::move(body));
    std::vector<std::vector<Literal>> raw;
    distribute(body, raw, opts.clause_limit);
    for (auto& lits : raw) {
      Clause c;
      c.origin = sf.name;
      for (Literal& l : lits) {
        // a literal t != t is false, drop it
        if (l.is_equality() && !l.positive && l.lhs() == l.rhs()) continue;
        c.literals.push_back(std::move(l));
      }
      c = normalize_clause(std::move(c));
      if (tautological(c)) continue;
      bool duplicate = false;
      for (const Clause& prev : out.clauses) {
        if (prev.literals == c.literals) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) out.clauses.push_back(std::move(c));
    }
    if (out.clauses.size() > opts.clause_limit)
      throw ResourceLimitError("clausify: CNF clause limit exceeded");
  }
  return out;
}

}  // namespace fmf
