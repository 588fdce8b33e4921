#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fmf/logic.hpp"

namespace fmf {

enum class FormulaKind {
  True,
  False,
  Atom,  // positive literal payload
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
};

struct Formula {
  FormulaKind kind = FormulaKind::True;
  Literal atom;                                 // Atom
  std::vector<Formula> children;                // connectives, quantifier body
  std::vector<std::pair<int, SortId>> binders;  // quantifiers

  static Formula constant(bool value) {
    Formula f;
    f.kind = value ? FormulaKind::True : FormulaKind::False;
    return f;
  }
  static Formula make_atom(Literal l) {
    Formula f;
    f.kind = FormulaKind::Atom;
    f.atom = std::move(l);
    return f;
  }
  static Formula unary(FormulaKind k, Formula child) {
    Formula f;
    f.kind = k;
    f.children.push_back(std::move(child));
    return f;
  }
  static Formula nary(FormulaKind k, std::vector<Formula> children) {
    Formula f;
    f.kind = k;
    f.children = std::move(children);
    return f;
  }
  static Formula quantified(FormulaKind k,
                            std::vector<std::pair<int, SortId>> binders,
                            Formula body) {
    Formula f;
    f.kind = k;
    f.binders = std::move(binders);
    f.children.push_back(std::move(body));
    return f;
  }
};

enum class Role { Axiom, Conjecture, Other };

// A named input formula; all bound variables carry a sort and free
// variables are disallowed.
struct SourceFormula {
  std::string name;
  Role role = Role::Axiom;
  Formula body;
  std::string origin;
};

}  // namespace fmf
