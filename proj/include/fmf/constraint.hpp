#pragma once

#include <string>
#include <vector>

#include "fmf/logic.hpp"

namespace fmf {

enum class Rel { Lt, Le, Gt, Ge };

// One atomic comparison over symbolic sort sizes.
struct ConstraintAtom {
  enum class Kind { SizeCmp, InterSort };
  Kind kind = Kind::SizeCmp;
  SortId sort_a = -1;
  Rel rel = Rel::Lt;
  int bound = 0;     // SizeCmp: |sort_a| rel bound
  SortId sort_b = -1;  // InterSort: |sort_a| rel |sort_b|, rel in {Lt, Le}

  static ConstraintAtom size_cmp(SortId s, Rel r, int bound) {
    ConstraintAtom a;
    a.kind = Kind::SizeCmp;
    a.sort_a = s;
    a.rel = r;
    a.bound = bound;
    return a;
  }
  static ConstraintAtom inter_sort(SortId a_, Rel r, SortId b_) {
    ConstraintAtom a;
    a.kind = Kind::InterSort;
    a.sort_a = a_;
    a.rel = r;
    a.sort_b = b_;
    return a;
  }

  bool eval(const DomainSizeAssignment& n) const;

  // true when growing `sort` can never flip this atom from false to true
  bool non_increasing_in(SortId sort) const;

  // true when no growth in any direction can flip this atom to true
  bool non_increasing_everywhere() const;

  std::string to_string(const Signature& sig) const;
  bool operator==(const ConstraintAtom& o) const;
};

// Disjunction of atomic comparisons; the learned or detected pruning
// predicate. Disjunct list is nonempty.
struct Constraint {
  std::vector<ConstraintAtom> disjuncts;

  bool satisfied_by(const DomainSizeAssignment& n) const;
  std::string to_string(const Signature& sig) const;
  bool operator==(const Constraint& o) const;
};

}  // namespace fmf
