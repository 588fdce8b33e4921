// Sorted first-order syntax: sorts, signatures, terms, literals, clauses.
// All values are immutable after construction and safe to share across
// threads without locking.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmf {

using SortId = int;

struct Sort {
  std::string name;
};

enum class SymbolOrigin { Input, Skolem, Definition, Split };

struct FuncSymbol {
  std::string name;
  std::vector<SortId> arg_sorts;
  SortId ret_sort = -1;
  SymbolOrigin origin = SymbolOrigin::Input;

  int arity() const { return static_cast<int>(arg_sorts.size()); }
  bool is_constant() const { return arg_sorts.empty(); }
};

struct PredSymbol {
  std::string name;
  std::vector<SortId> arg_sorts;
  SymbolOrigin origin = SymbolOrigin::Input;

  int arity() const { return static_cast<int>(arg_sorts.size()); }
};

// Symbol names are unique within their kind; every referenced sort exists.
class Signature {
public:
  SortId add_sort(const std::string& name);
  int add_function(FuncSymbol f);
  int add_predicate(PredSymbol p);

  std::optional<SortId> find_sort(const std::string& name) const;
  std::optional<int> find_function(const std::string& name) const;
  std::optional<int> find_predicate(const std::string& name) const;

  const Sort& sort(SortId s) const { return sorts_.at(s); }
  const FuncSymbol& function(int f) const { return funcs_.at(f); }
  const PredSymbol& predicate(int p) const { return preds_.at(p); }

  // used by the sort transforms, which retype symbols in place
  FuncSymbol& function_mut(int f) { return funcs_.at(f); }
  PredSymbol& predicate_mut(int p) { return preds_.at(p); }

  int num_sorts() const { return static_cast<int>(sorts_.size()); }
  int num_functions() const { return static_cast<int>(funcs_.size()); }
  int num_predicates() const { return static_cast<int>(preds_.size()); }

  // Picks a name not yet used by any symbol, of the form <stem><counter>.
  std::string fresh_name(const std::string& stem) const;

private:
  std::vector<Sort> sorts_;
  std::vector<FuncSymbol> funcs_;
  std::vector<PredSymbol> preds_;
  std::map<std::string, SortId> sort_by_name_;
  std::map<std::string, int> func_by_name_;
  std::map<std::string, int> pred_by_name_;
};

// A term is a variable (carrying its sort directly, fixed at parse or
// clausify time) or a function application.
struct Term {
  int func = -1;  // -1 for variables
  int var = -1;
  SortId var_sort = -1;
  std::vector<Term> args;

  static Term variable(int id, SortId sort) {
    Term t;
    t.var = id;
    t.var_sort = sort;
    return t;
  }
  static Term app(int func, std::vector<Term> args = {}) {
    Term t;
    t.func = func;
    t.args = std::move(args);
    return t;
  }

  bool is_var() const { return func < 0; }
  bool is_app() const { return func >= 0; }

  SortId sort(const Signature& sig) const {
    return is_var() ? var_sort : sig.function(func).ret_sort;
  }

  bool operator==(const Term& o) const;
};

int compare(const Term& a, const Term& b);

// Predicate atom (possibly negated) or equality between same-sorted terms.
struct Literal {
  bool positive = true;
  int pred = -1;  // -1 for equality literals
  std::vector<Term> args;

  static Literal predicate(bool positive, int pred, std::vector<Term> args) {
    Literal l;
    l.positive = positive;
    l.pred = pred;
    l.args = std::move(args);
    return l;
  }
  static Literal equality(bool positive, Term lhs, Term rhs) {
    Literal l;
    l.positive = positive;
    l.args = {std::move(lhs), std::move(rhs)};
    return l;
  }

  bool is_equality() const { return pred < 0; }
  const Term& lhs() const { return args[0]; }
  const Term& rhs() const { return args[1]; }
  Literal negated() const {
    Literal l = *this;
    l.positive = !l.positive;
    return l;
  }

  bool operator==(const Literal& o) const;
};

int compare(const Literal& a, const Literal& b);

// Disjunction of literals; variables are implicitly universally quantified.
struct Clause {
  std::vector<Literal> literals;
  std::string origin;  // source location or transform provenance

  bool empty() const { return literals.empty(); }
};

struct Problem {
  Signature signature;
  std::vector<Clause> clauses;
};

// Map sort -> domain size; a node of the search graph. Every sort of the
// problem has an entry and all entries are >= 1.
struct DomainSizeAssignment {
  std::vector<int> sizes;

  static DomainSizeAssignment ones(int num_sorts) {
    DomainSizeAssignment n;
    n.sizes.assign(num_sorts, 1);
    return n;
  }
  int size_of(SortId s) const { return sizes.at(s); }
  bool operator==(const DomainSizeAssignment& o) const { return sizes == o.sizes; }
  bool operator<(const DomainSizeAssignment& o) const { return sizes < o.sizes; }
};

struct Diagnostic {
  std::string where;
  std::string message;
};

// Empty result iff every term and literal obeys the signature's sort
// discipline. Idempotent and side-effect free.
std::vector<Diagnostic> check_well_sorted(const Problem& problem);

inline constexpr std::uint64_t kCountCap = UINT64_C(1) << 62;

// Saturating multiply used by instance counting and size estimation;
// results are capped at kCountCap.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b);

// Number of DC-instances of a clause under an assignment: product over
// distinct variables v of n_{sort(v)}; 1 for ground clauses. Overflow is
// reported as the capped sentinel kCountCap.
std::uint64_t count_dc_instances(const Clause& clause, const Signature& sig,
                                 const DomainSizeAssignment& n);

// Distinct variables of a clause in first-occurrence order, with sorts.
std::vector<std::pair<int, SortId>> clause_variables(const Clause& clause);

// Renumbers variables to first-occurrence order and sorts literals by the
// structural total order, dropping duplicates, so encodings and printed
// output are reproducible.
Clause normalize_clause(Clause clause);

std::string to_string(const Term& t, const Signature& sig);
std::string to_string(const Literal& l, const Signature& sig);
std::string to_string(const Clause& c, const Signature& sig);

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace fmf
