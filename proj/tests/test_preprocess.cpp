#include <random>

#include "doctest.h"
#include "fmf/clausify.hpp"
#include "fmf/parser.hpp"
#include "fmf/preprocess.hpp"
#include "support/bruteforce.hpp"

using namespace fmf;

namespace {

Problem single_sort() {
  Problem p;
  SortId s = p.signature.add_sort("s");
  p.signature.add_predicate({"p", {s}});
  p.signature.add_function({"f", {s}, s});
  p.signature.add_function({"a", {}, s});
  p.signature.add_function({"b", {}, s});
  return p;
}

Problem parse_clause(const std::string& text) {
  Problem p = clausify(parse("cnf(c, axiom, (" + text + ")).\n"));
  REQUIRE(p.clauses.size() == 1);
  return p;
}

}  // namespace

TEST_CASE("variable inequalities unfold by substitution") {
  Problem p = single_sort();
  SortId s = 0;
  // x != y | p(x)
  Clause c;
  c.literals.push_back(
      Literal::equality(false, Term::variable(0, s), Term::variable(1, s)));
  c.literals.push_back(Literal::predicate(true, 0, {Term::variable(0, s)}));
  Clause r = eliminate_variable_inequalities(c);
  REQUIRE(r.literals.size() == 1);
  CHECK(to_string(r, p.signature) == "p(X0)");

  // positive equalities stay
  Clause pos;
  pos.literals.push_back(Literal::predicate(true, 0, {Term::variable(0, s)}));
  pos.literals.push_back(
      Literal::equality(true, Term::variable(0, s), Term::variable(1, s)));
  CHECK(eliminate_variable_inequalities(pos).literals.size() == 2);

  // a bare inequality collapses to the empty clause
  Clause bare;
  bare.literals.push_back(
      Literal::equality(false, Term::variable(0, s), Term::variable(1, s)));
  CHECK(eliminate_variable_inequalities(bare).empty());
}

TEST_CASE("flattening produces the three flat forms") {
  SUBCASE("p(b) becomes p(y) | b != y") {
    Problem p = parse_clause("p(b)");
    Clause flat = normalize_clause(flatten(p.clauses[0], p.signature));
    CHECK(is_flat(flat));
    CHECK(flat.literals.size() == 2);
    CHECK(to_string(flat, p.signature) == "p(X0) | b != X0");
  }

  SUBCASE("f(f(x)) = x becomes f(y) = x | f(x) != y") {
    Problem p = parse_clause("f(f(X)) = X");
    Clause flat = normalize_clause(flatten(p.clauses[0], p.signature));
    CHECK(is_flat(flat));
    REQUIRE(flat.literals.size() == 2);
    int positive = 0;
    for (const Literal& l : flat.literals) positive += l.positive;
    CHECK(positive == 1);
    CHECK(clause_variables(flat).size() == 2);
  }

  SUBCASE("f(a) != b flattens to f(y1) != y2 | a != y1 | b != y2") {
    // an equivalence-preserving flattening keeps the literal negative: the
    // clause must still force f(a) and b apart
    Problem p = parse_clause("f(a) != b");
    Clause flat = normalize_clause(flatten(p.clauses[0], p.signature));
    CHECK(is_flat(flat));
    REQUIRE(flat.literals.size() == 3);
    for (const Literal& l : flat.literals) CHECK(!l.positive);
    CHECK(clause_variables(flat).size() == 2);
  }
}

TEST_CASE("flattened clauses keep their meaning at tiny sizes") {
  std::string text =
      "cnf(c1, axiom, p(b)).\n"
      "cnf(c2, axiom, f(a) != b).\n"
      "cnf(c3, axiom, f(f(X)) = X).\n";
  Problem original = clausify(parse(text));
  Problem flat = original;
  for (Clause& c : flat.clauses)
    c = normalize_clause(flatten(std::move(c), flat.signature));
  for (int n = 1; n <= 3; n++) {
    DomainSizeAssignment sizes;
    sizes.sizes = {n};
    CHECK(test::brute_force_satisfiable(original, sizes) ==
          test::brute_force_satisfiable(flat, sizes));
  }
  // and the expected verdicts themselves
  DomainSizeAssignment one, two;
  one.sizes = {1};
  two.sizes = {2};
  CHECK(!test::brute_force_satisfiable(original, one));
  CHECK(test::brute_force_satisfiable(original, two));
}

TEST_CASE("definition introduction shares ground subterms") {
  std::string text = "cnf(c1, axiom, p(f(a, b), g(f(a, b)))).\n";
  Problem p = clausify(parse(text));
  introduce_definitions(p, 1);
  REQUIRE(p.clauses.size() == 3);
  // p(e1, e2) plus e1 = f(a,b) and e2 = g(e1)
  CHECK(to_string(p.clauses[0], p.signature) == "p(e1,e2)");
  int defs = 0;
  for (int f = 0; f < p.signature.num_functions(); f++)
    defs += p.signature.function(f).origin == SymbolOrigin::Definition;
  CHECK(defs == 2);

  // flat input stays unchanged
  Problem flat_in = clausify(parse("cnf(c1, axiom, p(X, Y)).\n"));
  int before = flat_in.signature.num_functions();
  introduce_definitions(flat_in, 1);
  CHECK(flat_in.signature.num_functions() == before);
  CHECK(flat_in.clauses.size() == 1);
}

TEST_CASE("definition introduction brings clause terms down to depth one") {
  std::string text = "cnf(c1, axiom, p(g(g(g(g(g(a))))))).\n";
  Problem p = clausify(parse(text));
  introduce_definitions(p, 1);
  struct Depth {
    static int of(const Term& t) {
      if (t.is_var() || t.args.empty()) return 0;
      int m = 0;
      for (const Term& a : t.args) m = std::max(m, of(a));
      return m + 1;
    }
  };
  for (const Clause& c : p.clauses)
    for (const Literal& l : c.literals)
      for (const Term& t : l.args) CHECK(Depth::of(t) <= 1);
  CHECK(test::brute_force_satisfiable(
      p, DomainSizeAssignment::ones(p.signature.num_sorts())));
}

TEST_CASE("splitting cuts at a shared variable") {
  std::string text = "cnf(c1, axiom, p(X, Y) | q(Y, Z)).\n";
  Problem p = clausify(parse(text));
  split_clauses(p, 2);
  REQUIRE(p.clauses.size() == 2);
  auto sp = p.signature.find_predicate("sp1");
  REQUIRE(sp.has_value());
  CHECK(p.signature.predicate(*sp).origin == SymbolOrigin::Split);
  CHECK(p.signature.predicate(*sp).arity() == 1);
  CHECK(clause_variables(p.clauses[0]).size() == 2);
  CHECK(clause_variables(p.clauses[1]).size() == 2);
  // p(x,y) | sp1(y)  and  ~sp1(y) | q(y,z)
  REQUIRE(p.clauses[0].literals.size() == 2);
  REQUIRE(p.clauses[1].literals.size() == 2);
  CHECK(p.clauses[0].literals[0].pred == *p.signature.find_predicate("p"));
  CHECK(p.clauses[0].literals[1].pred == *sp);
  CHECK(p.clauses[0].literals[1].positive);
  CHECK(p.clauses[1].literals[0].pred == *sp);
  CHECK(!p.clauses[1].literals[0].positive);
  CHECK(p.clauses[1].literals[1].pred == *p.signature.find_predicate("q"));
  // the shared variable is the same term on both sides
  CHECK(p.clauses[0].literals[1].args == p.clauses[1].literals[0].args);
}

TEST_CASE("clauses under the threshold stay whole") {
  Problem p = clausify(parse("cnf(c1, axiom, p(X, Y) | q(Y, X)).\n"));
  split_clauses(p, 3);
  CHECK(p.clauses.size() == 1);
}

TEST_CASE("splitting preserves satisfiability per assignment") {
  std::mt19937 rng(4711);
  const char* preds[] = {"p", "q", "r"};
  for (int round = 0; round < 12; round++) {
    // random 4-variable clause sets over binary predicates
    std::string text;
    int clauses = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < clauses; i++) {
      std::string clause;
      int lits = 2 + static_cast<int>(rng() % 3);
      for (int j = 0; j < lits; j++) {
        if (j) clause += " | ";
        if (rng() % 2) clause += "~";
        clause += preds[rng() % 3];
        clause += "(";
        clause += static_cast<char>('W' + rng() % 4);
        clause += ", ";
        clause += static_cast<char>('W' + rng() % 4);
        clause += ")";
      }
      text += "cnf(c" + std::to_string(i) + ", axiom, (" + clause + ")).\n";
    }
    Problem original = clausify(parse(text));
    Problem split = original;
    split_clauses(split, 2);
    for (int n = 1; n <= 2; n++) {
      DomainSizeAssignment sizes;
      sizes.sizes = {n};
      CHECK(test::brute_force_satisfiable(original, sizes) ==
            test::brute_force_satisfiable(split, sizes));
    }
  }
}

TEST_CASE("the full preprocess stage leaves only flat literals") {
  Problem p = clausify(parse(
      "cnf(c1, axiom, p(f(a, b), g(f(a, b)))).\n"
      "cnf(c2, axiom, f(X, Y) != f(Y, X) | g(X) = Y).\n"
      "cnf(c3, axiom, X = Y | p(X, g(Y))).\n"));
  PreprocessOptions opts;
  preprocess(p, opts);
  for (const Clause& c : p.clauses) CHECK(is_flat(c));
}
