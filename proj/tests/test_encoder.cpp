#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fmf/clausify.hpp"
#include "fmf/encoder.hpp"
#include "fmf/parser.hpp"
#include "fmf/preprocess.hpp"
#include "fmf/sat.hpp"
#include "fmf/search.hpp"
#include "support/bruteforce.hpp"

using namespace fmf;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(FMF_FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Prepared {
  Problem problem;
  EncoderFacts facts;
};

Prepared prepare(const std::string& text, bool use_caps = false) {
  Prepared out;
  out.problem = clausify(parse(text));
  PreprocessOptions opts;
  preprocess(out.problem, opts);
  out.facts.partition = infer_subsorts(out.problem);
  out.facts.class_monotonic =
      detect_monotonic_classes(out.problem, out.facts.partition);
  out.facts.sort_monotonic = detect_monotonic(out.problem, out.facts.partition,
                                              out.facts.class_monotonic);
  if (use_caps) {
    MaxSizes ms = detect_max_sizes(out.problem, out.facts.partition,
                                   out.facts.class_monotonic, {});
    out.facts.class_caps = ms.class_caps;
  }
  return out;
}

bool solve_encoding(const Encoding& enc) {
  sat::Solver solver;
  solver.ensure_var(enc.num_vars);
  for (const auto& c : enc.clauses) solver.add_clause(c);
  return solver.solve(enc.assumptions).sat();
}

const std::string kRunning =
    "cnf(c1, axiom, p(b)).\n"
    "cnf(c2, axiom, f(a) != b).\n"
    "cnf(c3, axiom, f(f(X)) = X).\n";

}  // namespace

TEST_CASE("the running example at n=2 has exactly 10/4/4 clauses") {
  Prepared in = prepare(kRunning);
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {2};
  Encoding e = enc.build(n, EncodingMode::Plain);
  CHECK(e.stats.instances == 10);
  CHECK(e.stats.functionality == 4);
  CHECK(e.stats.totality == 4);
  CHECK(e.stats.total() == e.clauses.size());
  CHECK(e.assumptions.empty());

  // satisfiable at two, not at one, matching the brute-force verdicts
  CHECK(solve_encoding(e));
  DomainSizeAssignment one;
  one.sizes = {1};
  CHECK(!solve_encoding(enc.build(one, EncodingMode::Plain)));
  CHECK(test::brute_force_satisfiable(in.problem, n));
  CHECK(!test::brute_force_satisfiable(in.problem, one));
}

TEST_CASE("ground instances delete trivial equalities between constants") {
  // x = y instances survive only as the clause remainder
  Prepared in = prepare("cnf(c1, axiom, p(X) | X = Y).\n");
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {2};
  Encoding e = enc.build(n, EncodingMode::Plain);
  // of the four substitutions, two have x = y as a tautology and are
  // dropped; the other two lose the equality literal
  CHECK(e.stats.instances == 2);
  for (const auto& c : e.clauses) CHECK(c.size() == 1);
}

TEST_CASE("functionality counts follow n^arity times pairs") {
  std::string text =
      "tff(s_type, type, s: $tType).\n"
      "tff(f_decl, type, f: (s * s) > s).\n"
      "tff(ax, axiom, ![X: s]: f(X, X) = X).\n";
  Prepared in = prepare(text);
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {2};
  Encoding e = enc.build(n, EncodingMode::Plain);
  // 4 principal terms f(ci,cj), each contributing C(2,2) = 1 clause
  CHECK(e.stats.functionality == 4);
  CHECK(e.stats.totality == 4);
}

TEST_CASE("sorts of size one produce no functionality clauses") {
  Prepared in = prepare(kRunning);
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment one;
  one.sizes = {1};
  Encoding e = enc.build(one, EncodingMode::Plain);
  CHECK(e.stats.functionality == 0);
  // totality clauses become units
  for (const auto& c : e.clauses)
    if (c.size() == 1) CHECK(c[0].positive());
}

TEST_CASE("pointwise marking follows the spec polarities") {
  Prepared in = prepare(kRunning);
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {2};
  Encoding e = enc.build(n, EncodingMode::Pointwise);
  REQUIRE(e.marking.larger[0] != 0);
  REQUIRE(e.marking.smaller[0] != 0);
  CHECK(e.assumptions.size() == 2);
  // larger only positive in totality clauses, smaller only positive in
  // instance clauses; neither occurs negative anywhere
  std::uint64_t with_larger = 0, with_smaller = 0;
  for (const auto& c : e.clauses) {
    for (sat::Lit l : c) {
      if (l.var() == e.marking.larger[0]) {
        CHECK(l.positive());
        with_larger++;
      }
      if (l.var() == e.marking.smaller[0]) {
        CHECK(l.positive());
        with_smaller++;
      }
    }
  }
  CHECK(with_larger == e.stats.totality);
  CHECK(with_smaller == e.stats.instances);  // every clause here has variables
}

TEST_CASE("monotonic sorts get no instance marks") {
  // no equalities: the single sort is monotonic
  Prepared in = prepare("cnf(c1, axiom, p(X) | q(X)).\n");
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {2};
  Encoding e = enc.build(n, EncodingMode::Pointwise);
  for (const auto& c : e.clauses)
    for (sat::Lit l : c) CHECK(l.var() != e.marking.smaller[0]);
}

TEST_CASE("ground clauses carry no marks in either mode") {
  // propositional clauses stay ground through flattening
  Prepared in = prepare(
      "cnf(c1, axiom, p0).\n"
      "cnf(c2, axiom, ~p0 | q0).\n"
      "cnf(c3, axiom, r(X) | X = Y).\n");
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {3};
  for (EncodingMode mode : {EncodingMode::Pointwise, EncodingMode::Contour}) {
    Encoding e = enc.build(n, mode);
    int p0 = e.atoms.pred_atom(*in.problem.signature.find_predicate("p0"), {});
    int q0 = e.atoms.pred_atom(*in.problem.signature.find_predicate("q0"), {});
    for (const auto& c : e.clauses) {
      bool mentions_ground_atom = false;
      for (sat::Lit l : c)
        mentions_ground_atom |= l.var() == p0 || l.var() == q0;
      if (!mentions_ground_atom) continue;
      for (sat::Lit l : c) CHECK(l.var() <= e.atoms.num_atom_vars);
    }
  }
}

TEST_CASE("contour totality is guarded level by level") {
  Prepared in = prepare(kRunning);
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment bounds;
  bounds.sizes = {3};
  Encoding e = enc.build(bounds, EncodingMode::Contour);
  // non-monotonic single sort: three levels for each of the five principal
  // terms a, b, f(c1), f(c2), f(c3)
  CHECK(e.stats.totality == 15);
  REQUIRE(e.marking.bound[0].size() == 3);
  for (int var : e.marking.bound[0]) CHECK(var != 0);
  CHECK(e.assumptions.size() == 1);
  CHECK(e.assumptions[0] == sat::Lit::neg(e.marking.bound[0][2]));

  // bound variables appear positive exactly once per totality clause and
  // negative only as instance guards
  std::uint64_t positive = 0, negative = 0;
  for (const auto& c : e.clauses) {
    for (sat::Lit l : c) {
      bool is_bound = false;
      for (int var : e.marking.bound[0]) is_bound |= var == l.var();
      if (!is_bound) continue;
      if (l.positive())
        positive++;
      else
        negative++;
    }
  }
  CHECK(positive == e.stats.totality);
  CHECK(negative > 0);
}

TEST_CASE("contour guards instances by the largest constant index") {
  // f(c3) != c1 | b != c1 gets the guard ~bound(2)
  std::string text =
      "tff(s1_type, type, s1: $tType).\n"
      "tff(s2_type, type, s2: $tType).\n"
      "tff(f_decl, type, f: s1 > s2).\n"
      "tff(b_decl, type, b: s2).\n"
      "tff(ax, axiom, ![X: s1]: f(X) != b).\n"
      "tff(pin, axiom, ![X: s1, Y: s1]: (f(X) = f(Y) => X = Y)).\n";
  Prepared in = prepare(text);
  Encoder enc(in.problem, in.facts, {});
  SortId s1 = *in.problem.signature.find_sort("s1");
  DomainSizeAssignment bounds;
  bounds.sizes = std::vector<int>(in.problem.signature.num_sorts(), 1);
  bounds.sizes[s1] = 3;
  Encoding e = enc.build(bounds, EncodingMode::Contour);
  int guard_level2 = e.marking.bound[s1][1];
  std::uint64_t guarded = 0;
  for (const auto& c : e.clauses)
    for (sat::Lit l : c)
      if (l.var() == guard_level2 && !l.positive()) guarded++;
  CHECK(guarded > 0);
}

TEST_CASE("symmetry breaking emits range and canonicity clauses") {
  // two constants, n = 2: {a1=c1}, {a2=c1 | a2=c2}, canonicity for i=2,m=2
  Prepared in = prepare(
      "cnf(c1, axiom, p(a1)).\n"
      "cnf(c2, axiom, p(a2)).\n");
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {2};
  Encoding e = enc.build(n, EncodingMode::Plain);
  CHECK(e.stats.symmetry == 3);

  // the first constant is pinned to the first element
  int a1 = *in.problem.signature.find_function("a1");
  bool unit_found = false;
  for (const auto& c : e.clauses)
    if (c.size() == 1 && c[0] == sat::Lit::pos(e.atoms.func_atom(a1, {}, 0)))
      unit_found = true;
  CHECK(unit_found);

  // no constants, no symmetry clauses
  Prepared none = prepare("cnf(c1, axiom, p(X)).\n");
  Encoder enc2(none.problem, none.facts, {});
  Encoding e2 = enc2.build(n, EncodingMode::Plain);
  CHECK(e2.stats.symmetry == 0);
}

TEST_CASE("symmetry breaking never flips satisfiability") {
  std::vector<std::string> fixtures = {
      kRunning,
      slurp("chain_s6.p"),
      "cnf(c1, axiom, $distinct(a, b, c)).\n",
      "cnf(c1, axiom, r(X,Y) | q(f(X))).\ncnf(c2, axiom, $distinct(a, b)).\n",
      "cnf(c1, axiom, f(X) = a | f(X) = b).\ncnf(c2, axiom, p(f(c))).\n",
  };
  EncoderOptions with, without;
  without.symmetry = false;
  for (const std::string& text : fixtures) {
    Prepared in = prepare(text);
    Encoder enc_on(in.problem, in.facts, with);
    Encoder enc_off(in.problem, in.facts, without);
    int sorts = in.problem.signature.num_sorts();
    std::vector<int> sizes(sorts, 1);
    while (true) {
      DomainSizeAssignment n;
      n.sizes = sizes;
      if (enc_on.estimate_size(n) < 3000) {
        bool on = solve_encoding(enc_on.build(n, EncodingMode::Plain));
        bool off = solve_encoding(enc_off.build(n, EncodingMode::Plain));
        CHECK(on == off);
      }
      int i = 0;
      while (i < sorts && ++sizes[i] > 3) sizes[i++] = 1;
      if (i == sorts) break;
    }
  }
}

TEST_CASE("estimate equals the built clause count without variable equalities") {
  std::vector<std::string> fixtures = {
      kRunning,
      "cnf(c1, axiom, r(X, Y) | q(f(X))).\ncnf(c2, axiom, $distinct(a, b)).\n",
      "cnf(c1, axiom, ~q(g(X, Y)) | r(X, b)).\n",
  };
  for (const std::string& text : fixtures) {
    Prepared in = prepare(text, true);
    Encoder enc(in.problem, in.facts, {});
    int sorts = in.problem.signature.num_sorts();
    std::vector<int> sizes(sorts, 1);
    while (true) {
      DomainSizeAssignment n;
      n.sizes = sizes;
      std::uint64_t est = enc.estimate_size(n);
      if (est < 4000) {
        Encoding e = enc.build(n, EncodingMode::Plain);
        std::uint64_t size_pad = 0;
        for (int s : sizes) size_pad += static_cast<std::uint64_t>(s);
        CHECK(est == e.stats.total() + size_pad);
      }
      int i = 0;
      while (i < sorts && ++sizes[i] > 3) sizes[i++] = 1;
      if (i == sorts) break;
    }
  }
}

TEST_CASE("estimates grow strictly from parent to child") {
  Prepared in = prepare(slurp("chain_s6.p"), true);
  Encoder enc(in.problem, in.facts, {});
  int sorts = in.problem.signature.num_sorts();
  std::vector<int> sizes(sorts, 1);
  while (true) {
    DomainSizeAssignment n;
    n.sizes = sizes;
    for (int s = 0; s < sorts; s++) {
      DomainSizeAssignment child = n;
      child.sizes[s]++;
      CHECK(enc.estimate_size(child) > enc.estimate_size(n));
    }
    int i = 0;
    while (i < sorts && ++sizes[i] > 3) sizes[i++] = 1;
    if (i == sorts) break;
  }
}

TEST_CASE("plain encoding satisfiability matches brute force everywhere") {
  std::vector<std::string> fixtures = {
      kRunning,
      "cnf(c1, axiom, X = a | X = b).\ncnf(c2, axiom, $distinct(d1, d2)).\n",
      "cnf(c1, axiom, r(X, X)).\ncnf(c2, axiom, ~r(a, b)).\n",
      "tff(s_type, type, s: $tType).\n"
      "tff(t_type, type, t: $tType).\n"
      "tff(f_decl, type, f: s > t).\n"
      "tff(inj, axiom, ![X: s, Y: s]: (f(X) = f(Y) => X = Y)).\n",
  };
  for (const std::string& text : fixtures) {
    Prepared in = prepare(text);
    Encoder enc(in.problem, in.facts, {});
    int sorts = in.problem.signature.num_sorts();
    std::vector<int> sizes(sorts, 1);
    while (true) {
      DomainSizeAssignment n;
      n.sizes = sizes;
      if (enc.estimate_size(n) < 3000) {
        CHECK(solve_encoding(enc.build(n, EncodingMode::Plain)) ==
              test::brute_force_satisfiable(in.problem, n));
      }
      int i = 0;
      while (i < sorts && ++sizes[i] > 3) sizes[i++] = 1;
      if (i == sorts) break;
    }
  }
}

TEST_CASE("pointwise unsat cores stay within the marking variables") {
  // the monkey village at (tree 1, monkey 2, banana 2) is unsat and the
  // core names only marking variables
  Prepared in = prepare(slurp("omv.p"));
  Encoder enc(in.problem, in.facts, {});
  const Signature& sig = in.problem.signature;
  DomainSizeAssignment n;
  n.sizes = std::vector<int>(sig.num_sorts(), 1);
  n.sizes[*sig.find_sort("monkey")] = 2;
  n.sizes[*sig.find_sort("banana")] = 2;
  Encoding e = enc.build(n, EncodingMode::Pointwise);
  sat::Solver solver;
  solver.ensure_var(e.num_vars);
  for (const auto& c : e.clauses) solver.add_clause(c);
  auto out = solver.solve(e.assumptions);
  REQUIRE(out.status == sat::Status::Unsat);
  REQUIRE(!out.failed_assumptions.empty());
  Constraint learned = core_to_constraint(out.failed_assumptions, e.marking, n);
  CHECK(!learned.disjuncts.empty());
  // the known solution satisfies every learned constraint
  DomainSizeAssignment solution;
  solution.sizes = std::vector<int>(sig.num_sorts(), 1);
  solution.sizes[*sig.find_sort("tree")] = 2;
  solution.sizes[*sig.find_sort("monkey")] = 6;
  solution.sizes[*sig.find_sort("banana")] = 12;
  CHECK(learned.satisfied_by(solution));
}

TEST_CASE("dimacs dump lists every atom in its comment block") {
  Prepared in = prepare(kRunning);
  Encoder enc(in.problem, in.facts, {});
  DomainSizeAssignment n;
  n.sizes = {2};
  Encoding e = enc.build(n, EncodingMode::Plain);
  auto comments = e.atom_comments(in.problem.signature);
  CHECK(comments.size() == static_cast<size_t>(e.num_vars));
  std::ostringstream out;
  sat::write_dimacs(out, e.num_vars, e.clauses, comments);
  std::string text = out.str();
  CHECK(text.find("p cnf ") != std::string::npos);
  CHECK(text.find("c 1 = ") != std::string::npos);
}
