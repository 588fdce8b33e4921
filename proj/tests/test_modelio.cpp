#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fmf/pipeline.hpp"
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

const std::string kRunning =
    "cnf(c1, axiom, p(b)).\n"
    "cnf(c2, axiom, f(a) != b).\n"
    "cnf(c3, axiom, f(f(X)) = X).\n";

}  // namespace

TEST_CASE("extraction of the running example decodes the size-2 model") {
  Problem p = clausify(parse(kRunning));
  PipelineConfig config;
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  REQUIRE(r.model.has_value());
  const FiniteModel& m = *r.model;
  const Signature& sig = p.signature;
  CHECK(m.sizes[0] == 2);
  int f = *sig.find_function("f");
  int a = *sig.find_function("a");
  int b = *sig.find_function("b");
  int pp = *sig.find_predicate("p");
  // f is an involution, p(b) holds, f(a) differs from b
  for (int e = 0; e < 2; e++)
    CHECK(m.functions[f][m.functions[f][e]] == e);
  CHECK(m.predicates[pp][m.functions[b][0]] == 1);
  CHECK(m.functions[f][m.functions[a][0]] != m.functions[b][0]);
}

TEST_CASE("a single constant at size one maps to the only element") {
  Problem p = clausify(parse("cnf(c1, axiom, p(a)).\n"));
  PipelineConfig config;
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  CHECK(r.model->sizes[0] == 1);
  CHECK(r.model->functions[*p.signature.find_function("a")][0] == 0);
}

TEST_CASE("verify rejects a broken involution with a witness") {
  Problem p = clausify(parse("cnf(c1, axiom, partner(partner(X)) = X).\n"));
  FiniteModel m;
  m.sizes = {2};
  m.functions = {{1, 1}};  // partner(e1) = partner(e2) = e2
  m.predicates = {};
  VerifyResult vr = verify(p, m);
  CHECK(!vr.ok);
  CHECK(vr.witness.find("partner") != std::string::npos);

  FiniteModel good;
  good.sizes = {2};
  good.functions = {{1, 0}};
  CHECK(verify(p, good).ok);
}

TEST_CASE("an empty clause never verifies") {
  Problem p;
  p.signature.add_sort("s");
  Clause empty;
  empty.origin = "falsum";
  p.clauses.push_back(empty);
  FiniteModel m;
  m.sizes = {1};
  CHECK(!verify(p, m).ok);
}

TEST_CASE("verify enforces its instance budget") {
  Problem p = clausify(parse("cnf(c1, axiom, r(V, W, X, Y, Z)).\n"));
  FiniteModel m;
  m.sizes = {8};
  m.functions = {};
  m.predicates.resize(1);
  m.predicates[0].assign(8 * 8 * 8 * 8 * 8, 1);
  CHECK(verify(p, m, 1000000).ok);
  CHECK_THROWS_AS(verify(p, m, 1000), ResourceLimitError);
}

TEST_CASE("printed models round-trip bit for bit") {
  std::vector<std::string> inputs = {
      kRunning,
      slurp("omv.p"),
      "cnf(c1, axiom, p0).\ncnf(c2, axiom, r(a, b)).\n",
  };
  for (const std::string& text : inputs) {
    Problem p = clausify(parse(text));
    PipelineConfig config;
    PipelineResult r = run_problem(p, config);
    REQUIRE(r.status == PipelineResult::Status::Satisfiable);
    FiniteModel parsed = parse_model(r.model_text, p.signature);
    CHECK(parsed.sizes == r.model->sizes);
    CHECK(parsed.functions == r.model->functions);
    CHECK(parsed.predicates == r.model->predicates);
    CHECK(print_model(parsed, p.signature) == r.model_text);
  }
}

TEST_CASE("model text is deterministic and shows sorts, tables, tuples") {
  Problem p = clausify(parse(kRunning));
  PipelineConfig config;
  PipelineResult a = run_problem(p, config);
  PipelineResult b = run_problem(p, config);
  CHECK(a.model_text == b.model_text);
  CHECK(a.model_text.find("sort $i = { e1 e2 }") != std::string::npos);
  CHECK(a.model_text.find("f(e1) = ") != std::string::npos);
  CHECK(a.model_text.find("p(e") != std::string::npos);
}

TEST_CASE("back-translation is the identity without transforms") {
  Problem p = clausify(parse(kRunning));
  PipelineConfig config;
  config.collapse_monotonic_sorts = false;
  config.expand_subsort_sorts = false;
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  CHECK(r.verified);
}

TEST_CASE("collapsed sorts report the merged size and verify") {
  std::string text =
      "tff(s_type, type, s: $tType).\n"
      "tff(t_type, type, t: $tType).\n"
      "tff(u_type, type, u: $tType).\n"
      "tff(p_decl, type, p: (s) > $o).\n"
      "tff(q_decl, type, q: (t) > $o).\n"
      "tff(g_decl, type, g: u > u).\n"
      "tff(a1, axiom, ![X: s]: p(X)).\n"
      "tff(a2, axiom, ?[Y: t]: q(Y)).\n"
      "tff(a3, axiom, ![Z: u]: g(g(Z)) = Z).\n"
      "tff(a4, axiom, ![Z: u]: g(Z) != Z).\n";
  Problem p = clausify(parse(text));
  PipelineConfig config;
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  CHECK(r.verified);
  // s and t are monotonic and collapse together; u needs two elements
  const Signature& sig = p.signature;
  CHECK(r.model->sizes[*sig.find_sort("s")] ==
        r.model->sizes[*sig.find_sort("t")]);
  CHECK(r.model->sizes[*sig.find_sort("u")] == 2);
}

TEST_CASE("expanded subsort models map back into the parent sort") {
  // two non-interacting parts force a split into subsorts; the distinct
  // part needs three elements, the cycle part two
  std::string text =
      "cnf(c1, axiom, $distinct(a1, a2, a3)).\n"
      "cnf(c2, axiom, f(f(X)) = X).\n"
      "cnf(c3, axiom, f(X) != X).\n";
  Problem p = clausify(parse(text));
  PipelineConfig config;
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  CHECK(r.verified);
  CHECK(r.model->sizes[0] >= 3);
  VerifyResult vr = verify(p, *r.model);
  CHECK(vr.ok);
}
