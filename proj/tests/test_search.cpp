#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fmf/pipeline.hpp"
#include "fmf/search.hpp"

using namespace fmf;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(FMF_FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

DomainSizeAssignment sizes2(int a, int b) {
  DomainSizeAssignment n;
  n.sizes = {a, b};
  return n;
}

}  // namespace

TEST_CASE("satisfies checks every constraint disjunctively") {
  ConstraintStore store;
  DomainSizeAssignment n = sizes2(2, 2);
  CHECK(satisfies(store, n));  // empty store accepts everything

  store.add({{ConstraintAtom::size_cmp(0, Rel::Gt, 2)}});
  CHECK(!satisfies(store, n));
  CHECK(satisfies(store, sizes2(3, 1)));

  ConstraintStore inter;
  inter.add({{ConstraintAtom::inter_sort(0, Rel::Lt, 1)}});
  CHECK(satisfies(inter, sizes2(1, 2)));
  CHECK(!satisfies(inter, sizes2(2, 2)));
}

TEST_CASE("beam property per the worked examples") {
  // |s| < 3 has the s-beam property at s = 3
  Constraint lt3 = {{ConstraintAtom::size_cmp(0, Rel::Lt, 3)}};
  DomainSizeAssignment at3 = sizes2(3, 1);
  CHECK(has_beam(lt3, at3, 0));
  CHECK(has_beam(lt3, at3, 1));  // growing another sort never helps either

  // |s| > 3 is violated at 2 but growing s can satisfy it
  Constraint gt3 = {{ConstraintAtom::size_cmp(0, Rel::Gt, 3)}};
  CHECK(!has_beam(gt3, sizes2(2, 1), 0));
  CHECK(has_beam(gt3, sizes2(2, 1), 1));

  // |s1| <= |s2| violated: beam along s1, none along s2
  Constraint le = {{ConstraintAtom::inter_sort(0, Rel::Le, 1)}};
  DomainSizeAssignment bad = sizes2(3, 1);
  REQUIRE(!le.satisfied_by(bad));
  CHECK(has_beam(le, bad, 0));
  CHECK(!has_beam(le, bad, 1));

  // enumerate s-chains to depth 5: a beamed constraint stays violated
  for (int extra = 1; extra <= 5; extra++) {
    DomainSizeAssignment along = bad;
    along.sizes[0] += extra;
    CHECK(!le.satisfied_by(along));
  }
}

TEST_CASE("satisfied constraints never beam") {
  Constraint lt3 = {{ConstraintAtom::size_cmp(0, Rel::Lt, 3)}};
  CHECK(!has_beam(lt3, sizes2(2, 1), 0));
}

TEST_CASE("cores become constraints over the marking variables") {
  MarkingVars marking;
  marking.larger = {11, 13};
  marking.smaller = {12, 14};
  marking.bound = {{}, {}};
  DomainSizeAssignment n = sizes2(2, 5);

  Constraint single =
      core_to_constraint({sat::Lit::neg(11)}, marking, n);
  REQUIRE(single.disjuncts.size() == 1);
  CHECK(single.disjuncts[0] == ConstraintAtom::size_cmp(0, Rel::Gt, 2));

  Constraint two = core_to_constraint(
      {sat::Lit::neg(11), sat::Lit::neg(14)}, marking, n);
  REQUIRE(two.disjuncts.size() == 2);
  CHECK(two.disjuncts[0] == ConstraintAtom::size_cmp(0, Rel::Gt, 2));
  CHECK(two.disjuncts[1] == ConstraintAtom::size_cmp(1, Rel::Lt, 5));

  CHECK_THROWS_AS(core_to_constraint({sat::Lit::neg(99)}, marking, n),
                  InternalError);
  CHECK_THROWS_AS(core_to_constraint({sat::Lit::pos(11)}, marking, n),
                  InternalError);
}

TEST_CASE("growth sort choice: smallest bound, then declaration order") {
  DomainSizeAssignment bounds;
  bounds.sizes = {3, 1, 1};
  CHECK(choose_growth_sort({0, 1}, bounds) == 1);
  CHECK(choose_growth_sort({0}, bounds) == 0);
  CHECK(choose_growth_sort({2, 1}, bounds) == 1);
}

TEST_CASE("the monkey village lands on tree 2, monkey 6, banana 12") {
  PipelineConfig config;
  config.trace = true;
  Problem p = clausify(parse(slurp("omv.p")));
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  CHECK(r.verified);
  const Signature& sig = p.signature;
  REQUIRE(r.model.has_value());
  CHECK(r.model->sizes[*sig.find_sort("tree")] == 2);
  CHECK(r.model->sizes[*sig.find_sort("monkey")] == 6);
  CHECK(r.model->sizes[*sig.find_sort("banana")] == 12);
  CHECK(r.search_stats.nodes_checked <= 50);

  // every trace action is from the fixed vocabulary
  for (const std::string& line : r.trace) {
    bool known = line.find("checked-sat") != std::string::npos ||
                 line.find("checked-unsat") != std::string::npos ||
                 line.find("ignored") != std::string::npos ||
                 line.find("pruned") != std::string::npos;
    CHECK(known);
  }
}

TEST_CASE("contour reaches the monkey village model monotonically") {
  PipelineConfig config;
  config.mode = EncodingMode::Contour;
  config.trace = true;
  Problem p = clausify(parse(slurp("omv.p")));
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  CHECK(r.verified);
  const Signature& sig = p.signature;
  CHECK(r.model->sizes[*sig.find_sort("tree")] == 2);
  CHECK(r.model->sizes[*sig.find_sort("monkey")] == 6);
  CHECK(r.model->sizes[*sig.find_sort("banana")] == 12);

  // the bound vectors in the trace never shrink
  std::vector<std::vector<int>> rows;
  for (const std::string& line : r.trace) {
    std::string csv = line.substr(5, line.find(' ', 5) - 5);
    std::vector<int> sizes;
    std::istringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
    rows.push_back(sizes);
  }
  REQUIRE(rows.size() >= 2);
  for (size_t i = 1; i < rows.size(); i++)
    for (size_t j = 0; j < rows[i].size(); j++)
      CHECK(rows[i][j] >= rows[i - 1][j]);
}

TEST_CASE("single-sort running example: contour bounds go 1 then 2") {
  PipelineConfig config;
  config.mode = EncodingMode::Contour;
  config.trace = true;
  Problem p = clausify(parse(slurp("running_s31.p")));
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  CHECK(r.model->sizes[0] == 2);
  CHECK(r.search_stats.nodes_checked == 2);
}

TEST_CASE("max-size exhaustion proves unsatisfiability") {
  std::string text =
      "cnf(c1, axiom, X = a | X = b).\n"
      "cnf(c2, axiom, $distinct(d1, d2, d3)).\n";
  for (EncodingMode mode : {EncodingMode::Pointwise, EncodingMode::Contour}) {
    PipelineConfig config;
    config.mode = mode;
    PipelineResult r = run_text(text, config);
    CHECK(r.status == PipelineResult::Status::Unsatisfiable);
  }
}

TEST_CASE("a ground contradiction is unsat through the empty contour core") {
  std::string text = "cnf(c1, axiom, p0).\ncnf(c2, axiom, ~p0).\n";
  for (EncodingMode mode : {EncodingMode::Pointwise, EncodingMode::Contour}) {
    PipelineConfig config;
    config.mode = mode;
    config.trace = true;
    PipelineResult r = run_text(text, config);
    CHECK(r.status == PipelineResult::Status::Unsatisfiable);
    CHECK(r.search_stats.nodes_checked == 1);
  }
}

TEST_CASE("no assignment is checked twice and pruning is sound") {
  PipelineConfig config;
  config.trace = true;
  Problem p = clausify(parse(slurp("chain_s6.p")));
  PipelineResult r = run_problem(p, config);
  REQUIRE(r.status == PipelineResult::Status::Satisfiable);
  std::set<std::string> checked;
  for (const std::string& line : r.trace) {
    if (line.find("checked") == std::string::npos) continue;
    std::string csv = line.substr(5, line.find(' ', 5) - 5);
    CHECK(!checked.count(csv));
    checked.insert(csv);
  }
}

TEST_CASE("the time budget produces ResourceOut") {
  // unsatisfiable but with no detectable cap: the search cannot terminate
  std::string text =
      "cnf(c1, axiom, p(a)).\n"
      "cnf(c2, axiom, ~p(X) | q(f(X))).\n"
      "cnf(c3, axiom, ~q(X) | p(f(X))).\n"
      "cnf(c4, axiom, f(X) != a).\n"
      "cnf(c5, axiom, f(X) != f(Y) | X = Y).\n"
      "cnf(c6, axiom, ~q(a)).\n"
      "cnf(c7, axiom, ~p(X) | ~q(X)).\n";
  PipelineConfig config;
  config.time_limit_seconds = 0.3;
  PipelineResult r = run_text(text, config);
  CHECK(r.status == PipelineResult::Status::ResourceOut);
}
