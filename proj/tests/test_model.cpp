#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lscsp/errors.hpp"
#include "lscsp/generator.hpp"
#include "lscsp/milp.hpp"
#include "lscsp/model.hpp"

using namespace lscsp;

namespace {

// Two periods, one 460 cm machine, pieces of 92 and 115 cm.
// Canonical patterns: (5,0) (0,4) (1,3) (2,2) (3,1).
Instance two_period() {
  Instance inst = fixtures::tiny(2, 1, {460.0}, {92, 115});
  inst.rho = {2.0};
  inst.c = {{{3.0, 4.0}}};
  inst.h = {{0.01, 0.02}};
  inst.s = {{{7.0, 9.0}}};
  inst.C = {{5000.0, 5000.0}};
  inst.f = {{10.0}};
  inst.cp = {{0.5, 0.7}};
  inst.sigma = {{0.001, 0.002}, {0.003, 0.004}};
  inst.d = {{5, 0}, {2, 4}};
  return inst;
}

// Make 3 objects in period 0, cut one with (2,2) and one with (5,0), keep one object,
// cut it with (0,4) in period 1; two 92 cm pieces stay in stock throughout.
PlanSolution two_period_plan(const Instance &inst, const PatternSet &patterns) {
  PlanSolution sol = PlanSolution::zeros(inst, patterns);
  sol.x[0][0] = {3.0, 0.0};
  sol.w[0][0] = {1.0, 0.0};
  sol.z[0][0] = {1.0, 0.0};
  sol.y[0][0][3][0] = 1.0;
  sol.y[0][0][0][0] = 1.0;
  sol.y[0][0][1][1] = 1.0;
  sol.e = {{2.0, 2.0}, {0.0, 0.0}};
  return sol;
}

} // namespace

TEST_CASE("all-zero plan evaluates to zero") {
  const Instance inst = two_period();
  const PatternSet patterns = build_pattern_set(inst);
  const Objectives o = evaluate_objectives(inst, patterns, PlanSolution::zeros(inst, patterns));
  CHECK(o.F1 == 0.0);
  CHECK(o.F2 == 0.0);
  CHECK(o.g1 + o.g2 + o.g3 + o.g4 + o.g5 == 0.0);
}

TEST_CASE("one production term") {
  Instance inst = fixtures::tiny(1, 1, {100.0}, {100});
  inst.c = {{{10.0}}};
  const PatternSet patterns = build_pattern_set(inst);
  PlanSolution sol = PlanSolution::zeros(inst, patterns);
  sol.x[0][0][0] = 2.0;
  const Objectives o = evaluate_objectives(inst, patterns, sol);
  CHECK(o.F1 == 20.0);
  CHECK(o.g1 == 20.0);
  CHECK(o.F2 == 0.0);
}

TEST_CASE("hand-summed two-period plan") {
  const Instance inst = two_period();
  const PatternSet patterns = build_pattern_set(inst);
  REQUIRE(patterns.at(0, 0)[3].counts == std::vector<int>{2, 2});
  const PlanSolution sol = two_period_plan(inst, patterns);
  const Objectives o = evaluate_objectives(inst, patterns, sol);
  // g1 = 3*3; g2 = 0.01 * 920 * 1; g3 = 7; g4 = 0.5 * 46; g5 = 0.001*184*2 + 0.002*184*2
  CHECK(o.g1 == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(o.g2 == doctest::Approx(9.2).epsilon(1e-12));
  CHECK(o.g3 == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(o.g4 == doctest::Approx(23.0).epsilon(1e-12));
  CHECK(o.g5 == doctest::Approx(1.104).epsilon(1e-12));
  CHECK(o.F1 == doctest::Approx(25.2).epsilon(1e-12));
  CHECK(o.F2 == doctest::Approx(24.104).epsilon(1e-12));
  CHECK(check_feasible(inst, patterns, sol).empty());
}

TEST_CASE("evaluation is linear in the plan") {
  const Instance inst = two_period();
  const PatternSet patterns = build_pattern_set(inst);
  const PlanSolution a = two_period_plan(inst, patterns);
  PlanSolution b = PlanSolution::zeros(inst, patterns);
  b.x[0][0] = {1.5, 2.0};
  b.z[0][0] = {0.25, 1.0};
  b.w[0][0] = {0.5, 0.0};
  b.y[0][0][2][1] = 3.0;
  b.e = {{0.0, 1.0}, {2.0, 4.0}};
  PlanSolution sum = a;
  for (int t = 0; t < inst.T; ++t) {
    sum.x[0][0][t] += b.x[0][0][t];
    sum.w[0][0][t] += b.w[0][0][t];
    sum.z[0][0][t] += b.z[0][0][t];
    for (int j = 0; j < patterns.count(0, 0); ++j) sum.y[0][0][j][t] += b.y[0][0][j][t];
    for (int i = 0; i < inst.Nf; ++i) sum.e[i][t] += b.e[i][t];
  }
  const Objectives oa = evaluate_objectives(inst, patterns, a);
  const Objectives ob = evaluate_objectives(inst, patterns, b);
  const Objectives os = evaluate_objectives(inst, patterns, sum);
  CHECK(os.F1 == doctest::Approx(oa.F1 + ob.F1).epsilon(1e-12));
  CHECK(os.F2 == doctest::Approx(oa.F2 + ob.F2).epsilon(1e-12));
  CHECK(os.g4 == doctest::Approx(oa.g4 + ob.g4).epsilon(1e-12));
}

TEST_CASE("shape mismatches are reported") {
  const Instance inst = two_period();
  const PatternSet patterns = build_pattern_set(inst);
  PlanSolution sol = PlanSolution::zeros(inst, patterns);
  sol.e.pop_back();
  CHECK_THROWS_AS((void)evaluate_objectives(inst, patterns, sol), ShapeError);
  PlanSolution bad_y = PlanSolution::zeros(inst, patterns);
  bad_y.y[0][0].pop_back();
  CHECK_THROWS_AS((void)evaluate_objectives(inst, patterns, bad_y), ShapeError);
  CHECK_FALSE(check_feasible(inst, patterns, bad_y).empty());
}

TEST_CASE("minimal model shape") {
  Instance inst = fixtures::tiny(1, 1, {100.0}, {100});
  const PatternSet patterns = build_pattern_set(inst);
  const MilpProblem lp = assemble_milp(inst, patterns, RelaxMode::Integer);
  CHECK(lp.num_variables() == 5);
  REQUIRE(lp.num_rows() == 5);
  const char *families[] = {"demand_weight", "capacity", "setup_link", "piece_balance", "object_balance"};
  for (int r = 0; r < 5; ++r) CHECK(lp.rows[r].name.rfind(families[r], 0) == 0);
  CHECK(lp.num_integer() == 5);
  const MilpProblem relaxed = assemble_milp(inst, patterns, RelaxMode::RelaxedExceptZ);
  CHECK(relaxed.num_integer() == 1);
  const ModelLayout layout(inst, patterns);
  CHECK(relaxed.variables[layout.z(0, 0, 0)].integer);
  CHECK(relaxed.variables[layout.z(0, 0, 0)].upper == 1.0);
}

TEST_CASE("variable and row counts follow the index sets") {
  const Instance inst = two_period();
  const PatternSet patterns = build_pattern_set(inst);
  const MilpProblem lp = assemble_milp(inst, patterns, RelaxMode::Integer);
  const int K = 1, M = 1, T = 2;
  CHECK(lp.num_variables() == 3 * K * M * T + patterns.total() * T + inst.Nf * T);
  CHECK(lp.num_rows() == K * T + M * T + K * M * T + inst.Nf * T + K * M * T);
  for (const Row &row : lp.rows)
    for (auto [j, a] : row.terms) {
      CHECK(j >= 0);
      CHECK(j < lp.num_variables());
    }
}

TEST_CASE("generated class-1 shapes are close to the reported averages") {
  double nv = 0.0;
  int nc = 0;
  const int count = 20;
  for (int seed = 0; seed < count; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const Instance inst = generate(cfg);
    const PatternSet patterns = build_pattern_set(inst, 15);
    const MilpProblem lp = assemble_milp(inst, patterns, RelaxMode::Integer);
    nv += lp.num_variables();
    nc = lp.num_rows();
  }
  nv /= count;
  CHECK(nv == doctest::Approx(110.6).epsilon(0.10));
  // one more row appears once the bound on the second objective is installed
  CHECK(nc + 1 == 31);
}

TEST_CASE("big-M equals the largest x that fits the capacity row") {
  Instance inst = fixtures::tiny(3, 2, {50.0, 37.0}, {10});
  inst.rho = {1.5};
  inst.C = {{400.0, 75.0, 10.0}, {300.0, 0.0, 60.0}};
  inst.f = {{3.0, 4.5}};
  for (int m = 0; m < inst.M; ++m)
    for (int t = 0; t < inst.T; ++t) {
      // Exhaustive: largest x with b x + f <= C when the setup is on.
      int largest = 0;
      for (int x = 0; x <= 200; ++x)
        if (inst.b(0, m) * x + inst.f[0][m] <= inst.C[m][t]) largest = x;
      CAPTURE(m);
      CAPTURE(t);
      CHECK(big_m(inst, 0, m, t) == largest);
    }
  CHECK(big_m(inst, 0, 1, 1) == 0.0);
}

TEST_CASE("model construction errors") {
  Instance inst = two_period();
  PatternSet empty(1, 1);
  CHECK_THROWS_AS((void)assemble_milp(inst, empty, RelaxMode::Integer), ConfigError);
  inst.rho = {0.0};
  const PatternSet patterns = build_pattern_set(two_period());
  CHECK_THROWS_AS((void)assemble_milp(inst, patterns, RelaxMode::Integer), InvalidInstance);
}

TEST_CASE("feasibility checking") {
  const Instance inst = two_period();
  const PatternSet patterns = build_pattern_set(inst);
  PlanSolution sol = two_period_plan(inst, patterns);
  CHECK(check_feasible(inst, patterns, sol).empty());

  SUBCASE("broken first-period object balance") {
    // No object is carried into period 1 and its cut is dropped; the piece stock then goes
    // negative, which is a domain violation rather than a second balance violation.
    sol.w[0][0][0] = 0.0;
    sol.y[0][0][1][1] = 0.0;
    sol.e = {{2.0, 2.0}, {0.0, -4.0}};
    const auto v = check_feasible(inst, patterns, sol);
    int balance = 0;
    for (const auto &item : v) balance += item.family == "object_balance";
    CHECK(balance == 1);
  }
  SUBCASE("only the object balance row of period 0") {
    PlanSolution p = two_period_plan(inst, patterns);
    p.y[0][0][0][0] = 0.0; // drop a cut: objects and pieces both unbalanced
    p.e[0] = {-3.0, -3.0};
    bool object = false;
    for (const auto &item : check_feasible(inst, patterns, p)) object |= item.family == "object_balance";
    CHECK(object);
  }
  SUBCASE("overproduction is legal") {
    PlanSolution p = two_period_plan(inst, patterns);
    p.x[0][0][0] = 4.0;
    p.w[0][0][0] = 2.0;
    p.w[0][0][1] = 1.0;
    CHECK(check_feasible(inst, patterns, p).empty());
  }
  SUBCASE("fractional values are flagged only in integer mode") {
    PlanSolution p = two_period_plan(inst, patterns);
    p.x[0][0][0] = 3.5;
    p.w[0][0][0] = 1.5;
    p.w[0][0][1] = 0.5;
    CHECK_FALSE(check_feasible(inst, patterns, p).empty());
    CHECK(check_feasible(inst, patterns, p, 1e-6, RelaxMode::RelaxedExceptZ).empty());
  }
  SUBCASE("setup link") {
    PlanSolution p = two_period_plan(inst, patterns);
    p.z[0][0][0] = 0.0;
    const auto v = check_feasible(inst, patterns, p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].family == "setup_link");
    CHECK(v[0].residual == doctest::Approx(3.0));
  }
}

TEST_CASE("solver round trip reproduces the objective and the balances") {
  Instance inst = two_period();
  inst.d = {{7, 3}, {2, 5}};
  const PatternSet patterns = build_pattern_set(inst);
  MilpProblem lp = assemble_milp(inst, patterns, RelaxMode::Integer);
  const ObjectiveRows rows = objective_rows(inst, patterns);
  for (std::size_t j = 0; j < lp.objective.size(); ++j) lp.objective[j] = rows.f1[j] + 0.5 * rows.f2[j];
  const MilpResult result = solve_milp(lp);
  REQUIRE(result.status == MilpStatus::Optimal);
  const PlanSolution plan = extract_plan(inst, patterns, result.values);
  const Objectives o = evaluate_objectives(inst, patterns, plan);
  CHECK(o.F1 + 0.5 * o.F2 == doctest::Approx(result.objective).epsilon(1e-7));
  CHECK(check_feasible(inst, patterns, plan).empty());
  CHECK(o.F1 == doctest::Approx(o.g1 + o.g2 + o.g3).epsilon(1e-9));
  CHECK(o.F2 == doctest::Approx(o.g4 + o.g5).epsilon(1e-9));
  for (int t = 0; t < inst.T; ++t) {
    double cut = 0.0;
    for (int j = 0; j < patterns.count(0, 0); ++j) cut += plan.y[0][0][j][t];
    const double prev = t > 0 ? plan.w[0][0][t - 1] : 0.0;
    CHECK(cut == doctest::Approx(plan.x[0][0][t] + prev - plan.w[0][0][t]).epsilon(1e-9));
  }
}

TEST_CASE("weighted demand is recomputed exactly from the pieces") {
  const Instance inst = two_period();
  for (int t = 0; t < inst.T; ++t) {
    double total = 0.0;
    for (int i = 0; i < inst.Nf; ++i) total += inst.rho[0] * inst.ell[i] * static_cast<double>(inst.d[i][t]);
    CHECK(inst.D(0, t) == total);
  }
}
