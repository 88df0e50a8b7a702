#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lscsp/errors.hpp"
#include "lscsp/milp.hpp"
#include "oracles.hpp"

using namespace lscsp;
using oracles::lattice_oracle;
using oracles::random_lattice_problem;

namespace {

MilpProblem box(int n, double lo, double up, bool integer) {
  MilpProblem p;
  for (int j = 0; j < n; ++j) p.add_variable(lo, up, integer, "x" + std::to_string(j));
  p.objective.assign(n, 0.0);
  return p;
}

// Solves the square system A x = b by Gaussian elimination; false when (near) singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> &x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-9) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (int j = 0; j < n; ++j) x[j] = b[j] / a[j][j];
  return true;
}

struct Halfspace {
  std::vector<double> a;
  double b; // a . x <= b
};

std::vector<Halfspace> halfspaces(const MilpProblem &p) {
  const int n = p.num_variables();
  std::vector<Halfspace> out;
  for (const Row &row : p.rows) {
    std::vector<double> a(n, 0.0);
    for (auto [j, v] : row.terms) a[j] += v;
    if (row.sense != Sense::GreaterEqual) out.push_back({a, row.rhs});
    if (row.sense != Sense::LessEqual) {
      for (double &v : a) v = -v;
      out.push_back({a, -row.rhs});
    }
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    out.push_back({e, p.variables[j].upper});
    e[j] = -1.0;
    out.push_back({e, -p.variables[j].lower});
  }
  return out;
}

// Minimum over all vertices of a bounded polytope; nullopt when it is empty.
std::optional<double> vertex_oracle(const MilpProblem &p) {
  const int n = p.num_variables();
  const auto hs = halfspaces(p);
  const int h = static_cast<int>(hs.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  for (int j = 0; j < n; ++j) pick[j] = j;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b, x;
    for (int i : pick) {
      a.push_back(hs[i].a);
      b.push_back(hs[i].b);
    }
    if (solve_square(a, b, x)) {
      bool feasible = true;
      for (const auto &s : hs) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += s.a[j] * x[j];
        feasible = feasible && lhs <= s.b + 1e-8;
      }
      if (feasible) {
        const double obj = p.evaluate(x);
        if (!best || obj < *best) best = obj;
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == h - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

} // namespace

TEST_CASE("trivial linear programs") {
  SUBCASE("bounds only") {
    MilpProblem p = box(2, -1.0, 3.0, false);
    p.objective = {1.0, -2.0};
    p.offset = 0.5;
    const LpResult r = solve_lp(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.values == std::vector<double>{-1.0, 3.0});
    CHECK(r.objective == doctest::Approx(-6.5));
  }
  SUBCASE("one equality") {
    MilpProblem p = box(2, 0.0, kInf, false);
    p.objective = {2.0, 3.0};
    p.add_row({{0, 1.0}, {1, 1.0}}, Sense::Equal, 4.0, "sum");
    const LpResult r = solve_lp(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.values[0] == doctest::Approx(4.0));
    CHECK(r.values[1] == doctest::Approx(0.0));
  }
  SUBCASE("free variable") {
    MilpProblem p = box(1, -kInf, kInf, false);
    p.objective = {1.0};
    p.add_row({{0, 1.0}}, Sense::GreaterEqual, -2.5, "floor");
    const LpResult r = solve_lp(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.values[0] == doctest::Approx(-2.5));
  }
  SUBCASE("infeasible") {
    MilpProblem p = box(2, 0.0, 1.0, false);
    p.add_row({{0, 1.0}, {1, 1.0}}, Sense::GreaterEqual, 3.0, "too_much");
    CHECK(solve_lp(p).status == LpStatus::Infeasible);
  }
  SUBCASE("unbounded") {
    MilpProblem p = box(2, 0.0, kInf, false);
    p.objective = {-1.0, 0.0};
    p.add_row({{0, 1.0}, {1, -1.0}}, Sense::LessEqual, 1.0, "ray");
    CHECK(solve_lp(p).status == LpStatus::Unbounded);
    CHECK_THROWS_AS((void)solve_milp(p), SolverError);
  }
}

TEST_CASE("degenerate vertices do not cycle") {
  // A classic cycling example for the textbook rule: every basis at the origin is degenerate.
  MilpProblem p = box(4, 0.0, kInf, false);
  p.objective = {-0.75, 20.0, -0.5, 6.0};
  p.add_row({{0, 0.25}, {1, -8.0}, {2, -1.0}, {3, 9.0}}, Sense::LessEqual, 0.0, "a");
  p.add_row({{0, 0.5}, {1, -12.0}, {2, -0.5}, {3, 3.0}}, Sense::LessEqual, 0.0, "b");
  p.add_row({{2, 1.0}}, Sense::LessEqual, 1.0, "c");
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-1.25));

  MilpProblem flat = box(3, 0.0, kInf, false);
  flat.objective = {1.0, -1.0, 2.0};
  for (int r2 = 0; r2 < 5; ++r2) flat.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, Sense::LessEqual, 0.0, "dup");
  const LpResult z = solve_lp(flat);
  REQUIRE(z.status == LpStatus::Optimal);
  CHECK(z.objective == 0.0);
}

TEST_CASE("random linear programs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-5, 5), cap(1, 6);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + trial % 4;
    MilpProblem p;
    for (int j = 0; j < n; ++j) p.add_variable(-cap(rng) * 0.5, cap(rng), false, "x" + std::to_string(j));
    for (int j = 0; j < n; ++j) p.objective[j] = coef(rng);
    for (int r = 0; r < 4; ++r) {
      std::vector<std::pair<int, double>> terms;
      for (int j = 0; j < n; ++j) terms.emplace_back(j, coef(rng) * 0.5);
      p.add_row(terms, r == 3 ? Sense::GreaterEqual : Sense::LessEqual, coef(rng), "r" + std::to_string(r));
    }
    CAPTURE(trial);
    const auto expected = vertex_oracle(p);
    const LpResult got = solve_lp(p);
    if (!expected) {
      CHECK(got.status == LpStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(got.status == LpStatus::Optimal);
    CHECK(got.objective == doctest::Approx(*expected).epsilon(1e-9));
    CHECK(p.max_violation(got.values) <= 1e-7);
  }
  CHECK(feasible >= 50);
}

TEST_CASE("small integer program") {
  MilpProblem p = box(2, 0.0, kInf, true);
  p.objective = {-1.0, -1.0};
  p.add_row({{0, 2.0}, {1, 2.0}}, Sense::LessEqual, 7.0, "half");
  CHECK(solve_lp(p).objective == doctest::Approx(-3.5));
  for (int rounds : {0, 10}) {
    MilpLimits limits;
    limits.cut_rounds = rounds;
    const MilpResult r = solve_milp(p, limits);
    REQUIRE(r.status == MilpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-3.0));
    CHECK(r.values[0] + r.values[1] == doctest::Approx(3.0));
    CHECK(r.best_bound == r.objective);
  }
}

TEST_CASE("random integer programs match lattice enumeration") {
  std::mt19937_64 rng(7);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const MilpProblem p = random_lattice_problem(rng);
    const auto expected = lattice_oracle(p);
    expected ? ++feasible : ++infeasible;
    for (int rounds : {0, 10}) {
      CAPTURE(trial);
      CAPTURE(rounds);
      MilpLimits limits;
      limits.cut_rounds = rounds;
      const MilpResult r = solve_milp(p, limits);
      if (!expected) {
        CHECK(r.status == MilpStatus::Infeasible);
        CHECK_FALSE(r.has_solution());
        continue;
      }
      REQUIRE(r.status == MilpStatus::Optimal);
      CHECK(r.objective == doctest::Approx(*expected).epsilon(1e-9));
      CHECK(p.max_violation(r.values) <= 1e-6);
      for (double v : r.values) CHECK(std::abs(v - std::round(v)) <= kIntegralityTol);
    }
  }
  CHECK(feasible >= 50);
  CHECK(infeasible >= 1);
}

TEST_CASE("mixed integer points keep continuous parts free") {
  // max 5x + 4y, 6x + 4y <= 24, x + 2y <= 6, x integer: LP optimum (3, 1.5), MILP optimum (3, 1.5).
  MilpProblem p;
  p.add_variable(0.0, kInf, true, "x");
  p.add_variable(0.0, kInf, false, "y");
  p.objective = {-5.0, -4.0};
  p.add_row({{0, 6.0}, {1, 4.0}}, Sense::LessEqual, 24.0, "a");
  p.add_row({{0, 1.0}, {1, 2.0}}, Sense::LessEqual, 6.0, "b");
  MilpResult r = solve_milp(p);
  REQUIRE(r.status == MilpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-21.0));

  p.rows[0].rhs = 23.0; // LP optimum moves to x = 2.75
  r = solve_milp(p);
  REQUIRE(r.status == MilpStatus::Optimal);
  // x = 2 gives y = 2 (obj -18); x = 3 gives y = 1.25 (obj -20).
  CHECK(r.values[0] == doctest::Approx(3.0));
  CHECK(r.objective == doctest::Approx(-20.0));
}

TEST_CASE("branch and bound is deterministic") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const MilpProblem p = random_lattice_problem(rng);
    const MilpResult a = solve_milp(p), b = solve_milp(p);
    CHECK(a.status == b.status);
    CHECK(a.values == b.values);
    CHECK(a.nodes == b.nodes);
    CHECK(a.lp_iterations == b.lp_iterations);
  }
}

TEST_CASE("node limit stops with the incumbent") {
  // Equality knapsack with an odd right-hand side over even weights: infeasible, but the
  // relaxation cannot tell, so the tree must be searched.
  MilpProblem p = box(6, 0.0, 5.0, true);
  for (int j = 0; j < 6; ++j) p.objective[j] = 1.0 + j;
  p.add_row({{0, 2.0}, {1, 4.0}, {2, 6.0}, {3, 8.0}, {4, 10.0}, {5, 12.0}}, Sense::Equal, 41.0, "odd");
  MilpLimits limits;
  limits.cut_rounds = 0;
  limits.node_limit = 3;
  const MilpResult r = solve_milp(p, limits);
  CHECK(r.status == MilpStatus::TimeLimit);
  CHECK_FALSE(r.has_solution());
  CHECK(r.nodes <= limits.node_limit + 1);
  limits.node_limit = 1'000'000;
  CHECK(solve_milp(p, limits).status == MilpStatus::Infeasible);
}

TEST_CASE("problem validation") {
  MilpProblem p = box(2, 0.0, 1.0, false);
  SUBCASE("objective length") { p.objective.pop_back(); }
  SUBCASE("crossing bounds") { p.variables[1].lower = 2.0; }
  SUBCASE("undeclared variable") { p.add_row({{2, 1.0}}, Sense::LessEqual, 1.0, "bad"); }
  SUBCASE("non-finite rhs") { p.add_row({{0, 1.0}}, Sense::LessEqual, kInf, "bad"); }
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_THROWS_AS((void)solve_milp(p), ConfigError);
}

TEST_CASE("limits must be positive") {
  const MilpProblem p = box(1, 0.0, 1.0, true);
  MilpLimits limits;
  limits.time_limit_s = 0.0;
  CHECK_THROWS_AS((void)solve_milp(p, limits), ConfigError);
}

TEST_CASE("lp text dump") {
  MilpProblem p;
  p.add_variable(0.0, 3.0, true, "a");
  p.add_variable(-1.0, kInf, false, "b");
  p.objective = {2.0, -0.5};
  p.offset = 1.0;
  p.add_row({{0, 1.0}, {1, -2.0}}, Sense::GreaterEqual, 0.25, "r");
  std::ostringstream out;
  write_lp_text(out, p);
  CHECK(out.str() == "minimize\n  obj: 2 a - 0.5 b + 1\nsubject to\n  r: 1 a - 2 b >= 0.25\nbounds\n"
                     "  0 <= a <= 3\n  -1 <= b <= inf\ninteger\n  a\nend\n");
}
