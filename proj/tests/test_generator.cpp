#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "lscsp/errors.hpp"
#include "lscsp/generator.hpp"
#include "lscsp/model.hpp"

using namespace lscsp;

namespace {

Instance draw(int class_id, std::uint64_t seed) {
  GeneratorConfig config;
  config.class_id = class_id;
  config.seed = seed;
  return generate(config);
}

// Capacity written out from the data: Cap = 1.24 * sum_t sum_m (sum_i rho ell_i d_it / 2 + f_m) / T,
// shared by the machines in proportion to their object weight.
double expected_capacity(const Instance &inst, int m) {
  double cap = 0.0;
  for (int t = 0; t < inst.T; ++t)
    for (int mm = 0; mm < 2; ++mm) {
      double demand = 0.0;
      for (int i = 0; i < inst.Nf; ++i) demand += 2.0 * inst.ell[i] * static_cast<double>(inst.d[i][t]);
      cap += demand / 2.0 + inst.f[0][mm];
    }
  cap *= 1.24 / inst.T;
  return inst.L[m] / (inst.L[0] + inst.L[1]) * cap;
}

} // namespace

TEST_CASE("class shapes") {
  const int nf[12] = {3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8};
  const int periods[12] = {3, 4, 3, 4, 3, 4, 3, 4, 3, 4, 3, 4};
  for (int c = 1; c <= 12; ++c) {
    CHECK(class_shape(c).Nf == nf[c - 1]);
    CHECK(class_shape(c).T == periods[c - 1]);
    const Instance inst = draw(c, 3);
    CHECK(inst.Nf == nf[c - 1]);
    CHECK(inst.T == periods[c - 1]);
    CHECK(inst.M == 2);
    CHECK(inst.K == 1);
  }
  CHECK_THROWS_AS((void)class_shape(0), UsageError);
  CHECK_THROWS_AS((void)class_shape(13), UsageError);
}

TEST_CASE("drawn values respect the parameter ranges") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = draw(1 + static_cast<int>(seed % 12), seed);
    CHECK(inst.L == Vec{540.0, 460.0});
    CHECK(inst.rho == Vec{2.0});
    for (int i = 0; i < inst.Nf; ++i) {
      CHECK(inst.ell[i] >= 50);
      CHECK(inst.ell[i] <= 150);
      for (int t = 0; t < inst.T; ++t) {
        CHECK(inst.d[i][t] >= 0);
        CHECK(inst.d[i][t] <= 300);
        CHECK(inst.sigma[i][t] == 0.5 * inst.h[0][t]);
      }
    }
    for (int t = 0; t < inst.T; ++t) {
      CHECK(inst.h[0][t] >= 7.5e-6);
      CHECK(inst.h[0][t] <= 1.25e-5);
      CHECK(inst.cp[0][t] == (inst.c[0][0][t] + inst.c[0][1][t]) / 2 * 10);
    }
    for (int m = 0; m < 2; ++m) {
      const double b = 2.0 * inst.L[m];
      CHECK(inst.f[0][m] >= 0.01 * b);
      CHECK(inst.f[0][m] <= 0.05 * b);
      for (int t = 0; t < inst.T; ++t) {
        CHECK(inst.c[0][m][t] >= 0.015 * b);
        CHECK(inst.c[0][m][t] <= 0.025 * b);
        CHECK(inst.s[0][m][t] >= 0.03 * inst.c[0][m][t]);
        CHECK(inst.s[0][m][t] <= 0.05 * inst.c[0][m][t]);
        CHECK(inst.C[m][t] == doctest::Approx(expected_capacity(inst, m)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("same seed, same bytes") {
  const Instance a = draw(5, 123456789), b = draw(5, 123456789);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(to_json(draw(5, 123456790)).dump() != to_json(a).dump());

  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  const auto suite = generate_suite(2, seeds), again = generate_suite(2, seeds);
  REQUIRE(suite.size() == 20);
  std::set<std::vector<std::vector<long long>>> demands;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    CHECK(to_json(suite[i]).dump() == to_json(again[i]).dump());
    CHECK(to_json(suite[i]).dump() == to_json(draw(2, seeds[i])).dump());
    demands.insert(suite[i].d);
    for (int t = 0; t < suite[i].T; ++t) {
      bool any = false;
      for (const auto &row : suite[i].d) any = any || row[t] > 0;
      CHECK((suite[i].D(0, t) > 0.0) == any);
    }
  }
  CHECK(demands.size() == 20);
}

TEST_CASE("a known draw") {
  // Pins the stream order and the distribution mappings; any change to either moves these values.
  const Instance inst = draw(1, 1);
  CHECK(inst.ell == std::vector<int>{61, 111, 68});
  CHECK(inst.d == std::vector<std::vector<long long>>{{103, 86, 189}, {97, 186, 51}, {35, 110, 64}});
  CHECK(inst.h[0][0] == 9.108795509687923e-06);
  CHECK(inst.C[0][0] == doctest::Approx(33219.67278280924).epsilon(1e-14));
}

TEST_CASE("audit flags broken identities") {
  GeneratorConfig config;
  config.class_id = 4;
  config.seed = 8;
  const Instance base = generate(config);
  CHECK(audit_instance(base, config).ok());
  Instance inst = base;
  std::string expected;
  SUBCASE("sigma") {
    inst.sigma[1][0] *= 1.0000001;
    expected = "sigma identity";
  }
  SUBCASE("cp") {
    inst.cp[0][2] += 1e-9;
    expected = "cp identity";
  }
  SUBCASE("capacity") {
    inst.C[1][1] *= 1.00001;
    expected = "capacity identity";
  }
  SUBCASE("production cost") {
    inst.c[0][0][0] = 0.03 * inst.b(0, 0);
    expected = "c range";
  }
  SUBCASE("piece length") {
    inst.ell[0] = 49;
    expected = "ell range";
  }
  SUBCASE("demand") {
    inst.d[0][0] = 301;
    expected = "demand range";
  }
  SUBCASE("shape") {
    config.class_id = 3;
    expected = "class shape";
  }
  const AuditReport report = audit_instance(inst, config);
  REQUIRE_FALSE(report.ok());
  CHECK(std::find(report.violations.begin(), report.violations.end(), expected) != report.violations.end());
}

TEST_CASE("accepted draws pass the screen and relax to a feasible model") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = draw(1, seed);
    const PatternSet patterns = build_pattern_set(inst);
    CHECK(has_greedy_plan(inst, patterns));
    MilpProblem lp = assemble_milp(inst, patterns, RelaxMode::RelaxedExceptZ);
    CHECK(solve_lp(lp).status == LpStatus::Optimal);
  }
}

TEST_CASE("greedy plan screen") {
  Instance inst = fixtures::tiny(2, 1, {460.0}, {92, 115});
  inst.d = {{5, 5}, {4, 0}};
  inst.C = {{460.0 * 2 + 1.0, 460.0 + 1.0}};
  const PatternSet patterns = build_pattern_set(inst);
  // Period 0 needs one object for each zero-waste pattern; period 1 needs one more.
  CHECK(has_greedy_plan(inst, patterns));
  inst.C[0][0] = 460.0 + 1.0;
  // One object in period 0 cannot serve both piece types.
  CHECK_FALSE(has_greedy_plan(inst, patterns));
  inst.C[0][0] = 460.0 * 3 + 1.0;
  inst.C[0][1] = 0.0;
  // Objects made early serve later demand.
  CHECK(has_greedy_plan(inst, patterns));
}

TEST_CASE("generator configuration errors") {
  GeneratorConfig config;
  config.K = 2;
  CHECK_THROWS_AS((void)generate(config), ConfigError);
  config.K = 1;
  config.L = {540.0};
  CHECK_THROWS_AS((void)generate(config), ConfigError);
  config.L = {540.0, 460.0};
  config.class_id = 14;
  CHECK_THROWS_AS((void)generate(config), UsageError);
}
