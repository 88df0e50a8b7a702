#include <doctest.h>

#include <filesystem>
#include <limits>

#include "fixtures.hpp"
#include "lscsp/errors.hpp"
#include "lscsp/generator.hpp"
#include "lscsp/instance.hpp"

using namespace lscsp;

namespace {

bool same(const Instance &a, const Instance &b) {
  return a.T == b.T && a.K == b.K && a.M == b.M && a.Nf == b.Nf && a.L == b.L && a.rho == b.rho &&
         a.piece_grammage == b.piece_grammage && a.ell == b.ell && a.c == b.c && a.h == b.h && a.s == b.s &&
         a.C == b.C && a.f == b.f && a.cp == b.cp && a.sigma == b.sigma && a.d == b.d;
}

} // namespace

TEST_CASE("json round trip is bit exact") {
  GeneratorConfig config;
  config.class_id = 6;
  config.seed = 17;
  const Instance inst = generate(config);
  CHECK(same(instance_from_json(to_json(inst)), inst));
  CHECK(same(instance_from_json(nlohmann::json::parse(to_json(inst).dump())), inst));

  const auto path = std::filesystem::temp_directory_path() / "lscsp_instance_roundtrip.json";
  save_instance(inst, path.string());
  CHECK(same(load_instance(path.string()), inst));
  std::filesystem::remove(path);
}

TEST_CASE("derived weights") {
  Instance inst = fixtures::tiny(2, 2, {540.0, 460.0}, {92, 115});
  inst.rho = {0.5};
  inst.d = {{3, 0}, {2, 1}};
  CHECK(inst.b(0, 1) == 230.0);
  CHECK(inst.eta(1) == 57.5);
  CHECK(inst.D(0, 0) == 3 * 46.0 + 2 * 57.5);
  CHECK(inst.D(0, 1) == 57.5);
  CHECK(inst.pieces_of(0) == std::vector<int>{0, 1});
}

TEST_CASE("shape errors") {
  const Instance base = fixtures::tiny(3, 2, {540.0, 460.0}, {92, 115});
  CHECK_NOTHROW(base.validate());
  Instance inst = base;
  SUBCASE("object lengths") { inst.L.pop_back(); }
  SUBCASE("production cost periods") { inst.c[0][1].push_back(1.0); }
  SUBCASE("capacity machines") { inst.C.pop_back(); }
  SUBCASE("piece storage rows") { inst.sigma.pop_back(); }
  SUBCASE("demand periods") { inst.d[1].pop_back(); }
  SUBCASE("setup waste") { inst.f[0].push_back(1.0); }
  CHECK_THROWS_AS(inst.validate(), ShapeError);
}

TEST_CASE("value errors") {
  Instance inst = fixtures::tiny(2, 1, {460.0}, {92, 115});
  SUBCASE("zero object length") { inst.L[0] = 0.0; }
  SUBCASE("negative specific weight") { inst.rho[0] = -1.0; }
  SUBCASE("grammage out of range") { inst.piece_grammage[1] = 1; }
  SUBCASE("piece longer than every object") { inst.ell[0] = 461; }
  SUBCASE("zero piece length") { inst.ell[0] = 0; }
  SUBCASE("negative demand") { inst.d[0][1] = -1; }
  SUBCASE("negative cost") { inst.h[0][0] = -0.5; }
  SUBCASE("nonfinite cost") { inst.s[0][0][1] = std::numeric_limits<double>::infinity(); }
  SUBCASE("no periods") { inst.T = 0; }
  CHECK_THROWS_AS(inst.validate(), InvalidInstance);
}

TEST_CASE("malformed json") {
  nlohmann::json doc = to_json(fixtures::tiny(2, 1, {460.0}, {92}));
  SUBCASE("missing key") { doc.erase("sigma"); }
  SUBCASE("wrong type") { doc["L"] = "long"; }
  SUBCASE("ragged matrix") { doc["h"][0].push_back(1.0); }
  CHECK_THROWS_AS((void)instance_from_json(doc), ShapeError);
  CHECK_THROWS_AS((void)load_instance("/nonexistent/instance.json"), UsageError);
}
