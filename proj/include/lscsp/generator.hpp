#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lscsp/instance.hpp"
#include "lscsp/patterns.hpp"

namespace lscsp {

struct ClassShape {
  int Nf;
  int T;
};

/// Piece-type and period counts of the twelve benchmark classes.
inline constexpr std::array<ClassShape, 12> kClassShapes{{
    {3, 3}, {3, 4}, {4, 3}, {4, 4}, {5, 3}, {5, 4},
    {6, 3}, {6, 4}, {7, 3}, {7, 4}, {8, 3}, {8, 4},
}};

/// Throws UsageError outside 1..12.
[[nodiscard]] ClassShape class_shape(int class_id);

struct GeneratorConfig {
  int class_id = 1;
  std::uint64_t seed = 0;
  double phi = 1.24;
  int M = 2;
  int K = 1;
  std::vector<double> L{540.0, 460.0};
  double rho = 2.0;
  long long demand_max = 300;
  double piece_low = 0.1;  ///< piece lengths span [low, high] * mean(L)
  double piece_high = 0.3;
  double c_low = 0.015, c_high = 0.025; ///< times b
  double s_low = 0.03, s_high = 0.05;   ///< times c
  double h_low = 7.5e-6, h_high = 1.25e-5;
  double f_low = 0.01, f_high = 0.05;   ///< times b
  double cp_factor = 10.0;              ///< cp = mean_m(c) * cp_factor
  double sigma_factor = 0.5;            ///< sigma = h * sigma_factor
};

/// Capacity budget phi * sum_{t,m,k} (D[k][t] / M + f[k][m]) / T.
[[nodiscard]] double capacity_budget(const Instance &inst, double phi);

/// Sufficient test that the instance admits an integer plan over `patterns`: every period runs
/// its machines at capacity and each object takes the pattern that best serves the earliest
/// outstanding demand. Draws that fail are redrawn.
[[nodiscard]] bool has_greedy_plan(const Instance &inst, const PatternSet &patterns);

/// Draws one instance; identical configs give identical instances.
[[nodiscard]] Instance generate(const GeneratorConfig &config);

/// One instance per seed, in order.
[[nodiscard]] std::vector<Instance> generate_suite(int class_id, const std::vector<std::uint64_t> &seeds);

struct AuditReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks all ranges and definitional identities of a generated instance.
[[nodiscard]] AuditReport audit_instance(const Instance &inst, const GeneratorConfig &config);

} // namespace lscsp
