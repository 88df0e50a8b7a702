#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lscsp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
  std::string name;
  int priority = 0; ///< branching considers higher classes first
};

struct Row {
  std::vector<std::pair<int, double>> terms; ///< (variable index, coefficient)
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

/// A linear program with integrality marks: minimize objective . x + offset.
struct MilpProblem {
  std::vector<Variable> variables;
  std::vector<Row> rows;
  std::vector<double> objective; ///< one entry per variable
  double offset = 0.0;

  int add_variable(double lower, double upper, bool integer, std::string name);
  int add_row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs, std::string name);

  [[nodiscard]] int num_variables() const { return static_cast<int>(variables.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(rows.size()); }
  [[nodiscard]] int num_integer() const;

  /// cᵀx + offset.
  [[nodiscard]] double evaluate(const std::vector<double> &x) const;
  /// Largest bound or row violation of x (0 when feasible).
  [[nodiscard]] double max_violation(const std::vector<double> &x) const;

  /// Throws ConfigError when a row references an undeclared variable, bounds cross,
  /// or the objective length differs from the variable count.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class MilpStatus { Optimal, Infeasible, TimeLimit };

[[nodiscard]] const char *to_string(LpStatus status);
[[nodiscard]] const char *to_string(MilpStatus status);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  int iterations = 0;
};

struct MilpLimits {
  double time_limit_s = 600.0;
  std::int64_t node_limit = 10'000'000;
  int cut_rounds = 10; ///< rounds of Gomory mixed-integer cuts at the root (0 disables)
};

struct MilpResult {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> values; ///< empty when no incumbent was found
  double objective = kInf;
  double best_bound = -kInf;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  int cuts = 0; ///< root cuts added
  double wall_time_s = 0.0;

  [[nodiscard]] bool has_solution() const { return !values.empty(); }
};

inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kRelativeGap = 1e-6;
inline constexpr double kAbsoluteGap = 1e-9;

/// Bounded-variable primal simplex on a dense tableau; integrality marks are ignored.
/// Throws SolverError when the result cannot be validated even after the Bland fallback.
[[nodiscard]] LpResult solve_lp(const MilpProblem &problem);

/// Same, with the variable bounds replaced by `lower` / `upper`.
[[nodiscard]] LpResult solve_lp(const MilpProblem &problem, const std::vector<double> &lower,
                                const std::vector<double> &upper);

/// Best-bound branch and bound on the most fractional variable, after root Gomory cut rounds.
[[nodiscard]] MilpResult solve_milp(const MilpProblem &problem, const MilpLimits &limits = {});

/// Human-readable dump: objective, rows, bounds, integer marks.
void write_lp_text(std::ostream &out, const MilpProblem &problem);

} // namespace lscsp
