#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lscsp/milp.hpp"
#include "lscsp/model.hpp"

namespace lscsp {

struct SolveOptions {
  MilpLimits limits;
  int threads = 1; ///< workers for independent sweep points
};

/// Ideal and nadir estimates, with the lexicographic anchor of each objective.
struct PayoffTable {
  double f1_star = 0.0;
  double f2_star = 0.0;
  double f1_nadir = 0.0;
  double f2_nadir = 0.0;
  PlanSolution anchor_f1; ///< minimizes F1, then F2
  PlanSolution anchor_f2; ///< minimizes F2, then F1
  Objectives anchor_f1_obj;
  Objectives anchor_f2_obj;
  bool optimal = true; ///< false when an anchor solve stopped on a limit

  [[nodiscard]] double star(int objective) const { return objective == 0 ? f1_star : f2_star; }
  [[nodiscard]] double nadir(int objective) const { return objective == 0 ? f1_nadir : f2_nadir; }
  /// True when the objective has no range over the front.
  [[nodiscard]] bool constant(int objective) const { return !(nadir(objective) > star(objective)); }
};

/// The reusable pieces of one scalarized model: rows plus both objective vectors.
struct ScalarizedModel {
  ScalarizedModel(const Instance &inst, const PatternSet &patterns, RelaxMode relax);

  const Instance *instance;
  const PatternSet *patterns;
  RelaxMode relax;
  MilpProblem base;
  ObjectiveRows rows;

  /// Problem minimizing a1 * F1 + a2 * F2 with optional upper bounds on each objective.
  [[nodiscard]] MilpProblem build(double a1, double a2, std::optional<double> f1_cap,
                                  std::optional<double> f2_cap) const;
};

/// Throws SolverError when the model is infeasible.
[[nodiscard]] PayoffTable compute_payoff(const ScalarizedModel &model, const SolveOptions &options = {});

/// (value - star) / (nadir - star); 0 when the range is degenerate.
[[nodiscard]] double normalize(double value, int objective, const PayoffTable &payoff);

enum class Method { Weighting, Epsilon };
[[nodiscard]] const char *to_string(Method method);
[[nodiscard]] Method method_from_string(const std::string &name);

struct FrontPoint {
  Method method = Method::Epsilon;
  double control = 0.0; ///< weight p1 or bound on F2
  MilpStatus status = MilpStatus::Infeasible;
  Objectives obj;
  std::optional<PlanSolution> plan;
  double scalar_objective = kInf; ///< objective of the scalarized problem
  std::int64_t nodes = 0;
  double time_s = 0.0;

  [[nodiscard]] bool has_values() const { return plan.has_value(); }
};

/// Raw sweep output, ordered by control value.
struct ParetoFront {
  Method method = Method::Epsilon;
  std::vector<FrontPoint> points;
  int num_variables = 0;
  int num_rows = 0;
  double time_s = 0.0;

  /// Points that carry values, filtered to the nondominated set.
  [[nodiscard]] std::vector<FrontPoint> nondominated() const;
  [[nodiscard]] bool all_optimal() const;
};

/// Controls p1 = j / (count + 1), j = 1..count.
[[nodiscard]] std::vector<double> weighting_controls(int count);
/// count evenly spaced bounds from F2* to F2nad inclusive; count = 1 yields F2nad.
[[nodiscard]] std::vector<double> epsilon_controls(const PayoffTable &payoff, int count);

/// Minimizes p1 F1norm + p2 F2norm for every weight.
[[nodiscard]] ParetoFront weighting_sweep(const ScalarizedModel &model, const PayoffTable &payoff, int count = 50,
                                          const SolveOptions &options = {});

/// Minimizes F1 subject to F2 <= eps for every bound.
[[nodiscard]] ParetoFront epsilon_sweep(const ScalarizedModel &model, const PayoffTable &payoff, int count = 50,
                                        const SolveOptions &options = {});

/// Same, with an explicit list of bounds.
[[nodiscard]] ParetoFront epsilon_sweep_at(const ScalarizedModel &model, const std::vector<double> &bounds,
                                           const SolveOptions &options = {});

/// Solves one weighted-sum point for weight p1.
[[nodiscard]] FrontPoint solve_weighted(const ScalarizedModel &model, const PayoffTable &payoff, double p1,
                                        const MilpLimits &limits);
/// Solves one bound-constrained point.
[[nodiscard]] FrontPoint solve_epsilon(const ScalarizedModel &model, double eps, const MilpLimits &limits);

/// Objective pair used by the dominance filter.
struct ObjectivePoint {
  double F1 = 0.0;
  double F2 = 0.0;
};

/// True when a is no worse in both objectives and differs in at least one.
[[nodiscard]] bool dominates(const ObjectivePoint &a, const ObjectivePoint &b);

/// Indices of nondominated points, ordered by ascending F1 (ties by input order).
[[nodiscard]] std::vector<std::size_t> nondominated_indices(const std::vector<ObjectivePoint> &points);

[[nodiscard]] std::vector<FrontPoint> filter_nondominated(const std::vector<FrontPoint> &points);

/// CSV columns method,control,status,F1,F2,g1,g2,g3,g4,g5.
void write_front_csv(std::ostream &out, const ParetoFront &front);

} // namespace lscsp
