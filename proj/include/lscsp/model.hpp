#pragma once

#include <string>
#include <vector>

#include "lscsp/instance.hpp"
#include "lscsp/milp.hpp"
#include "lscsp/patterns.hpp"

namespace lscsp {

/// Decision variables of the integrated model.
struct PlanSolution {
  Cube x;                ///< [k][m][t] objects produced
  Cube w;                ///< [k][m][t] objects stored at the end of t
  Cube z;                ///< [k][m][t] setup indicator
  std::vector<Cube> y;   ///< [k][m][j][t] objects cut with pattern j
  Mat e;                 ///< [i][t] pieces stored at the end of t

  /// All-zero plan shaped for (inst, patterns).
  [[nodiscard]] static PlanSolution zeros(const Instance &inst, const PatternSet &patterns);
};

/// Both objectives and the five cost components.
/// F1 = production + object storage + setup, F2 = cutting waste + piece storage.
struct Objectives {
  double F1 = 0.0;
  double F2 = 0.0;
  double g1 = 0.0; ///< production
  double g2 = 0.0; ///< object storage
  double g3 = 0.0; ///< setup
  double g4 = 0.0; ///< cutting waste
  double g5 = 0.0; ///< piece storage
};

/// Which variables keep their integrality marks.
enum class RelaxMode { Integer, RelaxedExceptZ };

/// Throws ShapeError when `sol` does not match (inst, patterns).
[[nodiscard]] Objectives evaluate_objectives(const Instance &inst, const PatternSet &patterns,
                                             const PlanSolution &sol);

/// Column positions of every decision variable in the assembled problem.
///
/// Order: x, w, z blocks over (k, m, t); then y over (k, m, j, t); then e over (i, t).
/// Periods before the first are not represented: their stocks are zero.
class ModelLayout {
public:
  ModelLayout(const Instance &inst, const PatternSet &patterns);

  [[nodiscard]] int x(int k, int m, int t) const { return kmt(k, m, t); }
  [[nodiscard]] int w(int k, int m, int t) const { return block_ + kmt(k, m, t); }
  [[nodiscard]] int z(int k, int m, int t) const { return 2 * block_ + kmt(k, m, t); }
  [[nodiscard]] int y(int k, int m, int j, int t) const { return y_offset_[k * M_ + m] + j * T_ + t; }
  [[nodiscard]] int e(int i, int t) const { return e_begin_ + i * T_ + t; }
  [[nodiscard]] int num_variables() const { return total_; }

private:
  [[nodiscard]] int kmt(int k, int m, int t) const { return (k * M_ + m) * T_ + t; }

  int K_, M_, T_;
  int block_;
  std::vector<int> y_offset_;
  int e_begin_;
  int total_;
};

/// Setup linking bound: max(0, floor((C[m][t] - f[k][m]) / b[k][m])).
[[nodiscard]] double big_m(const Instance &inst, int k, int m, int t);

/// Constraint rows of the model; the objective is left at zero and installed later.
/// Throws ConfigError when some (k, m) has no pattern and InvalidInstance when b[k][m] is zero.
[[nodiscard]] MilpProblem assemble_milp(const Instance &inst, const PatternSet &patterns, RelaxMode relax);

/// Objective coefficient vectors of F1 and F2 over the assembled columns.
struct ObjectiveRows {
  std::vector<double> f1;
  std::vector<double> f2;
};
[[nodiscard]] ObjectiveRows objective_rows(const Instance &inst, const PatternSet &patterns);

/// Reads a plan back from solver values; no rounding is applied.
[[nodiscard]] PlanSolution extract_plan(const Instance &inst, const PatternSet &patterns,
                                        const std::vector<double> &values);

struct Violation {
  /// demand_weight, capacity, setup_link, piece_balance, object_balance, domain or shape
  std::string family;
  std::string indices;
  double residual = 0.0;
};

/// Every violated constraint of the model at `sol`; empty when feasible within `tol`.
/// Integrality is checked for the plan variables unless `relax` frees them.
[[nodiscard]] std::vector<Violation> check_feasible(const Instance &inst, const PatternSet &patterns,
                                                    const PlanSolution &sol, double tol = 1e-6,
                                                    RelaxMode relax = RelaxMode::Integer);

} // namespace lscsp
