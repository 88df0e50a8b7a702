#include "lscsp/milp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <sstream>

#include "lscsp/errors.hpp"

namespace lscsp {

int MilpProblem::add_variable(double lower, double upper, bool integer, std::string name) {
  variables.push_back(Variable{lower, upper, integer, std::move(name), 0});
  objective.push_back(0.0);
  return static_cast<int>(variables.size()) - 1;
}

int MilpProblem::add_row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs, std::string name) {
  rows.push_back(Row{std::move(terms), sense, rhs, std::move(name)});
  return static_cast<int>(rows.size()) - 1;
}

int MilpProblem::num_integer() const {
  return static_cast<int>(std::count_if(variables.begin(), variables.end(), [](const Variable &v) { return v.integer; }));
}

double MilpProblem::evaluate(const std::vector<double> &x) const {
  double total = offset;
  for (std::size_t j = 0; j < objective.size(); ++j) total += objective[j] * x[j];
  return total;
}

double MilpProblem::max_violation(const std::vector<double> &x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables.size(); ++j) {
    worst = std::max(worst, variables[j].lower - x[j]);
    worst = std::max(worst, x[j] - variables[j].upper);
  }
  for (const Row &row : rows) {
    double lhs = 0.0;
    for (auto [j, a] : row.terms) lhs += a * x[j];
    switch (row.sense) {
    case Sense::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
    case Sense::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
    case Sense::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

void MilpProblem::validate() const {
  if (objective.size() != variables.size()) throw ConfigError("objective length differs from variable count");
  for (const auto &v : variables)
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw ConfigError("variable " + v.name + " has crossing bounds");
  const int n = num_variables();
  for (const Row &row : rows) {
    if (!std::isfinite(row.rhs)) throw ConfigError("row " + row.name + " has a non-finite right-hand side");
    for (auto [j, a] : row.terms) {
      if (j < 0 || j >= n) throw ConfigError("row " + row.name + " references an undeclared variable");
      if (!std::isfinite(a)) throw ConfigError("row " + row.name + " has a non-finite coefficient");
    }
  }
}

const char *to_string(LpStatus status) {
  switch (status) {
  case LpStatus::Optimal: return "Optimal";
  case LpStatus::Infeasible: return "Infeasible";
  case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

const char *to_string(MilpStatus status) {
  switch (status) {
  case MilpStatus::Optimal: return "Optimal";
  case MilpStatus::Infeasible: return "Infeasible";
  case MilpStatus::TimeLimit: return "TimeLimit";
  }
  return "?";
}

namespace {

constexpr double kPivotTol = 1e-7;
constexpr double kHarrisSlack = 1e-9;
constexpr double kPhaseOneTol = 1e-7;
constexpr double kValidationTol = 1e-7;
constexpr int kStallThreshold = 1000;

enum class ColStatus : unsigned char { Basic, Lower, Upper, Free };

/// Dense tableau B^-1 [A | slacks | artificials] with explicit nonbasic positions.
///
/// Every row owns one artificial column. Their tableau columns are B^-1 up to row signs,
/// which is all that is needed to recompute basic values from scratch.
class DenseSimplex {
public:
  DenseSimplex(const MilpProblem &problem, const std::vector<double> &lower, const std::vector<double> &upper,
               bool careful)
      : problem_(problem), careful_(careful), bland_(careful) {
    m_ = problem.num_rows();
    n_ = problem.num_variables();
    build(lower, upper);
  }

  LpResult run() {
    LpResult result;
    if (has_phase_one_) {
      set_phase_costs(true);
      const auto outcome = iterate();
      if (outcome == Outcome::Unbounded) throw SolverError("phase one reported an unbounded ray");
      recompute_basic_values();
      double infeasibility = 0.0;
      for (int r = 0; r < m_; ++r) infeasibility += x_[art_col(r)] * row_scale_inv_[r];
      if (infeasibility > kPhaseOneTol + 1e-12 * rhs_mag_) {
        result.status = LpStatus::Infeasible;
        result.iterations = iterations_;
        return result;
      }
    }
    for (int r = 0; r < m_; ++r) {
      const int col = art_col(r);
      up_[col] = 0.0;
      if (status_[col] != ColStatus::Basic) {
        status_[col] = ColStatus::Lower;
        x_[col] = 0.0;
      }
    }
    set_phase_costs(false);
    degenerate_run_ = 0;
    bland_ = careful_;
    const auto outcome = iterate();
    result.iterations = iterations_;
    if (outcome == Outcome::Unbounded) {
      result.status = LpStatus::Unbounded;
      return result;
    }
    recompute_basic_values();
    result.status = LpStatus::Optimal;
    result.values.assign(x_.begin(), x_.begin() + n_);
    result.objective = problem_.offset;
    for (int j = 0; j < n_; ++j) result.objective += problem_.objective[j] * result.values[j];
    return result;
  }

  // Read access to the final tableau, used for cut generation. Call refresh() first.
  void refresh() { refactor(); }
  [[nodiscard]] int rows() const { return m_; }
  [[nodiscard]] int columns() const { return N_; }
  [[nodiscard]] int structurals() const { return n_; }
  [[nodiscard]] int basic(int r) const { return basis_[r]; }
  [[nodiscard]] const double *tableau_row(int r) const { return &tab_[static_cast<std::size_t>(r) * N_]; }
  [[nodiscard]] ColStatus status(int c) const { return status_[c]; }
  [[nodiscard]] double lower(int c) const { return lo_[c]; }
  [[nodiscard]] double upper(int c) const { return up_[c]; }
  [[nodiscard]] double value(int c) const { return x_[c]; }
  /// Row owning slack column c, or -1 when c is not a slack.
  [[nodiscard]] int slack_row(int c) const {
    if (c < n_ || c >= n_ + num_slacks_) return -1;
    for (int r = 0; r < m_; ++r)
      if (slack_of_row_[r] == c) return r;
    return -1;
  }
  /// Coefficient of the slack in its scaled row (+1 for <=, -1 for >=) and the row scale.
  [[nodiscard]] double slack_sign(int r) const { return orig_[static_cast<std::size_t>(r) * N_ + slack_of_row_[r]]; }
  [[nodiscard]] double row_scale(int r) const { return 1.0 / row_scale_inv_[r]; }

private:
  enum class Outcome { Optimal, Unbounded };

  [[nodiscard]] int art_col(int r) const { return n_ + num_slacks_ + r; }
  double &at(int r, int c) { return tab_[static_cast<std::size_t>(r) * N_ + c]; }

  void build(const std::vector<double> &lower, const std::vector<double> &upper) {
    slack_of_row_.assign(m_, -1);
    num_slacks_ = 0;
    for (int r = 0; r < m_; ++r)
      if (problem_.rows[r].sense != Sense::Equal) slack_of_row_[r] = n_ + num_slacks_++;
    N_ = n_ + num_slacks_ + m_;

    lo_.assign(N_, 0.0);
    up_.assign(N_, kInf);
    x_.assign(N_, 0.0);
    status_.assign(N_, ColStatus::Lower);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lower[j];
      up_[j] = upper[j];
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        status_[j] = ColStatus::Lower;
      } else if (std::isfinite(up_[j])) {
        x_[j] = up_[j];
        status_[j] = ColStatus::Upper;
      } else {
        x_[j] = 0.0;
        status_[j] = ColStatus::Free;
      }
    }

    // Scaled original rows, kept for recomputing basic values.
    orig_.assign(static_cast<std::size_t>(m_) * N_, 0.0);
    rhs_.assign(m_, 0.0);
    row_scale_inv_.assign(m_, 1.0);
    art_sign_.assign(m_, 1.0);
    rhs_mag_ = 0.0;
    for (int r = 0; r < m_; ++r) {
      const Row &row = problem_.rows[r];
      double biggest = 0.0;
      for (auto [j, a] : row.terms) biggest = std::max(biggest, std::abs(a));
      const double scale = biggest > 0.0 ? 1.0 / biggest : 1.0;
      row_scale_inv_[r] = 1.0 / scale;
      for (auto [j, a] : row.terms) orig_[static_cast<std::size_t>(r) * N_ + j] += a * scale;
      rhs_[r] = row.rhs * scale;
      rhs_mag_ = std::max(rhs_mag_, std::abs(row.rhs));
      if (slack_of_row_[r] >= 0)
        orig_[static_cast<std::size_t>(r) * N_ + slack_of_row_[r]] = row.sense == Sense::LessEqual ? 1.0 : -1.0;
    }

    basis_.assign(m_, -1);
    has_phase_one_ = false;
    for (int r = 0; r < m_; ++r) {
      double residual = rhs_[r];
      for (int j = 0; j < n_; ++j) {
        const double a = orig_[static_cast<std::size_t>(r) * N_ + j];
        if (a != 0.0) residual -= a * x_[j];
      }
      const int slack = slack_of_row_[r];
      const int art = art_col(r);
      if (slack >= 0) {
        const double coef = orig_[static_cast<std::size_t>(r) * N_ + slack];
        if (residual * coef >= 0.0) {
          basis_[r] = slack;
          x_[slack] = residual / coef;
          orig_[static_cast<std::size_t>(r) * N_ + art] = 1.0;
          up_[art] = 0.0;
          continue;
        }
      }
      art_sign_[r] = residual >= 0.0 ? 1.0 : -1.0;
      orig_[static_cast<std::size_t>(r) * N_ + art] = art_sign_[r];
      basis_[r] = art;
      x_[art] = std::abs(residual);
      has_phase_one_ = true;
    }
    for (int r = 0; r < m_; ++r) status_[basis_[r]] = ColStatus::Basic;

    tab_ = orig_;
    for (int r = 0; r < m_; ++r) {
      const double p = tab_[static_cast<std::size_t>(r) * N_ + basis_[r]];
      if (p != 1.0)
        for (int c = 0; c < N_; ++c) at(r, c) /= p;
    }
  }

  void set_phase_costs(bool phase_one) {
    phase_one_ = phase_one;
    cost_.assign(N_, 0.0);
    if (phase_one) {
      for (int r = 0; r < m_; ++r)
        if (std::isinf(up_[art_col(r)])) cost_[art_col(r)] = 1.0;
    } else {
      for (int j = 0; j < n_; ++j) cost_[j] = problem_.objective[j];
    }
    double biggest = 0.0;
    for (double c : cost_) biggest = std::max(biggest, std::abs(c));
    dual_tol_ = 1e-11 + 1e-9 * biggest;
    d_ = cost_;
    for (int r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      const double *row = &tab_[static_cast<std::size_t>(r) * N_];
      for (int c = 0; c < N_; ++c) d_[c] -= cb * row[c];
    }
    for (int r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
  }

  int choose_entering(int &dir) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < N_; ++j) {
      const ColStatus st = status_[j];
      if (st == ColStatus::Basic || lo_[j] == up_[j]) continue;
      const double dj = d_[j];
      int cand_dir = 0;
      if (st == ColStatus::Lower && dj < -dual_tol_) cand_dir = 1;
      else if (st == ColStatus::Upper && dj > dual_tol_) cand_dir = -1;
      else if (st == ColStatus::Free && std::abs(dj) > dual_tol_) cand_dir = dj < 0.0 ? 1 : -1;
      if (cand_dir == 0) continue;
      if (bland_) {
        dir = cand_dir;
        return j;
      }
      if (std::abs(dj) > best_score) {
        best_score = std::abs(dj);
        best = j;
        dir = cand_dir;
      }
    }
    return best;
  }

  Outcome iterate() {
    const long long cap = 50'000LL + 200LL * (m_ + N_);
    long long local = 0;
    while (true) {
      if (++local > cap) throw SolverError("simplex iteration cap reached");
      int dir = 0;
      const int j = choose_entering(dir);
      if (j < 0) return Outcome::Optimal;

      const double range = (std::isfinite(lo_[j]) && std::isfinite(up_[j])) ? up_[j] - lo_[j] : kInf;
      double step = range;
      int leave = -1;
      double leave_alpha = 0.0;
      auto distance = [&](int r, double alpha, double slack) {
        const int col = basis_[r];
        if (alpha > 0.0) return std::isfinite(lo_[col]) ? (x_[col] - lo_[col] + slack) / alpha : kInf;
        return std::isfinite(up_[col]) ? (up_[col] - x_[col] + slack) / -alpha : kInf;
      };
      if (bland_) {
        // Textbook minimum ratio, lowest basic index on ties.
        for (int r = 0; r < m_; ++r) {
          const double alpha = dir * tab_[static_cast<std::size_t>(r) * N_ + j];
          if (std::abs(alpha) < kPivotTol) continue;
          const double ratio = std::max(distance(r, alpha, 0.0), 0.0);
          if (!std::isfinite(ratio)) continue;
          const bool better = ratio < step - 1e-12;
          const bool tie = !better && ratio <= step + 1e-12 && leave >= 0 && basis_[r] < basis_[leave];
          if (better || tie) {
            step = ratio;
            leave = r;
            leave_alpha = alpha;
          }
        }
      } else {
        // Harris: bound the step with slightly relaxed bounds, then take the largest pivot
        // among the rows that block within that step.
        double relaxed = range;
        for (int r = 0; r < m_; ++r) {
          const double alpha = dir * tab_[static_cast<std::size_t>(r) * N_ + j];
          if (std::abs(alpha) < kPivotTol) continue;
          relaxed = std::min(relaxed, distance(r, alpha, kHarrisSlack));
        }
        if (relaxed < range) {
          double best_alpha = 0.0;
          for (int r = 0; r < m_; ++r) {
            const double alpha = dir * tab_[static_cast<std::size_t>(r) * N_ + j];
            if (std::abs(alpha) < kPivotTol) continue;
            const double ratio = distance(r, alpha, 0.0);
            if (ratio <= relaxed && std::abs(alpha) > best_alpha) {
              best_alpha = std::abs(alpha);
              leave = r;
              leave_alpha = alpha;
              step = std::max(ratio, 0.0);
            }
          }
        }
      }
      if (std::isinf(step)) return Outcome::Unbounded;

      ++iterations_;
      if (step <= 1e-12) {
        if (++degenerate_run_ > kStallThreshold) bland_ = true;
      } else {
        degenerate_run_ = 0;
      }

      if (step > 0.0) {
        x_[j] += dir * step;
        for (int r = 0; r < m_; ++r) {
          const double a = tab_[static_cast<std::size_t>(r) * N_ + j];
          if (a != 0.0) x_[basis_[r]] -= dir * step * a;
        }
      }
      if (leave < 0) {
        if (dir > 0) {
          x_[j] = up_[j];
          status_[j] = ColStatus::Upper;
        } else {
          x_[j] = lo_[j];
          status_[j] = ColStatus::Lower;
        }
        continue;
      }
      const int out = basis_[leave];
      if (leave_alpha > 0.0) {
        x_[out] = lo_[out];
        status_[out] = ColStatus::Lower;
      } else {
        x_[out] = up_[out];
        status_[out] = ColStatus::Upper;
      }
      pivot(leave, j);
      if (iterations_ % (careful_ ? 50 : 100) == 0) refactor();
    }
  }

  void pivot(int r, int j) {
    double *prow = &tab_[static_cast<std::size_t>(r) * N_];
    const double p = prow[j];
    nonzeros_.clear();
    for (int c = 0; c < N_; ++c) {
      if (prow[c] != 0.0) {
        prow[c] /= p;
        nonzeros_.push_back(c);
      }
    }
    prow[j] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double *row = &tab_[static_cast<std::size_t>(i) * N_];
      const double factor = row[j];
      if (factor == 0.0) continue;
      for (int c : nonzeros_) row[c] -= factor * prow[c];
      row[j] = 0.0;
    }
    const double dj = d_[j];
    if (dj != 0.0) {
      for (int c : nonzeros_) d_[c] -= dj * prow[c];
      d_[j] = 0.0;
    }
    status_[j] = ColStatus::Basic;
    basis_[r] = j;
  }

  // x_B = B^-1 (b - N x_N), with B^-1 read from the artificial columns, then refined against
  // the residual of the original rows to wash out drift accumulated in the tableau.
  void recompute_basic_values() {
    std::vector<double> residual(rhs_);
    for (int c = 0; c < N_; ++c) {
      if (status_[c] == ColStatus::Basic || x_[c] == 0.0) continue;
      for (int r = 0; r < m_; ++r) {
        const double a = orig_[static_cast<std::size_t>(r) * N_ + c];
        if (a != 0.0) residual[r] -= a * x_[c];
      }
    }
    apply_inverse(residual, false);
    for (int pass = 0; pass < 2; ++pass) {
      double worst = 0.0;
      for (int r = 0; r < m_; ++r) {
        double lhs = 0.0;
        const double *row = &orig_[static_cast<std::size_t>(r) * N_];
        for (int c = 0; c < N_; ++c)
          if (row[c] != 0.0 && x_[c] != 0.0) lhs += row[c] * x_[c];
        residual[r] = rhs_[r] - lhs;
        worst = std::max(worst, std::abs(residual[r]));
      }
      if (worst < 1e-13) break;
      apply_inverse(residual, true);
    }
  }

  // x_B = B^-1 v, or x_B += B^-1 v when `add`.
  void apply_inverse(const std::vector<double> &v, bool add) {
    for (int r = 0; r < m_; ++r) {
      double value = 0.0;
      const double *row = &tab_[static_cast<std::size_t>(r) * N_];
      for (int l = 0; l < m_; ++l) value += row[art_col(l)] * art_sign_[l] * v[l];
      x_[basis_[r]] = add ? x_[basis_[r]] + value : value;
    }
  }

  // Rebuilds the tableau from the original rows for the current basis.
  void refactor() {
    std::vector<int> cols(basis_);
    tab_ = orig_;
    std::vector<bool> used(m_, false);
    for (int col : cols) {
      int best = -1;
      double best_abs = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (used[r]) continue;
        const double a = std::abs(tab_[static_cast<std::size_t>(r) * N_ + col]);
        if (a > best_abs) {
          best_abs = a;
          best = r;
        }
      }
      if (best < 0 || best_abs < 1e-12) throw SolverError("singular basis during refactorization");
      used[best] = true;
      pivot_plain(best, col);
      basis_[best] = col;
    }
    for (int col : basis_) status_[col] = ColStatus::Basic;
    recompute_basic_values();
    set_phase_costs(phase_one_);
  }

  void pivot_plain(int r, int j) {
    double *prow = &tab_[static_cast<std::size_t>(r) * N_];
    const double p = prow[j];
    for (int c = 0; c < N_; ++c) prow[c] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double *row = &tab_[static_cast<std::size_t>(i) * N_];
      const double factor = row[j];
      if (factor == 0.0) continue;
      for (int c = 0; c < N_; ++c) row[c] -= factor * prow[c];
    }
  }

  const MilpProblem &problem_;
  bool careful_;
  bool bland_;
  int m_ = 0, n_ = 0, N_ = 0, num_slacks_ = 0;
  std::vector<int> slack_of_row_;
  std::vector<double> tab_, orig_, rhs_, row_scale_inv_, art_sign_;
  std::vector<double> lo_, up_, x_, cost_, d_;
  std::vector<ColStatus> status_;
  std::vector<int> basis_;
  std::vector<int> nonzeros_;
  double dual_tol_ = 1e-9;
  double rhs_mag_ = 0.0;
  bool has_phase_one_ = false;
  bool phase_one_ = false;
  int iterations_ = 0;
  int degenerate_run_ = 0;
};

double validation_violation(const MilpProblem &problem, const std::vector<double> &lower,
                            const std::vector<double> &upper, const std::vector<double> &x,
                            std::string *where = nullptr) {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double slack = kValidationTol * (1.0 + 1e-5 * std::abs(x[j]));
    worst = std::max(worst, (lower[j] - x[j]) / slack);
    worst = std::max(worst, (x[j] - upper[j]) / slack);
  }
  for (const Row &row : problem.rows) {
    double lhs = 0.0, mag = std::abs(row.rhs);
    for (auto [j, a] : row.terms) {
      lhs += a * x[j];
      mag = std::max(mag, std::abs(a * x[j]));
    }
    const double slack = kValidationTol + 1e-9 * mag;
    double v = 0.0;
    switch (row.sense) {
    case Sense::LessEqual: v = lhs - row.rhs; break;
    case Sense::GreaterEqual: v = row.rhs - lhs; break;
    case Sense::Equal: v = std::abs(lhs - row.rhs); break;
    }
    if (v / slack > worst) {
      worst = v / slack;
      if (where) *where = row.name;
    }
  }
  return worst;
}

} // namespace

LpResult solve_lp(const MilpProblem &problem, const std::vector<double> &lower, const std::vector<double> &upper) {
  if (lower.size() != problem.variables.size() || upper.size() != problem.variables.size())
    throw ShapeError("bound vectors do not match the problem");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j]) return LpResult{LpStatus::Infeasible, {}, 0.0, 0};

  LpResult result;
  bool ok = false;
  try {
    result = DenseSimplex(problem, lower, upper, false).run();
    ok = result.status != LpStatus::Optimal || validation_violation(problem, lower, upper, result.values) <= 1.0;
  } catch (const SolverError &) {
    ok = false;
  }
  if (ok) return result;

  const int first_iterations = result.iterations;
  result = DenseSimplex(problem, lower, upper, true).run();
  result.iterations += first_iterations;
  if (result.status == LpStatus::Optimal) {
    std::string where;
    const double violation = validation_violation(problem, lower, upper, result.values, &where);
    if (violation > 1.0)
      throw SolverError("simplex result failed validation after the Bland fallback (scaled violation " +
                        std::to_string(violation) + " at " + (where.empty() ? "a bound" : where) + ")");
  }
  return result;
}

LpResult solve_lp(const MilpProblem &problem) {
  problem.validate();
  std::vector<double> lower(problem.variables.size()), upper(problem.variables.size());
  for (std::size_t j = 0; j < lower.size(); ++j) {
    lower[j] = problem.variables[j].lower;
    upper[j] = problem.variables[j].upper;
  }
  return solve_lp(problem, lower, upper);
}

namespace {

constexpr double kMinCutFraction = 0.01;
constexpr double kMaxCutDynamism = 1e4;
constexpr double kMaxCutParallelism = 0.999;
constexpr int kMaxCutsPerRound = 50;

struct Cut {
  Row row;
  double efficacy = 0.0; ///< violation over coefficient norm
};

/// Gomory mixed-integer cut from tableau row r, expressed over the structural variables.
std::optional<Cut> gomory_cut(const MilpProblem &problem, const DenseSimplex &lp, int r) {
  const int bv = lp.basic(r);
  if (bv >= lp.structurals() || !problem.variables[bv].integer) return std::nullopt;
  const double f0 = lp.value(bv) - std::floor(lp.value(bv));
  if (f0 < kMinCutFraction || f0 > 1.0 - kMinCutFraction) return std::nullopt;

  const int n = lp.structurals();
  std::vector<double> alpha(n, 0.0);
  double constant = 0.0; // cut reads sum pi_c t_c >= 1, rewritten as alpha . x + constant >= 1
  const double *row = lp.tableau_row(r);
  for (int c = 0; c < lp.columns(); ++c) {
    const double a = row[c];
    if (c == bv || std::abs(a) < 1e-11) continue;
    const ColStatus st = lp.status(c);
    if (st == ColStatus::Basic) continue;
    if (lp.lower(c) == lp.upper(c)) continue; // fixed columns, artificials included
    if (st == ColStatus::Free) return std::nullopt;
    const bool at_upper = st == ColStatus::Upper;
    const double coef = at_upper ? -a : a; // row over t_c = distance from the active bound
    double pi;
    if (c < n && problem.variables[c].integer) {
      const double fj = coef - std::floor(coef);
      pi = fj <= f0 ? fj / f0 : (1.0 - fj) / (1.0 - f0);
    } else {
      pi = coef > 0.0 ? coef / f0 : -coef / (1.0 - f0);
    }
    if (pi == 0.0) continue;
    if (c < n) {
      if (at_upper) {
        alpha[c] -= pi;
        constant += pi * lp.upper(c);
      } else {
        alpha[c] += pi;
        constant -= pi * lp.lower(c);
      }
      continue;
    }
    const int q = lp.slack_row(c);
    if (q < 0) return std::nullopt;
    // slack = sign * scale * (rhs - a_q . x)
    const double factor = pi * lp.slack_sign(q) * lp.row_scale(q);
    const Row &source = problem.rows[q];
    constant += factor * source.rhs;
    for (auto [j, aq] : source.terms) alpha[j] -= factor * aq;
  }

  double rhs = 1.0 - constant;
  double biggest = 0.0;
  for (double v : alpha) biggest = std::max(biggest, std::abs(v));
  if (!(biggest > 0.0) || !std::isfinite(biggest) || !std::isfinite(rhs)) return std::nullopt;
  // Tiny coefficients are moved into the right-hand side through the variable bounds.
  double smallest = kInf;
  Cut cut;
  for (int j = 0; j < n; ++j) {
    const double v = alpha[j];
    if (v == 0.0) continue;
    if (std::abs(v) < 1e-9 * biggest) {
      const double bound = v > 0.0 ? problem.variables[j].upper : problem.variables[j].lower;
      if (!std::isfinite(bound)) return std::nullopt;
      rhs -= v * bound;
      continue;
    }
    smallest = std::min(smallest, std::abs(v));
    cut.row.terms.emplace_back(j, v / biggest);
  }
  if (cut.row.terms.empty() || biggest / smallest > kMaxCutDynamism) return std::nullopt;
  rhs /= biggest;
  rhs -= 1e-9 * std::max(1.0, std::abs(rhs));
  cut.row.sense = Sense::GreaterEqual;
  cut.row.rhs = rhs;

  double lhs = 0.0, norm = 0.0;
  for (auto [j, v] : cut.row.terms) {
    lhs += v * lp.value(j);
    norm += v * v;
  }
  cut.efficacy = (rhs - lhs) / std::sqrt(norm);
  if (cut.efficacy < 1e-6) return std::nullopt;
  return cut;
}

/// Adds rounds of root cuts to `problem`; returns the number of rows added.
int add_root_cuts(MilpProblem &problem, const std::vector<double> &lo, const std::vector<double> &up, int rounds,
                  std::int64_t &iterations) {
  int added = 0;
  double last_objective = -kInf;
  for (int round = 0; round < rounds; ++round) {
    LpResult result;
    std::optional<DenseSimplex> lp;
    try {
      lp.emplace(problem, lo, up, false);
      result = lp->run();
      iterations += result.iterations;
      if (result.status != LpStatus::Optimal || validation_violation(problem, lo, up, result.values) > 1.0) break;
      lp->refresh();
    } catch (const SolverError &) {
      break;
    }
    if (round > 0 && result.objective - last_objective <= 1e-7 * std::max(1.0, std::abs(result.objective))) break;
    last_objective = result.objective;

    std::vector<Cut> cuts;
    for (int r = 0; r < lp->rows(); ++r)
      if (auto cut = gomory_cut(problem, *lp, r)) cuts.push_back(std::move(*cut));
    if (cuts.empty()) break;
    std::stable_sort(cuts.begin(), cuts.end(), [](const Cut &a, const Cut &b) { return a.efficacy > b.efficacy; });
    const int n = problem.num_variables();
    auto unit = [n](const Row &row) {
      std::vector<double> dense(n, 0.0);
      double norm = 0.0;
      for (auto [j, a] : row.terms) {
        dense[j] += a;
        norm += a * a;
      }
      norm = std::sqrt(norm);
      if (norm > 0.0)
        for (double &v : dense) v /= norm;
      return dense;
    };
    std::vector<std::vector<double>> kept;
    for (const Row &row : problem.rows) kept.push_back(unit(row));
    int taken = 0;
    for (auto &cut : cuts) {
      if (taken == kMaxCutsPerRound) break;
      const auto dir = unit(cut.row);
      bool parallel = false;
      for (const auto &other : kept) {
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += dir[j] * other[j];
        if (std::abs(dot) > kMaxCutParallelism) {
          parallel = true;
          break;
        }
      }
      if (parallel) continue;
      kept.push_back(dir);
      cut.row.name = "cut" + std::to_string(added++);
      problem.rows.push_back(std::move(cut.row));
      ++taken;
    }
    if (taken == 0) break;
  }
  return added;
}

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct Node {
  std::vector<BoundChange> changes;
  double bound;
  int branch_var;
  double branch_value;
  int depth;
  std::int64_t id;
};

struct NodeOrder {
  bool operator()(const Node &a, const Node &b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

/// Most fractional integer variable of the highest fractional priority class, ties by lowest
/// index; -1 when integral.
int most_fractional(const MilpProblem &problem, const std::vector<double> &x) {
  int best = -1;
  int best_priority = 0;
  double best_dist = 0.0;
  for (int j = 0; j < problem.num_variables(); ++j) {
    const Variable &v = problem.variables[j];
    if (!v.integer) continue;
    const double frac = x[j] - std::floor(x[j]);
    const double dist = std::min(frac, 1.0 - frac);
    if (dist <= kIntegralityTol) continue;
    if (best < 0 || v.priority > best_priority || (v.priority == best_priority && dist > best_dist + 1e-12)) {
      best = j;
      best_priority = v.priority;
      best_dist = dist;
    }
  }
  return best;
}

double gap_tolerance(double incumbent) { return std::max(kAbsoluteGap, kRelativeGap * std::abs(incumbent)); }

} // namespace

MilpResult solve_milp(const MilpProblem &problem, const MilpLimits &limits) {
  problem.validate();
  if (limits.time_limit_s <= 0.0 || limits.node_limit <= 0) throw ConfigError("solver limits must be positive");
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  const int n = problem.num_variables();
  std::vector<double> root_lo(n), root_up(n);
  for (int j = 0; j < n; ++j) {
    root_lo[j] = problem.variables[j].lower;
    root_up[j] = problem.variables[j].upper;
    if (problem.variables[j].integer) {
      root_lo[j] = std::ceil(root_lo[j] - kIntegralityTol);
      root_up[j] = std::floor(root_up[j] + kIntegralityTol);
    }
  }

  MilpResult result;
  // Cuts are valid for every integer point of the original problem, so the tree shares them.
  MilpProblem cut_problem;
  const MilpProblem *active = &problem;
  if (limits.cut_rounds > 0 && problem.num_integer() > 0) {
    cut_problem = problem;
    result.cuts = add_root_cuts(cut_problem, root_lo, root_up, limits.cut_rounds, result.lp_iterations);
    if (result.cuts > 0) active = &cut_problem;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t next_id = 0;
  std::vector<double> lo, up;

  // Solves the LP of a node; returns false when it is pruned outright.
  auto evaluate = [&](Node &node) -> bool {
    lo = root_lo;
    up = root_up;
    for (const auto &ch : node.changes) {
      lo[ch.var] = ch.lower;
      up[ch.var] = ch.upper;
    }
    LpResult lp;
    try {
      lp = solve_lp(*active, lo, up);
    } catch (const SolverError &) {
      // The cut rows made this node ill-conditioned; the bound without them is weaker but valid.
      if (active == &problem) throw;
      lp = solve_lp(problem, lo, up);
    }
    ++result.nodes;
    result.lp_iterations += lp.iterations;
    if (lp.status == LpStatus::Unbounded) throw SolverError("unbounded relaxation");
    if (lp.status == LpStatus::Infeasible) return false;
    if (result.has_solution() && lp.objective >= result.objective - gap_tolerance(result.objective)) return false;
    const int var = most_fractional(problem, lp.values);
    if (var < 0) {
      // Round the integers and re-solve for the continuous part on the rows without cuts.
      for (int j = 0; j < n; ++j)
        if (problem.variables[j].integer) lo[j] = up[j] = std::round(lp.values[j]);
      LpResult fixed;
      try {
        fixed = solve_lp(problem, lo, up);
      } catch (const SolverError &) {
        fixed.status = LpStatus::Infeasible;
      }
      if (fixed.status == LpStatus::Optimal) {
        result.lp_iterations += fixed.iterations;
        lp = std::move(fixed);
      }
      if (result.has_solution() && lp.objective >= result.objective) return false;
      result.values = std::move(lp.values);
      result.objective = lp.objective;
      return false;
    }
    node.bound = lp.objective;
    node.branch_var = var;
    node.branch_value = lp.values[var];
    return true;
  };

  Node root{{}, -kInf, -1, 0.0, 0, next_id++};
  const bool root_open = evaluate(root);
  if (!root_open && !result.has_solution()) {
    result.status = MilpStatus::Infeasible;
    result.wall_time_s = elapsed();
    return result;
  }

  // Best bound first, with plunging: the better child is processed next while no incumbent
  // exists or while its bound ties the best open bound within the gap tolerance.
  std::optional<Node> current;
  if (root_open) current = std::move(root);
  bool limit_hit = false;
  while (current || !open.empty()) {
    if (!current) {
      current = open.top();
      open.pop();
    }
    if (result.has_solution() && current->bound >= result.objective - gap_tolerance(result.objective)) {
      current.reset();
      if (open.empty() || open.top().bound >= result.objective - gap_tolerance(result.objective)) {
        while (!open.empty()) open.pop();
        break;
      }
      continue;
    }
    if (elapsed() > limits.time_limit_s || result.nodes >= limits.node_limit) {
      open.push(std::move(*current));
      current.reset();
      limit_hit = true;
      break;
    }
    Node parent = std::move(*current);
    current.reset();
    const int var = parent.branch_var;
    const double value = parent.branch_value;
    double base_lo = root_lo[var], base_up = root_up[var];
    for (const auto &ch : parent.changes)
      if (ch.var == var) {
        base_lo = ch.lower;
        base_up = ch.upper;
      }
    const BoundChange down{var, base_lo, std::floor(value)};
    const BoundChange upper_branch{var, std::ceil(value), base_up};
    std::vector<Node> children;
    for (const BoundChange &change : {down, upper_branch}) {
      Node child{parent.changes, parent.bound, -1, 0.0, parent.depth + 1, next_id++};
      child.changes.push_back(change);
      if (evaluate(child)) children.push_back(std::move(child));
    }
    if (children.empty()) continue;

    // Lower bound first; on a tie, the side the fractional value was closer to.
    const bool prefer_up = value - std::floor(value) >= 0.5;
    std::size_t pick = 0;
    if (children.size() == 2) {
      const double a = children[0].bound, b = children[1].bound;
      if (b < a || (b == a && prefer_up)) pick = 1;
    }
    const double best_open = open.empty() ? kInf : open.top().bound;
    const bool plunge = !result.has_solution() || open.empty() ||
                        children[pick].bound <= best_open + gap_tolerance(best_open);
    for (std::size_t c = 0; c < children.size(); ++c) {
      if (c == pick && plunge) current = std::move(children[c]);
      else open.push(std::move(children[c]));
    }
  }

  result.wall_time_s = elapsed();
  if (limit_hit) {
    result.status = MilpStatus::TimeLimit;
    result.best_bound = open.empty() ? result.objective : std::min(open.top().bound, result.objective);
    return result;
  }
  if (!result.has_solution()) {
    result.status = MilpStatus::Infeasible;
    return result;
  }
  result.status = MilpStatus::Optimal;
  result.best_bound = open.empty() ? result.objective : std::min(open.top().bound, result.objective);
  return result;
}

} // namespace lscsp
