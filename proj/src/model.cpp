#include "lscsp/model.hpp"

#include <cmath>
#include <sstream>

#include "lscsp/errors.hpp"

namespace lscsp {

namespace {

Cube cube(int n0, int n1, int n2) { return Cube(n0, Mat(n1, Vec(n2, 0.0))); }

std::string idx(std::initializer_list<int> values) {
  std::ostringstream out;
  out << '[';
  bool first = true;
  for (int v : values) {
    if (!first) out << ',';
    out << v;
    first = false;
  }
  out << ']';
  return out.str();
}

bool shape_ok(const Cube &a, int n0, int n1, int n2) {
  if (static_cast<int>(a.size()) != n0) return false;
  for (const auto &m : a) {
    if (static_cast<int>(m.size()) != n1) return false;
    for (const auto &r : m)
      if (static_cast<int>(r.size()) != n2) return false;
  }
  return true;
}

std::string shape_problem(const Instance &inst, const PatternSet &patterns, const PlanSolution &sol) {
  if (patterns.K() != inst.K || patterns.M() != inst.M) return "pattern set does not match K x M";
  if (!shape_ok(sol.x, inst.K, inst.M, inst.T)) return "x";
  if (!shape_ok(sol.w, inst.K, inst.M, inst.T)) return "w";
  if (!shape_ok(sol.z, inst.K, inst.M, inst.T)) return "z";
  if (static_cast<int>(sol.y.size()) != inst.K) return "y";
  for (int k = 0; k < inst.K; ++k) {
    if (static_cast<int>(sol.y[k].size()) != inst.M) return "y";
    for (int m = 0; m < inst.M; ++m) {
      const auto &list = patterns.at(k, m);
      if (sol.y[k][m].size() != list.size()) return "y pattern count";
      for (const auto &row : sol.y[k][m])
        if (static_cast<int>(row.size()) != inst.T) return "y";
      for (const auto &p : list)
        if (static_cast<int>(p.counts.size()) != inst.Nf) return "pattern counts";
    }
  }
  if (static_cast<int>(sol.e.size()) != inst.Nf) return "e";
  for (const auto &row : sol.e)
    if (static_cast<int>(row.size()) != inst.T) return "e";
  return {};
}

} // namespace

PlanSolution PlanSolution::zeros(const Instance &inst, const PatternSet &patterns) {
  PlanSolution sol;
  sol.x = cube(inst.K, inst.M, inst.T);
  sol.w = cube(inst.K, inst.M, inst.T);
  sol.z = cube(inst.K, inst.M, inst.T);
  sol.y.resize(inst.K);
  for (int k = 0; k < inst.K; ++k) {
    sol.y[k].resize(inst.M);
    for (int m = 0; m < inst.M; ++m) sol.y[k][m] = Mat(patterns.count(k, m), Vec(inst.T, 0.0));
  }
  sol.e = Mat(inst.Nf, Vec(inst.T, 0.0));
  return sol;
}

Objectives evaluate_objectives(const Instance &inst, const PatternSet &patterns, const PlanSolution &sol) {
  if (auto problem = shape_problem(inst, patterns, sol); !problem.empty())
    throw ShapeError("plan does not match instance: " + problem);
  Objectives out;
  for (int t = 0; t < inst.T; ++t)
    for (int m = 0; m < inst.M; ++m)
      for (int k = 0; k < inst.K; ++k) {
        out.g1 += inst.c[k][m][t] * sol.x[k][m][t];
        out.g2 += inst.h[k][t] * inst.b(k, m) * sol.w[k][m][t];
        out.g3 += inst.s[k][m][t] * sol.z[k][m][t];
      }
  for (int t = 0; t < inst.T; ++t)
    for (int k = 0; k < inst.K; ++k) {
      double waste = 0.0;
      for (int m = 0; m < inst.M; ++m) {
        const auto &list = patterns.at(k, m);
        for (std::size_t j = 0; j < list.size(); ++j) waste += list[j].waste * sol.y[k][m][j][t];
      }
      out.g4 += inst.cp[k][t] * waste;
    }
  for (int t = 0; t < inst.T; ++t)
    for (int i = 0; i < inst.Nf; ++i) out.g5 += inst.sigma[i][t] * inst.eta(i) * sol.e[i][t];
  out.F1 = out.g1 + out.g2 + out.g3;
  out.F2 = out.g4 + out.g5;
  return out;
}

ModelLayout::ModelLayout(const Instance &inst, const PatternSet &patterns)
    : K_(inst.K), M_(inst.M), T_(inst.T), block_(inst.K * inst.M * inst.T) {
  int next = 3 * block_;
  y_offset_.resize(static_cast<std::size_t>(K_ * M_));
  for (int k = 0; k < K_; ++k)
    for (int m = 0; m < M_; ++m) {
      y_offset_[k * M_ + m] = next;
      next += patterns.count(k, m) * T_;
    }
  e_begin_ = next;
  total_ = next + inst.Nf * T_;
}

double big_m(const Instance &inst, int k, int m, int t) {
  const double b = inst.b(k, m);
  if (!(b > 0.0)) throw InvalidInstance("object weight b[k][m] must be positive");
  return std::max(0.0, std::floor((inst.C[m][t] - inst.f[k][m]) / b));
}

MilpProblem assemble_milp(const Instance &inst, const PatternSet &patterns, RelaxMode relax) {
  inst.validate();
  if (patterns.K() != inst.K || patterns.M() != inst.M) throw ShapeError("pattern set does not match K x M");
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m) {
      if (patterns.count(k, m) == 0)
        throw ConfigError("no cutting pattern for grammage " + std::to_string(k) + " on machine " + std::to_string(m));
      if (!(inst.b(k, m) > 0.0)) throw InvalidInstance("object weight b[k][m] must be positive");
    }

  const ModelLayout layout(inst, patterns);
  const bool integer = relax == RelaxMode::Integer;
  MilpProblem lp;
  lp.variables.resize(static_cast<std::size_t>(layout.num_variables()));
  // Setups, then lot sizes, are branched on before the cutting variables: fixing how many
  // objects are made moves the bound, while a fractional pattern usually has equal-cost twins.
  auto declare = [&](int col, double ub, bool is_int, std::string name, int priority) {
    lp.variables[col] = Variable{0.0, ub, is_int, std::move(name), priority};
  };
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t) {
        declare(layout.x(k, m, t), kInf, integer, "x" + idx({k, m, t}), 1);
        declare(layout.w(k, m, t), kInf, integer, "w" + idx({k, m, t}), 1);
        declare(layout.z(k, m, t), 1.0, true, "z" + idx({k, m, t}), 2);
        for (int j = 0; j < patterns.count(k, m); ++j)
          declare(layout.y(k, m, j, t), kInf, integer, "y" + idx({k, m, j, t}), 0);
      }
  for (int i = 0; i < inst.Nf; ++i)
    for (int t = 0; t < inst.T; ++t) declare(layout.e(i, t), kInf, integer, "e" + idx({i, t}), 0);
  lp.objective.assign(lp.variables.size(), 0.0);

  for (int k = 0; k < inst.K; ++k)
    for (int t = 0; t < inst.T; ++t) {
      std::vector<std::pair<int, double>> terms;
      for (int m = 0; m < inst.M; ++m) {
        const double b = inst.b(k, m);
        terms.emplace_back(layout.x(k, m, t), b);
        if (t > 0) terms.emplace_back(layout.w(k, m, t - 1), b);
        terms.emplace_back(layout.w(k, m, t), -b);
      }
      lp.add_row(std::move(terms), Sense::GreaterEqual, inst.D(k, t), "demand_weight" + idx({k, t}));
    }
  for (int m = 0; m < inst.M; ++m)
    for (int t = 0; t < inst.T; ++t) {
      std::vector<std::pair<int, double>> terms;
      for (int k = 0; k < inst.K; ++k) {
        terms.emplace_back(layout.x(k, m, t), inst.b(k, m));
        terms.emplace_back(layout.z(k, m, t), inst.f[k][m]);
      }
      lp.add_row(std::move(terms), Sense::LessEqual, inst.C[m][t], "capacity" + idx({m, t}));
    }
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t)
        lp.add_row({{layout.x(k, m, t), 1.0}, {layout.z(k, m, t), -big_m(inst, k, m, t)}}, Sense::LessEqual, 0.0,
                   "setup_link" + idx({k, m, t}));
  for (int i = 0; i < inst.Nf; ++i) {
    const int k = inst.piece_grammage[i];
    for (int t = 0; t < inst.T; ++t) {
      std::vector<std::pair<int, double>> terms;
      for (int m = 0; m < inst.M; ++m) {
        const auto &list = patterns.at(k, m);
        for (std::size_t j = 0; j < list.size(); ++j)
          if (list[j].counts[i] != 0) terms.emplace_back(layout.y(k, m, static_cast<int>(j), t), list[j].counts[i]);
      }
      if (t > 0) terms.emplace_back(layout.e(i, t - 1), 1.0);
      terms.emplace_back(layout.e(i, t), -1.0);
      lp.add_row(std::move(terms), Sense::Equal, static_cast<double>(inst.d[i][t]), "piece_balance" + idx({i, t}));
    }
  }
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t) {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < patterns.count(k, m); ++j) terms.emplace_back(layout.y(k, m, j, t), 1.0);
        terms.emplace_back(layout.x(k, m, t), -1.0);
        if (t > 0) terms.emplace_back(layout.w(k, m, t - 1), -1.0);
        terms.emplace_back(layout.w(k, m, t), 1.0);
        lp.add_row(std::move(terms), Sense::Equal, 0.0, "object_balance" + idx({k, m, t}));
      }
  return lp;
}

ObjectiveRows objective_rows(const Instance &inst, const PatternSet &patterns) {
  const ModelLayout layout(inst, patterns);
  ObjectiveRows rows;
  rows.f1.assign(static_cast<std::size_t>(layout.num_variables()), 0.0);
  rows.f2.assign(rows.f1.size(), 0.0);
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t) {
        rows.f1[layout.x(k, m, t)] = inst.c[k][m][t];
        rows.f1[layout.w(k, m, t)] = inst.h[k][t] * inst.b(k, m);
        rows.f1[layout.z(k, m, t)] = inst.s[k][m][t];
        const auto &list = patterns.at(k, m);
        for (std::size_t j = 0; j < list.size(); ++j)
          rows.f2[layout.y(k, m, static_cast<int>(j), t)] = inst.cp[k][t] * list[j].waste;
      }
  for (int i = 0; i < inst.Nf; ++i)
    for (int t = 0; t < inst.T; ++t) rows.f2[layout.e(i, t)] = inst.sigma[i][t] * inst.eta(i);
  return rows;
}

PlanSolution extract_plan(const Instance &inst, const PatternSet &patterns, const std::vector<double> &values) {
  const ModelLayout layout(inst, patterns);
  if (static_cast<int>(values.size()) != layout.num_variables())
    throw ShapeError("solution vector length does not match the model");
  PlanSolution sol = PlanSolution::zeros(inst, patterns);
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t) {
        sol.x[k][m][t] = values[layout.x(k, m, t)];
        sol.w[k][m][t] = values[layout.w(k, m, t)];
        sol.z[k][m][t] = values[layout.z(k, m, t)];
        for (int j = 0; j < patterns.count(k, m); ++j) sol.y[k][m][j][t] = values[layout.y(k, m, j, t)];
      }
  for (int i = 0; i < inst.Nf; ++i)
    for (int t = 0; t < inst.T; ++t) sol.e[i][t] = values[layout.e(i, t)];
  return sol;
}

std::vector<Violation> check_feasible(const Instance &inst, const PatternSet &patterns, const PlanSolution &sol,
                                      double tol, RelaxMode relax) {
  std::vector<Violation> out;
  if (auto problem = shape_problem(inst, patterns, sol); !problem.empty()) {
    out.push_back({"shape", problem, 0.0});
    return out;
  }
  auto report = [&](const char *family, std::string where, double residual) {
    if (residual > tol) out.push_back({family, std::move(where), residual});
  };
  for (int k = 0; k < inst.K; ++k)
    for (int t = 0; t < inst.T; ++t) {
      double weight = 0.0;
      for (int m = 0; m < inst.M; ++m) {
        const double w_prev = t > 0 ? sol.w[k][m][t - 1] : 0.0;
        weight += inst.b(k, m) * (sol.x[k][m][t] + w_prev - sol.w[k][m][t]);
      }
      report("demand_weight", idx({k, t}), inst.D(k, t) - weight);
    }
  for (int m = 0; m < inst.M; ++m)
    for (int t = 0; t < inst.T; ++t) {
      double used = 0.0;
      for (int k = 0; k < inst.K; ++k) used += inst.b(k, m) * sol.x[k][m][t] + inst.f[k][m] * sol.z[k][m][t];
      report("capacity", idx({m, t}), used - inst.C[m][t]);
    }
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t)
        report("setup_link", idx({k, m, t}), sol.x[k][m][t] - big_m(inst, k, m, t) * sol.z[k][m][t]);
  for (int i = 0; i < inst.Nf; ++i) {
    const int k = inst.piece_grammage[i];
    for (int t = 0; t < inst.T; ++t) {
      double produced = 0.0;
      for (int m = 0; m < inst.M; ++m) {
        const auto &list = patterns.at(k, m);
        for (std::size_t j = 0; j < list.size(); ++j) produced += list[j].counts[i] * sol.y[k][m][j][t];
      }
      const double e_prev = t > 0 ? sol.e[i][t - 1] : 0.0;
      report("piece_balance", idx({i, t}),
             std::abs(produced + e_prev - sol.e[i][t] - static_cast<double>(inst.d[i][t])));
    }
  }
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t) {
        double cut = 0.0;
        for (int j = 0; j < patterns.count(k, m); ++j) cut += sol.y[k][m][j][t];
        const double w_prev = t > 0 ? sol.w[k][m][t - 1] : 0.0;
        report("object_balance", idx({k, m, t}), std::abs(cut - (sol.x[k][m][t] + w_prev - sol.w[k][m][t])));
      }

  const bool integer = relax == RelaxMode::Integer;
  auto domain = [&](const char *name, double v, std::string where, bool is_int, double upper) {
    report("domain", std::string(name) + where, -v);
    report("domain", std::string(name) + where, v - upper);
    if (is_int) report("domain", std::string(name) + where, std::abs(v - std::round(v)));
  };
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m)
      for (int t = 0; t < inst.T; ++t) {
        domain("x", sol.x[k][m][t], idx({k, m, t}), integer, kInf);
        domain("w", sol.w[k][m][t], idx({k, m, t}), integer, kInf);
        domain("z", sol.z[k][m][t], idx({k, m, t}), true, 1.0);
        for (int j = 0; j < patterns.count(k, m); ++j)
          domain("y", sol.y[k][m][j][t], idx({k, m, j, t}), integer, kInf);
      }
  for (int i = 0; i < inst.Nf; ++i)
    for (int t = 0; t < inst.T; ++t) domain("e", sol.e[i][t], idx({i, t}), integer, kInf);
  return out;
}

} // namespace lscsp
