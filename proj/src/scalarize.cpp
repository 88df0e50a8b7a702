#include "lscsp/scalarize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "lscsp/csv.hpp"
#include "lscsp/errors.hpp"

namespace lscsp {

ScalarizedModel::ScalarizedModel(const Instance &inst, const PatternSet &pats, RelaxMode mode)
    : instance(&inst), patterns(&pats), relax(mode), base(assemble_milp(inst, pats, mode)),
      rows(objective_rows(inst, pats)) {}

namespace {

std::vector<std::pair<int, double>> sparse(const std::vector<double> &dense) {
  std::vector<std::pair<int, double>> out;
  for (std::size_t j = 0; j < dense.size(); ++j)
    if (dense[j] != 0.0) out.emplace_back(static_cast<int>(j), dense[j]);
  return out;
}

/// Bound slack for a value that is known to be attainable.
double attainable(double value) { return value + 1e-9 * std::max(1.0, std::abs(value)); }

struct Solved {
  MilpResult milp;
  std::optional<PlanSolution> plan;
  Objectives obj;
};

Solved run(const ScalarizedModel &model, const MilpProblem &problem, const MilpLimits &limits) {
  Solved out;
  out.milp = solve_milp(problem, limits);
  if (out.milp.has_solution()) {
    out.plan = extract_plan(*model.instance, *model.patterns, out.milp.values);
    out.obj = evaluate_objectives(*model.instance, *model.patterns, *out.plan);
  }
  return out;
}

template <typename Fn> void parallel_for(std::size_t count, int threads, Fn &&fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

double range_or_unit(const PayoffTable &payoff, int objective) {
  return payoff.constant(objective) ? 1.0 : payoff.nadir(objective) - payoff.star(objective);
}

} // namespace

MilpProblem ScalarizedModel::build(double a1, double a2, std::optional<double> f1_cap,
                                   std::optional<double> f2_cap) const {
  MilpProblem problem = base;
  for (std::size_t j = 0; j < problem.objective.size(); ++j) problem.objective[j] = a1 * rows.f1[j] + a2 * rows.f2[j];
  if (f1_cap) problem.add_row(sparse(rows.f1), Sense::LessEqual, *f1_cap, "bound_F1");
  if (f2_cap) problem.add_row(sparse(rows.f2), Sense::LessEqual, *f2_cap, "bound_F2");
  return problem;
}

PayoffTable compute_payoff(const ScalarizedModel &model, const SolveOptions &options) {
  PayoffTable table;
  auto anchor = [&](int first) {
    const double a1 = first == 0 ? 1.0 : 0.0;
    Solved primary = run(model, model.build(a1, 1.0 - a1, std::nullopt, std::nullopt), options.limits);
    if (!primary.plan) {
      if (primary.milp.status == MilpStatus::Infeasible) throw SolverError("model is infeasible");
      throw SolverError("no feasible plan found within the solver limits");
    }
    const double best = first == 0 ? primary.obj.F1 : primary.obj.F2;
    const auto cap = std::optional<double>(attainable(best));
    Solved second = run(model,
                        first == 0 ? model.build(0.0, 1.0, cap, std::nullopt) : model.build(1.0, 0.0, std::nullopt, cap),
                        options.limits);
    table.optimal = table.optimal && primary.milp.status == MilpStatus::Optimal;
    if (second.plan) {
      table.optimal = table.optimal && second.milp.status == MilpStatus::Optimal;
      return second;
    }
    table.optimal = false;
    return primary;
  };

  Solved first = anchor(0);
  Solved second = anchor(1);
  table.anchor_f1 = std::move(*first.plan);
  table.anchor_f1_obj = first.obj;
  table.anchor_f2 = std::move(*second.plan);
  table.anchor_f2_obj = second.obj;
  table.f1_star = std::min(first.obj.F1, second.obj.F1);
  table.f1_nadir = std::max(first.obj.F1, second.obj.F1);
  table.f2_star = std::min(first.obj.F2, second.obj.F2);
  table.f2_nadir = std::max(first.obj.F2, second.obj.F2);
  return table;
}

double normalize(double value, int objective, const PayoffTable &payoff) {
  if (payoff.constant(objective)) return 0.0;
  return (value - payoff.star(objective)) / (payoff.nadir(objective) - payoff.star(objective));
}

const char *to_string(Method method) { return method == Method::Weighting ? "weighting" : "epsilon"; }

Method method_from_string(const std::string &name) {
  if (name == "weighting") return Method::Weighting;
  if (name == "epsilon") return Method::Epsilon;
  throw UsageError("unknown method '" + name + "' (expected weighting or epsilon)");
}

std::vector<double> weighting_controls(int count) {
  if (count < 1) throw UsageError("sweep count must be at least 1");
  std::vector<double> out;
  for (int j = 1; j <= count; ++j) out.push_back(static_cast<double>(j) / (count + 1));
  return out;
}

std::vector<double> epsilon_controls(const PayoffTable &payoff, int count) {
  if (count < 1) throw UsageError("sweep count must be at least 1");
  if (count == 1) return {payoff.f2_nadir};
  std::vector<double> out;
  const double lo = payoff.f2_star, hi = payoff.f2_nadir;
  for (int j = 0; j < count; ++j) out.push_back(j == count - 1 ? hi : lo + (hi - lo) * j / (count - 1));
  return out;
}

FrontPoint solve_weighted(const ScalarizedModel &model, const PayoffTable &payoff, double p1, const MilpLimits &limits) {
  const double p2 = 1.0 - p1;
  const double r1 = range_or_unit(payoff, 0), r2 = range_or_unit(payoff, 1);
  MilpProblem problem = model.build(p1 / r1, p2 / r2, std::nullopt, std::nullopt);
  problem.offset = -p1 * payoff.f1_star / r1 - p2 * payoff.f2_star / r2;
  Solved solved = run(model, problem, limits);
  FrontPoint point;
  point.method = Method::Weighting;
  point.control = p1;
  point.status = solved.milp.status;
  point.obj = solved.obj;
  point.plan = std::move(solved.plan);
  point.scalar_objective = solved.milp.objective;
  point.nodes = solved.milp.nodes;
  point.time_s = solved.milp.wall_time_s;
  return point;
}

FrontPoint solve_epsilon(const ScalarizedModel &model, double eps, const MilpLimits &limits) {
  Solved solved = run(model, model.build(1.0, 0.0, std::nullopt, attainable(eps)), limits);
  FrontPoint point;
  point.method = Method::Epsilon;
  point.control = eps;
  point.status = solved.milp.status;
  point.obj = solved.obj;
  point.plan = std::move(solved.plan);
  point.scalar_objective = solved.milp.objective;
  point.nodes = solved.milp.nodes;
  point.time_s = solved.milp.wall_time_s;
  return point;
}

namespace {

template <typename PointFn>
ParetoFront sweep(const ScalarizedModel &model, Method method, const std::vector<double> &controls,
                  const SolveOptions &options, PointFn &&solve_one) {
  const auto start = std::chrono::steady_clock::now();
  ParetoFront front;
  front.method = method;
  front.points.resize(controls.size());
  parallel_for(controls.size(), options.threads, [&](std::size_t i) { front.points[i] = solve_one(controls[i]); });
  front.num_variables = model.base.num_variables();
  front.num_rows = model.base.num_rows() + (method == Method::Epsilon ? 1 : 0);
  front.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return front;
}

} // namespace

ParetoFront weighting_sweep(const ScalarizedModel &model, const PayoffTable &payoff, int count,
                            const SolveOptions &options) {
  return sweep(model, Method::Weighting, weighting_controls(count), options,
               [&](double p1) { return solve_weighted(model, payoff, p1, options.limits); });
}

ParetoFront epsilon_sweep(const ScalarizedModel &model, const PayoffTable &payoff, int count,
                          const SolveOptions &options) {
  return epsilon_sweep_at(model, epsilon_controls(payoff, count), options);
}

ParetoFront epsilon_sweep_at(const ScalarizedModel &model, const std::vector<double> &bounds,
                             const SolveOptions &options) {
  return sweep(model, Method::Epsilon, bounds, options,
               [&](double eps) { return solve_epsilon(model, eps, options.limits); });
}

bool dominates(const ObjectivePoint &a, const ObjectivePoint &b) {
  return a.F1 <= b.F1 && a.F2 <= b.F2 && (a.F1 != b.F1 || a.F2 != b.F2);
}

std::vector<std::size_t> nondominated_indices(const std::vector<ObjectivePoint> &points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].F1 != points[b].F1) return points[a].F1 < points[b].F1;
    return points[a].F2 < points[b].F2;
  });
  // A point is dominated exactly when some lexicographically smaller point has F2 no larger.
  std::vector<std::size_t> kept;
  double best_f2 = kInf;
  std::size_t g = 0;
  while (g < order.size()) {
    std::size_t end = g;
    const ObjectivePoint &head = points[order[g]];
    while (end < order.size() && points[order[end]].F1 == head.F1 && points[order[end]].F2 == head.F2) ++end;
    if (!(best_f2 <= head.F2))
      for (std::size_t i = g; i < end; ++i) kept.push_back(order[i]);
    best_f2 = std::min(best_f2, head.F2);
    g = end;
  }
  return kept;
}

std::vector<FrontPoint> filter_nondominated(const std::vector<FrontPoint> &points) {
  std::vector<const FrontPoint *> valued;
  std::vector<ObjectivePoint> objs;
  for (const auto &p : points)
    if (p.has_values()) {
      valued.push_back(&p);
      objs.push_back({p.obj.F1, p.obj.F2});
    }
  std::vector<FrontPoint> out;
  for (std::size_t i : nondominated_indices(objs)) out.push_back(*valued[i]);
  return out;
}

std::vector<FrontPoint> ParetoFront::nondominated() const { return filter_nondominated(points); }

bool ParetoFront::all_optimal() const {
  return std::all_of(points.begin(), points.end(), [](const FrontPoint &p) { return p.status == MilpStatus::Optimal; });
}

void write_front_csv(std::ostream &out, const ParetoFront &front) {
  out << "method,control,status,F1,F2,g1,g2,g3,g4,g5\n";
  for (const auto &p : front.points) {
    out << to_string(p.method) << ',' << format_double(p.control) << ',' << to_string(p.status);
    if (p.has_values()) {
      for (double v : {p.obj.F1, p.obj.F2, p.obj.g1, p.obj.g2, p.obj.g3, p.obj.g4, p.obj.g5})
        out << ',' << format_double(v);
    } else {
      for (int c = 0; c < 7; ++c) out << ",NA";
    }
    out << '\n';
  }
}

} // namespace lscsp
