#include "lscsp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lscsp/errors.hpp"
#include "lscsp/patterns.hpp"

namespace lscsp {

ClassShape class_shape(int class_id) {
  if (class_id < 1 || class_id > static_cast<int>(kClassShapes.size()))
    throw UsageError("class id must be in 1..12, got " + std::to_string(class_id));
  return kClassShapes[static_cast<std::size_t>(class_id - 1)];
}

namespace {

/// mt19937_64 with distribution mappings fixed here, so streams match across standard libraries.
class Stream {
public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi] by rejection.
  long long integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t u;
    do {
      u = engine_();
    } while (u >= limit);
    return lo + static_cast<long long>(u % span);
  }

  /// Uniform real in [lo, hi).
  double real(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

private:
  std::mt19937_64 engine_;
};

Instance draw(const GeneratorConfig &cfg, Stream &rng) {
  const ClassShape shape = class_shape(cfg.class_id);
  Instance inst;
  inst.T = shape.T;
  inst.K = cfg.K;
  inst.M = cfg.M;
  inst.Nf = shape.Nf;
  inst.L = cfg.L;
  inst.rho.assign(cfg.K, cfg.rho);
  inst.piece_grammage.assign(shape.Nf, 0);

  double mean_length = 0.0;
  for (double len : cfg.L) mean_length += len;
  mean_length /= cfg.M;
  const double longest = *std::max_element(cfg.L.begin(), cfg.L.end());
  const auto ell_lo = static_cast<long long>(std::ceil(cfg.piece_low * mean_length - 1e-9));
  const auto ell_hi = static_cast<long long>(std::floor(cfg.piece_high * mean_length + 1e-9));
  inst.ell.resize(shape.Nf);
  for (int i = 0; i < shape.Nf; ++i) {
    long long len;
    do {
      len = rng.integer(ell_lo, ell_hi);
    } while (len > longest);
    inst.ell[i] = static_cast<int>(len);
  }

  inst.d.assign(shape.Nf, std::vector<long long>(shape.T, 0));
  for (int i = 0; i < shape.Nf; ++i)
    for (int t = 0; t < shape.T; ++t) inst.d[i][t] = rng.integer(0, cfg.demand_max);

  const int K = cfg.K, M = cfg.M, T = shape.T;
  inst.c.assign(K, Mat(M, Vec(T, 0.0)));
  inst.s.assign(K, Mat(M, Vec(T, 0.0)));
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m)
      for (int t = 0; t < T; ++t) inst.c[k][m][t] = rng.real(cfg.c_low, cfg.c_high) * inst.b(k, m);
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m)
      for (int t = 0; t < T; ++t) inst.s[k][m][t] = rng.real(cfg.s_low, cfg.s_high) * inst.c[k][m][t];
  inst.h.assign(K, Vec(T, 0.0));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < T; ++t) inst.h[k][t] = rng.real(cfg.h_low, cfg.h_high);
  inst.f.assign(K, Vec(M, 0.0));
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m) inst.f[k][m] = rng.real(cfg.f_low, cfg.f_high) * inst.b(k, m);

  inst.cp.assign(K, Vec(T, 0.0));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < T; ++t) {
      double total = 0.0;
      for (int m = 0; m < M; ++m) total += inst.c[k][m][t];
      inst.cp[k][t] = total / M * cfg.cp_factor;
    }
  inst.sigma.assign(shape.Nf, Vec(T, 0.0));
  for (int i = 0; i < shape.Nf; ++i)
    for (int t = 0; t < T; ++t) inst.sigma[i][t] = cfg.sigma_factor * inst.h[inst.piece_grammage[i]][t];

  const double budget = capacity_budget(inst, cfg.phi);
  double weight_sum = 0.0;
  for (int m = 0; m < M; ++m) weight_sum += inst.b(0, m);
  inst.C.assign(M, Vec(T, 0.0));
  for (int m = 0; m < M; ++m)
    for (int t = 0; t < T; ++t) inst.C[m][t] = inst.b(0, m) / weight_sum * budget;
  return inst;
}

} // namespace

double capacity_budget(const Instance &inst, double phi) {
  double total = 0.0;
  for (int t = 0; t < inst.T; ++t)
    for (int m = 0; m < inst.M; ++m)
      for (int k = 0; k < inst.K; ++k) total += inst.D(k, t) / inst.M + inst.f[k][m];
  return phi * total / inst.T;
}

bool has_greedy_plan(const Instance &inst, const PatternSet &patterns) {
  for (int k = 0; k < inst.K; ++k) {
    const auto pieces = inst.pieces_of(k);
    // open[i][u]: pieces of type i still owed for period u.
    std::vector<std::vector<long long>> open(inst.Nf);
    for (int i : pieces) open[i] = inst.d[i];
    // Pieces go to the earliest period still owed; returns the cut length credited per period.
    auto credit = [&](const CuttingPattern &p, int t, bool apply) {
      std::vector<double> profile(inst.T - t, 0.0);
      for (int i : pieces) {
        long long a = p.counts[i];
        for (int u = t; u < inst.T && a > 0; ++u) {
          const long long take = std::min(a, open[i][u]);
          profile[u - t] += static_cast<double>(take * inst.ell[i]);
          if (apply) open[i][u] -= take;
          a -= take;
        }
      }
      return profile;
    };
    for (int t = 0; t < inst.T; ++t) {
      // Other grammages would share the machine; the generator only draws K = 1.
      std::vector<long long> left(inst.M);
      for (int m = 0; m < inst.M; ++m)
        left[m] = static_cast<long long>(std::max(0.0, std::floor((inst.C[m][t] - inst.f[k][m]) / inst.b(k, m))));
      while (true) {
        const CuttingPattern *best = nullptr;
        std::vector<double> best_profile;
        for (int m = 0; m < inst.M; ++m) {
          if (left[m] == 0) continue;
          for (const CuttingPattern &p : patterns.at(k, m)) {
            auto profile = credit(p, t, false);
            if (!best || profile > best_profile) {
              best = &p;
              best_profile = std::move(profile);
            }
          }
        }
        if (!best || std::all_of(best_profile.begin(), best_profile.end(), [](double v) { return v == 0.0; })) break;
        (void)credit(*best, t, true);
        --left[best->machine];
      }
      for (int i : pieces)
        if (open[i][t] > 0) return false;
    }
  }
  return true;
}

Instance generate(const GeneratorConfig &config) {
  if (config.K != 1) throw ConfigError("the generator only draws single-grammage instances");
  if (static_cast<int>(config.L.size()) != config.M) throw ConfigError("L must list one length per machine");
  Stream rng(config.seed);
  constexpr int kMaxDraws = 10'000;
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Instance inst = draw(config, rng);
    if (has_greedy_plan(inst, build_pattern_set(inst))) return inst;
  }
  throw ConfigError("no feasible instance after repeated draws");
}

std::vector<Instance> generate_suite(int class_id, const std::vector<std::uint64_t> &seeds) {
  std::vector<Instance> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    GeneratorConfig cfg;
    cfg.class_id = class_id;
    cfg.seed = seed;
    out.push_back(generate(cfg));
  }
  return out;
}

AuditReport audit_instance(const Instance &inst, const GeneratorConfig &cfg) {
  AuditReport report;
  auto fail = [&](const std::string &what) { report.violations.push_back(what); };
  auto within = [](double v, double lo, double hi) {
    const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
    return v >= lo - slack && v <= hi + slack;
  };
  try {
    inst.validate();
  } catch (const std::exception &err) {
    fail(std::string("validate: ") + err.what());
    return report;
  }
  const ClassShape shape = class_shape(cfg.class_id);
  if (inst.Nf != shape.Nf || inst.T != shape.T) fail("class shape");
  if (inst.K != cfg.K || inst.M != cfg.M) fail("K or M");
  if (inst.L != cfg.L) fail("object lengths");
  for (double r : inst.rho)
    if (r != cfg.rho) fail("specific weight");
  if (!report.ok()) return report;

  double mean_length = 0.0;
  for (double len : cfg.L) mean_length += len;
  mean_length /= cfg.M;
  for (int i = 0; i < inst.Nf; ++i) {
    if (!within(inst.ell[i], cfg.piece_low * mean_length, cfg.piece_high * mean_length)) fail("ell range");
    if (inst.piece_grammage[i] != 0) fail("grammage");
    for (int t = 0; t < inst.T; ++t) {
      if (inst.d[i][t] < 0 || inst.d[i][t] > cfg.demand_max) fail("demand range");
      if (inst.sigma[i][t] != cfg.sigma_factor * inst.h[0][t]) fail("sigma identity");
    }
  }
  for (int k = 0; k < inst.K; ++k) {
    for (int t = 0; t < inst.T; ++t) {
      if (!within(inst.h[k][t], cfg.h_low, cfg.h_high)) fail("h range");
      double total = 0.0;
      for (int m = 0; m < inst.M; ++m) total += inst.c[k][m][t];
      if (inst.cp[k][t] != total / inst.M * cfg.cp_factor) fail("cp identity");
    }
    for (int m = 0; m < inst.M; ++m) {
      const double b = inst.b(k, m);
      if (!within(inst.f[k][m] / b, cfg.f_low, cfg.f_high)) fail("f range");
      for (int t = 0; t < inst.T; ++t) {
        if (!within(inst.c[k][m][t] / b, cfg.c_low, cfg.c_high)) fail("c range");
        if (!within(inst.s[k][m][t] / inst.c[k][m][t], cfg.s_low, cfg.s_high)) fail("s range");
      }
    }
  }
  const double budget = capacity_budget(inst, cfg.phi);
  double weight_sum = 0.0;
  for (int m = 0; m < inst.M; ++m) weight_sum += inst.b(0, m);
  for (int m = 0; m < inst.M; ++m)
    for (int t = 0; t < inst.T; ++t) {
      const double expected = inst.b(0, m) / weight_sum * budget;
      if (std::abs(inst.C[m][t] - expected) > 1e-9 * std::abs(expected)) fail("capacity identity");
    }
  return report;
}

} // namespace lscsp
