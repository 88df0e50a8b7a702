#include "lscsp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "lscsp/csv.hpp"
#include "lscsp/errors.hpp"

namespace lscsp {

std::optional<double> pearson(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.size() != b.size()) throw ShapeError("pearson: series lengths differ");
  if (a.size() < 2) throw ShapeError("pearson: at least two samples are required");
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0, mag_a = 0.0, mag_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a, db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
    mag_a = std::max(mag_a, std::abs(a[i]));
    mag_b = std::max(mag_b, std::abs(b[i]));
  }
  // Spread below rounding noise of the values counts as constant.
  auto flat = [n](double ss, double mag) { return std::sqrt(ss / n) <= 1e-12 * std::max(mag, 1e-300); };
  if (saa == 0.0 || sbb == 0.0 || flat(saa, mag_a) || flat(sbb, mag_b)) return std::nullopt;
  const double r = sab / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

int count_distinct(const std::vector<Objectives> &front) {
  if (front.empty()) return 0;
  int count = 1;
  const Objectives *last = &front.front();
  for (std::size_t i = 1; i < front.size(); ++i) {
    const Objectives &p = front[i];
    if (std::abs(p.F1 - last->F1) >= kDistinctThreshold && std::abs(p.F2 - last->F2) >= kDistinctThreshold) {
      ++count;
      last = &p;
    }
  }
  return count;
}

double series_value(const Objectives &obj, Series s) {
  switch (s) {
  case Series::g1: return obj.g1;
  case Series::g2: return obj.g2;
  case Series::g3: return obj.g3;
  case Series::g4: return obj.g4;
  case Series::g5: return obj.g5;
  case Series::F1: return obj.F1;
  case Series::F2: return obj.F2;
  }
  return 0.0;
}

PairValues front_correlations(const std::vector<Objectives> &front) {
  PairValues out{};
  if (front.size() < 2) return out;
  for (std::size_t p = 0; p < kReportPairs.size(); ++p) {
    std::vector<double> a, b;
    for (const auto &o : front) {
      a.push_back(series_value(o, kReportPairs[p].a));
      b.push_back(series_value(o, kReportPairs[p].b));
    }
    out[p] = pearson(a, b);
  }
  return out;
}

MaskedMean masked_mean(const std::vector<std::optional<double>> &values) {
  MaskedMean out;
  double total = 0.0;
  for (const auto &v : values)
    if (v) {
      total += *v;
      ++out.count;
    }
  if (out.count > 0) out.mean = total / out.count;
  return out;
}

CorrelationReport build_report(const std::vector<FrontSummary> &fronts) {
  CorrelationReport report;
  std::map<int, std::vector<const InstanceCorrelation *>> by_class;
  std::map<int, std::vector<std::string>> excluded;
  report.instances.reserve(fronts.size());
  for (const auto &front : fronts) {
    InstanceCorrelation row;
    row.label = front.label;
    row.class_id = front.class_id;
    row.num_points = static_cast<int>(front.points.size());
    row.r = front_correlations(front.points);
    report.instances.push_back(std::move(row));
  }
  for (const auto &row : report.instances) {
    auto &members = by_class[row.class_id];
    if (row.num_points >= 2) members.push_back(&row);
    else excluded[row.class_id].push_back(row.label);
  }

  for (const auto &[class_id, members] : by_class) {
    ClassCorrelation cls;
    cls.class_id = class_id;
    cls.fronts_used = static_cast<int>(members.size());
    if (auto it = excluded.find(class_id); it != excluded.end()) cls.excluded = it->second;
    for (std::size_t p = 0; p < kReportPairs.size(); ++p) {
      std::vector<std::optional<double>> column;
      for (const auto *m : members) column.push_back(m->r[p]);
      cls.mean[p] = masked_mean(column);
      cls.strong[p] = cls.mean[p].mean && std::abs(*cls.mean[p].mean) >= kStrongCorrelation;
    }
    report.classes.push_back(std::move(cls));
  }
  return report;
}

namespace {
std::string cell(const std::optional<double> &v) { return v ? format_double(*v) : "NA"; }
} // namespace

void write_correlation_csv(std::ostream &out, const CorrelationReport &report) {
  CsvTable table;
  table.header = {"class", "front"};
  for (const auto &pair : kReportPairs) table.header.emplace_back(pair.label);
  table.header.emplace_back("defined_count");
  for (const auto &row : report.instances) {
    std::vector<std::string> fields{std::to_string(row.class_id), row.label};
    int defined = 0;
    for (const auto &v : row.r) {
      fields.push_back(cell(v));
      defined += v ? 1 : 0;
    }
    fields.push_back(std::to_string(defined));
    table.rows.push_back(std::move(fields));
  }
  for (const auto &cls : report.classes) {
    std::vector<std::string> fields{std::to_string(cls.class_id), "average"};
    for (const auto &m : cls.mean) fields.push_back(cell(m.mean));
    fields.push_back(std::to_string(cls.fronts_used));
    table.rows.push_back(std::move(fields));
  }
  write_csv(out, table);
}

std::vector<RunStatistics> aggregate_runs(const std::vector<RunRecord> &runs) {
  std::map<std::tuple<int, std::string, int>, RunStatistics> groups;
  for (const auto &run : runs) {
    auto &g = groups[{run.class_id, run.method, run.group}];
    g.class_id = run.class_id;
    g.method = run.method;
    g.group = run.group;
    g.nd += run.nd;
    g.time_s += run.time_s;
    g.nv += run.nv;
    g.nc += run.nc;
    ++g.instances;
  }
  std::vector<RunStatistics> out;
  for (auto &[key, g] : groups) {
    g.nd /= g.instances;
    g.time_s /= g.instances;
    g.nv /= g.instances;
    g.nc /= g.instances;
    out.push_back(g);
  }
  return out;
}

void write_statistics_csv(std::ostream &out, const std::vector<RunStatistics> &stats) {
  CsvTable table;
  table.header = {"class", "method", "group", "nd", "time_s", "nv", "nc", "instances"};
  for (const auto &s : stats)
    table.rows.push_back({std::to_string(s.class_id), s.method, std::to_string(s.group), format_double(s.nd),
                          format_double(s.time_s), format_double(s.nv), format_double(s.nc),
                          std::to_string(s.instances)});
  write_csv(out, table);
}

} // namespace lscsp
