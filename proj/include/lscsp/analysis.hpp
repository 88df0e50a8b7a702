#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lscsp/model.hpp"

namespace lscsp {

/// Product-moment correlation; nullopt when either series has no spread.
/// Throws ShapeError on unequal lengths or fewer than two samples.
[[nodiscard]] std::optional<double> pearson(const std::vector<double> &a, const std::vector<double> &b);

inline constexpr double kDistinctThreshold = 1e-4;

/// Greedy count over a front sorted by ascending F1: a point counts when it differs from the
/// last counted point by at least 1e-4 in both objectives.
[[nodiscard]] int count_distinct(const std::vector<Objectives> &front);

/// Correlated series pairs, in report column order.
enum class Series { g1, g2, g3, g4, g5, F1, F2 };
struct SeriesPair {
  Series a;
  Series b;
  const char *label;
};
inline constexpr std::array<SeriesPair, 11> kReportPairs{{
    {Series::g1, Series::g4, "g1xg4"}, {Series::g4, Series::g5, "g4xg5"}, {Series::g1, Series::g5, "g1xg5"},
    {Series::g2, Series::g4, "g2xg4"}, {Series::g3, Series::g4, "g3xg4"}, {Series::g2, Series::g5, "g2xg5"},
    {Series::g3, Series::g5, "g3xg5"}, {Series::g1, Series::g2, "g1xg2"}, {Series::g1, Series::g3, "g1xg3"},
    {Series::g2, Series::g3, "g2xg3"}, {Series::F1, Series::F2, "F1xF2"},
}};

[[nodiscard]] double series_value(const Objectives &obj, Series s);

using PairValues = std::array<std::optional<double>, kReportPairs.size()>;

/// Correlations of one front; every entry undefined when the front has fewer than two points.
[[nodiscard]] PairValues front_correlations(const std::vector<Objectives> &front);

/// Mean over defined entries only.
struct MaskedMean {
  std::optional<double> mean;
  int count = 0;
};
[[nodiscard]] MaskedMean masked_mean(const std::vector<std::optional<double>> &values);

inline constexpr double kStrongCorrelation = 0.8;

struct FrontSummary {
  std::string label;
  int class_id = 0;
  std::vector<Objectives> points; ///< nondominated, ascending F1
};

struct InstanceCorrelation {
  std::string label;
  int class_id = 0;
  int num_points = 0;
  PairValues r;
};

struct ClassCorrelation {
  int class_id = 0;
  std::array<MaskedMean, kReportPairs.size()> mean;
  std::array<bool, kReportPairs.size()> strong{}; ///< |mean| >= 0.8
  int fronts_used = 0;
  std::vector<std::string> excluded; ///< fronts with fewer than two points
};

struct CorrelationReport {
  std::vector<InstanceCorrelation> instances;
  std::vector<ClassCorrelation> classes; ///< ascending class id
};

[[nodiscard]] CorrelationReport build_report(const std::vector<FrontSummary> &fronts);

/// Columns class,front,<11 pairs>,defined_count. Average rows use front = "average".
void write_correlation_csv(std::ostream &out, const CorrelationReport &report);

struct RunRecord {
  int class_id = 0;
  std::string method;
  int group = 0;
  int nd = 0;
  double time_s = 0.0;
  int nv = 0;
  int nc = 0;
};

struct RunStatistics {
  int class_id = 0;
  std::string method;
  int group = 0;
  double nd = 0.0;
  double time_s = 0.0;
  double nv = 0.0;
  double nc = 0.0;
  int instances = 0;
};

/// Means per (class, method, group).
[[nodiscard]] std::vector<RunStatistics> aggregate_runs(const std::vector<RunRecord> &runs);

/// Columns class,method,group,nd,time_s,nv,nc,instances.
void write_statistics_csv(std::ostream &out, const std::vector<RunStatistics> &stats);

} // namespace lscsp
