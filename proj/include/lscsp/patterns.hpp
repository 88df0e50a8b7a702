#pragma once

#include <iosfwd>
#include <vector>

#include "lscsp/instance.hpp"

namespace lscsp {

/// One way of cutting an object of machine m into pieces of grammage k.
struct CuttingPattern {
  int machine = 0;
  int grammage = 0;
  std::vector<int> counts; ///< [i] over all Nf pieces; zero outside S(k)
  int waste = 0;           ///< L[m] - sum counts[i] * ell[i], cm

  friend bool operator==(const CuttingPattern &, const CuttingPattern &) = default;
};

/// Patterns for every (k, m) pair, each list in the canonical order.
class PatternSet {
public:
  PatternSet() = default;
  PatternSet(int K, int M);

  [[nodiscard]] int K() const { return K_; }
  [[nodiscard]] int M() const { return M_; }

  [[nodiscard]] const std::vector<CuttingPattern> &at(int k, int m) const { return lists_[index(k, m)]; }
  void set(int k, int m, std::vector<CuttingPattern> patterns);
  [[nodiscard]] int count(int k, int m) const { return static_cast<int>(at(k, m).size()); }
  [[nodiscard]] int total() const;

private:
  [[nodiscard]] std::size_t index(int k, int m) const;

  int K_ = 0;
  int M_ = 0;
  std::vector<std::vector<CuttingPattern>> lists_;
};

/// All maximal patterns of machine m for grammage k: waste is below the shortest piece of S(k).
/// Ordered by ascending waste, ties by lexicographically descending counts.
/// Throws ConfigError when S(k) is empty or no piece of S(k) fits L[m].
[[nodiscard]] std::vector<CuttingPattern> enumerate_patterns(const Instance &inst, int m, int k);

/// The first min(n, size) patterns of a canonically ordered list.
[[nodiscard]] std::vector<CuttingPattern> select_heuristic(const std::vector<CuttingPattern> &patterns, int n);

/// Enumerates every (k, m) pair. With `limit` > 0 each list is cut to its `limit` lowest-waste entries.
[[nodiscard]] PatternSet build_pattern_set(const Instance &inst, int limit = 0);

/// CSV with header k,m,j,a_1..a_Nf,waste_cm (indices zero-based).
void write_patterns_csv(std::ostream &out, const Instance &inst, const PatternSet &set);

} // namespace lscsp
