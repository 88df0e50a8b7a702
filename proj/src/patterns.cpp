#include "lscsp/patterns.hpp"

#include <algorithm>
#include <ostream>

#include "lscsp/errors.hpp"

namespace lscsp {

PatternSet::PatternSet(int K, int M) : K_(K), M_(M), lists_(static_cast<std::size_t>(K * M)) {}

std::size_t PatternSet::index(int k, int m) const {
  if (k < 0 || k >= K_ || m < 0 || m >= M_) throw ShapeError("pattern set index out of range");
  return static_cast<std::size_t>(k * M_ + m);
}

void PatternSet::set(int k, int m, std::vector<CuttingPattern> patterns) { lists_[index(k, m)] = std::move(patterns); }

int PatternSet::total() const {
  int n = 0;
  for (const auto &list : lists_) n += static_cast<int>(list.size());
  return n;
}

namespace {

struct Enumerator {
  const std::vector<int> &pieces;
  const std::vector<int> &ell;
  int min_len;
  CuttingPattern current;
  std::vector<CuttingPattern> out;

  // Depth-first over piece positions with the remaining length as the bound.
  void run(std::size_t pos, int remaining) {
    if (pos == pieces.size()) {
      if (remaining < min_len) {
        CuttingPattern p = current;
        p.waste = remaining;
        out.push_back(std::move(p));
      }
      return;
    }
    const int i = pieces[pos];
    const int len = ell[i];
    const int most = remaining / len;
    for (int n = most; n >= 0; --n) {
      current.counts[i] = n;
      run(pos + 1, remaining - n * len);
    }
    current.counts[i] = 0;
  }
};

} // namespace

std::vector<CuttingPattern> enumerate_patterns(const Instance &inst, int m, int k) {
  const std::vector<int> pieces = inst.pieces_of(k);
  if (pieces.empty()) throw ConfigError("grammage " + std::to_string(k) + " has no pieces");
  const int length = static_cast<int>(inst.L[m]);
  int min_len = inst.ell[pieces.front()];
  for (int i : pieces) min_len = std::min(min_len, inst.ell[i]);
  if (min_len > length)
    throw ConfigError("no piece of grammage " + std::to_string(k) + " fits machine " + std::to_string(m));

  CuttingPattern seed;
  seed.machine = m;
  seed.grammage = k;
  seed.counts.assign(static_cast<std::size_t>(inst.Nf), 0);
  seed.waste = length;
  Enumerator walk{pieces, inst.ell, min_len, seed, {}};
  walk.run(0, length);

  std::sort(walk.out.begin(), walk.out.end(), [](const CuttingPattern &a, const CuttingPattern &b) {
    if (a.waste != b.waste) return a.waste < b.waste;
    return a.counts > b.counts;
  });
  return std::move(walk.out);
}

std::vector<CuttingPattern> select_heuristic(const std::vector<CuttingPattern> &patterns, int n) {
  if (n < 1) throw ConfigError("heuristic pattern count must be at least 1");
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(n), patterns.size());
  return {patterns.begin(), patterns.begin() + static_cast<std::ptrdiff_t>(take)};
}

PatternSet build_pattern_set(const Instance &inst, int limit) {
  PatternSet set(inst.K, inst.M);
  for (int k = 0; k < inst.K; ++k)
    for (int m = 0; m < inst.M; ++m) {
      auto all = enumerate_patterns(inst, m, k);
      set.set(k, m, limit > 0 ? select_heuristic(all, limit) : std::move(all));
    }
  return set;
}

void write_patterns_csv(std::ostream &out, const Instance &inst, const PatternSet &set) {
  out << "k,m,j";
  for (int i = 1; i <= inst.Nf; ++i) out << ",a_" << i;
  out << ",waste_cm\n";
  for (int k = 0; k < set.K(); ++k)
    for (int m = 0; m < set.M(); ++m) {
      const auto &list = set.at(k, m);
      for (std::size_t j = 0; j < list.size(); ++j) {
        out << k << ',' << m << ',' << j;
        for (int a : list[j].counts) out << ',' << a;
        out << ',' << list[j].waste << '\n';
      }
    }
}

} // namespace lscsp
