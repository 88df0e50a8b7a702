#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace lscsp {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;
using Cube = std::vector<Mat>;

/// Data of one integrated lot-sizing / cutting-stock instance.
///
/// Indices are zero-based: k grammage, m machine, t period, i piece type.
/// Nested arrays follow the order k, then m, then t (pieces use i, then t).
/// Units are taken as they appear in the cost formulas; no tonne/kg conversion is done.
struct Instance {
  int T = 0;  ///< periods
  int K = 0;  ///< grammages
  int M = 0;  ///< machine types
  int Nf = 0; ///< piece types

  Vec L;                           ///< [m] object length, cm
  Vec rho;                         ///< [k] specific weight, kg/cm
  std::vector<int> piece_grammage; ///< [i] grammage of piece i
  std::vector<int> ell;            ///< [i] piece length, cm

  Cube c;    ///< [k][m][t] production cost per object
  Mat h;     ///< [k][t] object storage cost per unit weight
  Cube s;    ///< [k][m][t] setup cost
  Mat C;     ///< [m][t] machine capacity, weight
  Mat f;     ///< [k][m] setup material waste, weight
  Mat cp;    ///< [k][t] cutting waste cost per cm
  Mat sigma; ///< [i][t] piece storage cost per unit weight
  std::vector<std::vector<long long>> d; ///< [i][t] demanded pieces

  /// Object weight rho[k] * L[m].
  [[nodiscard]] double b(int k, int m) const { return rho[k] * L[m]; }
  /// Piece weight rho[k(i)] * ell[i].
  [[nodiscard]] double eta(int i) const { return rho[piece_grammage[i]] * ell[i]; }
  /// Weighted piece demand of grammage k in period t.
  [[nodiscard]] double D(int k, int t) const;

  /// Piece indices belonging to grammage k, ascending.
  [[nodiscard]] std::vector<int> pieces_of(int k) const;

  /// Throws ShapeError on dimension mismatches and InvalidInstance on value violations.
  void validate() const;
};

[[nodiscard]] nlohmann::json to_json(const Instance &inst);
[[nodiscard]] Instance instance_from_json(const nlohmann::json &doc);

[[nodiscard]] Instance load_instance(const std::string &path);
void save_instance(const Instance &inst, const std::string &path);

} // namespace lscsp
