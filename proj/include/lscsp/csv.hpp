#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lscsp/model.hpp"

namespace lscsp {

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] double parse_double(const std::string &text);

/// Plain comma-separated table; fields never contain commas or quotes here.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] int column(const std::string &name) const; ///< -1 when absent
};

[[nodiscard]] CsvTable read_csv(std::istream &in);
[[nodiscard]] CsvTable read_csv_file(const std::string &path);
void write_csv(std::ostream &out, const CsvTable &table);

/// One line of a front CSV.
struct FrontRecord {
  std::string method;
  double control = 0.0;
  std::string status;
  std::optional<Objectives> obj; ///< absent for points without values
};

[[nodiscard]] std::vector<FrontRecord> parse_front(const CsvTable &table);

} // namespace lscsp
