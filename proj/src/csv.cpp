#include "lscsp/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lscsp/errors.hpp"

namespace lscsp {

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return {buf, end};
}

double parse_double(const std::string &text) {
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  if (text == "NA") return NAN;
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) throw ShapeError("not a number: '" + text + "'");
  return value;
}

int CsvTable::column(const std::string &name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return static_cast<int>(c);
  return -1;
}

namespace {
std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}
} // namespace

CsvTable read_csv(std::istream &in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) return table;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != table.header.size()) throw ShapeError("CSV row width differs from header");
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return read_csv(in);
}

void write_csv(std::ostream &out, const CsvTable &table) {
  auto line = [&](const std::vector<std::string> &fields) {
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c) out << ',';
      out << fields[c];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto &row : table.rows) line(row);
}

std::vector<FrontRecord> parse_front(const CsvTable &table) {
  const char *names[] = {"method", "control", "status", "F1", "F2", "g1", "g2", "g3", "g4", "g5"};
  int cols[10];
  for (int c = 0; c < 10; ++c) {
    cols[c] = table.column(names[c]);
    if (cols[c] < 0) throw ShapeError(std::string("front CSV lacks column ") + names[c]);
  }
  std::vector<FrontRecord> out;
  for (const auto &row : table.rows) {
    FrontRecord rec;
    rec.method = row[cols[0]];
    rec.control = parse_double(row[cols[1]]);
    rec.status = row[cols[2]];
    if (row[cols[3]] != "NA") {
      Objectives o;
      o.F1 = parse_double(row[cols[3]]);
      o.F2 = parse_double(row[cols[4]]);
      o.g1 = parse_double(row[cols[5]]);
      o.g2 = parse_double(row[cols[6]]);
      o.g3 = parse_double(row[cols[7]]);
      o.g4 = parse_double(row[cols[8]]);
      o.g5 = parse_double(row[cols[9]]);
      rec.obj = o;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

} // namespace lscsp
