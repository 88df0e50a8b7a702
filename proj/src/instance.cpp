#include "lscsp/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lscsp/errors.hpp"

namespace lscsp {

namespace {

template <typename V> void expect_size(const V &v, std::size_t n, const char *what) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << what << ": expected " << n << " entries, got " << v.size();
    throw ShapeError(msg.str());
  }
}

void expect_mat(const Mat &a, int rows, int cols, const char *what) {
  expect_size(a, static_cast<std::size_t>(rows), what);
  for (const auto &row : a) expect_size(row, static_cast<std::size_t>(cols), what);
}

void expect_cube(const Cube &a, int n0, int n1, int n2, const char *what) {
  expect_size(a, static_cast<std::size_t>(n0), what);
  for (const auto &m : a) expect_mat(m, n1, n2, what);
}

void expect_nonnegative(double v, const char *what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInstance(std::string(what) + " must be finite and nonnegative");
}

void expect_nonnegative(const Mat &a, const char *what) {
  for (const auto &row : a)
    for (double v : row) expect_nonnegative(v, what);
}

void expect_nonnegative(const Cube &a, const char *what) {
  for (const auto &m : a) expect_nonnegative(m, what);
}

} // namespace

double Instance::D(int k, int t) const {
  double total = 0.0;
  for (int i = 0; i < Nf; ++i)
    if (piece_grammage[i] == k) total += eta(i) * static_cast<double>(d[i][t]);
  return total;
}

std::vector<int> Instance::pieces_of(int k) const {
  std::vector<int> out;
  for (int i = 0; i < Nf; ++i)
    if (piece_grammage[i] == k) out.push_back(i);
  return out;
}

void Instance::validate() const {
  if (T <= 0 || K <= 0 || M <= 0 || Nf <= 0) throw InvalidInstance("T, K, M and Nf must be positive");
  expect_size(L, M, "L");
  expect_size(rho, K, "rho");
  expect_size(piece_grammage, Nf, "piece_grammage");
  expect_size(ell, Nf, "ell");
  expect_cube(c, K, M, T, "c");
  expect_mat(h, K, T, "h");
  expect_cube(s, K, M, T, "s");
  expect_mat(C, M, T, "C");
  expect_mat(f, K, M, "f");
  expect_mat(cp, K, T, "cp");
  expect_mat(sigma, Nf, T, "sigma");
  expect_size(d, Nf, "d");
  for (const auto &row : d) expect_size(row, T, "d");

  for (double v : L)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInstance("object lengths must be positive");
  for (double v : rho)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInstance("specific weights must be positive");
  for (int k : piece_grammage)
    if (k < 0 || k >= K) throw InvalidInstance("piece grammage index out of range");
  double longest = 0.0;
  for (double v : L) longest = std::max(longest, v);
  for (int len : ell) {
    if (len <= 0) throw InvalidInstance("piece lengths must be positive");
    if (len > longest) throw InvalidInstance("piece longer than every object");
  }
  expect_nonnegative(c, "c");
  expect_nonnegative(h, "h");
  expect_nonnegative(s, "s");
  expect_nonnegative(C, "C");
  expect_nonnegative(f, "f");
  expect_nonnegative(cp, "cp");
  expect_nonnegative(sigma, "sigma");
  for (const auto &row : d)
    for (long long v : row)
      if (v < 0) throw InvalidInstance("demands must be nonnegative");
}

nlohmann::json to_json(const Instance &inst) {
  nlohmann::json doc;
  doc["T"] = inst.T;
  doc["K"] = inst.K;
  doc["M"] = inst.M;
  doc["Nf"] = inst.Nf;
  doc["L"] = inst.L;
  doc["rho"] = inst.rho;
  doc["piece_grammage"] = inst.piece_grammage;
  doc["ell"] = inst.ell;
  doc["c"] = inst.c;
  doc["h"] = inst.h;
  doc["s"] = inst.s;
  doc["C"] = inst.C;
  doc["f"] = inst.f;
  doc["cp"] = inst.cp;
  doc["sigma"] = inst.sigma;
  doc["d"] = inst.d;
  return doc;
}

Instance instance_from_json(const nlohmann::json &doc) {
  Instance inst;
  try {
    inst.T = doc.at("T").get<int>();
    inst.K = doc.at("K").get<int>();
    inst.M = doc.at("M").get<int>();
    inst.Nf = doc.at("Nf").get<int>();
    inst.L = doc.at("L").get<Vec>();
    inst.rho = doc.at("rho").get<Vec>();
    inst.piece_grammage = doc.at("piece_grammage").get<std::vector<int>>();
    inst.ell = doc.at("ell").get<std::vector<int>>();
    inst.c = doc.at("c").get<Cube>();
    inst.h = doc.at("h").get<Mat>();
    inst.s = doc.at("s").get<Cube>();
    inst.C = doc.at("C").get<Mat>();
    inst.f = doc.at("f").get<Mat>();
    inst.cp = doc.at("cp").get<Mat>();
    inst.sigma = doc.at("sigma").get<Mat>();
    inst.d = doc.at("d").get<std::vector<std::vector<long long>>>();
  } catch (const nlohmann::json::exception &err) {
    throw ShapeError(std::string("instance JSON: ") + err.what());
  }
  inst.validate();
  return inst;
}

Instance load_instance(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open instance file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception &err) {
    throw ShapeError(path + ": " + err.what());
  }
  return instance_from_json(doc);
}

void save_instance(const Instance &inst, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << to_json(inst).dump(1) << '\n';
}

} // namespace lscsp
