#pragma once

#include <vector>

#include "lscsp/instance.hpp"

namespace fixtures {

// A single-grammage instance with uniform costs; tests overwrite what they need.
inline lscsp::Instance tiny(int T, int M, std::vector<double> L, std::vector<int> ell) {
  lscsp::Instance inst;
  inst.T = T;
  inst.K = 1;
  inst.M = M;
  inst.Nf = static_cast<int>(ell.size());
  inst.L = std::move(L);
  inst.rho = {1.0};
  inst.piece_grammage.assign(inst.Nf, 0);
  inst.ell = std::move(ell);
  inst.c = lscsp::Cube(1, lscsp::Mat(M, lscsp::Vec(T, 1.0)));
  inst.h = lscsp::Mat(1, lscsp::Vec(T, 0.01));
  inst.s = lscsp::Cube(1, lscsp::Mat(M, lscsp::Vec(T, 5.0)));
  inst.C = lscsp::Mat(M, lscsp::Vec(T, 10000.0));
  inst.f = lscsp::Mat(1, lscsp::Vec(M, 1.0));
  inst.cp = lscsp::Mat(1, lscsp::Vec(T, 0.1));
  inst.sigma = lscsp::Mat(inst.Nf, lscsp::Vec(T, 0.02));
  inst.d = std::vector<std::vector<long long>>(inst.Nf, std::vector<long long>(T, 0));
  return inst;
}

} // namespace fixtures
