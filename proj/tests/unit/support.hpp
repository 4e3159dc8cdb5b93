#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <random>

#include "rotorlab/linalg.hpp"

namespace test {

inline std::mt19937_64& rng() {
  // ROTORLAB_TEST_SEED replaces the fixed seed for randomized sweeps.
  static std::mt19937_64 engine(std::getenv("ROTORLAB_TEST_SEED") ? std::strtoull(std::getenv("ROTORLAB_TEST_SEED"), nullptr, 10)
                                                                   : 20240917ULL);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Eigen::Matrix3d to_eigen(const rotorlab::Mat3& m) {
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e(i, j) = m[i][j];
  return e;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace test
