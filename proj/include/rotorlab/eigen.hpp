#pragma once

// Symmetric eigensolvers for the radial matrices: Sturm-sequence bisection
// for eigenvalues and inverse iteration for eigenvectors on a tridiagonal
// matrix; dense input (and the periodic tridiagonal-plus-corners case) is
// reduced to tridiagonal form by Householder reflections first.

#include <cstddef>
#include <vector>

#include "rotorlab/linalg.hpp"

namespace rotorlab {

/// Symmetric tridiagonal matrix; when `periodic` is set, `corner` sits at
/// (0, n-1) and (n-1, 0).
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> off;
  double corner = 0.0;
  bool periodic = false;

  std::size_t size() const { return diag.size(); }
  Matrix to_dense() const;
  std::vector<double> multiply(const std::vector<double>& x) const;
  /// Infinity norm (max absolute row sum).
  double norm() const;
};

struct EigenPairs {
  /// Ascending.
  std::vector<double> values;
  /// n x k, column j pairs with values[j]; unit Euclidean norm.
  Matrix vectors;
  /// ||A v - lambda v|| per pair.
  std::vector<double> residuals;
  /// Norm used for the residual acceptance bound.
  double matrix_norm = 0.0;
};

/// Number of eigenvalues of the (non-periodic) tridiagonal (diag, off) below x.
std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x);

/// k smallest eigenpairs. Each pair satisfies ||A v - lambda v|| <= 1e-10 ||A||;
/// otherwise ConvergenceFailure is thrown.
EigenPairs eigen_symmetric(const TridiagonalMatrix& a, std::size_t k);
EigenPairs eigen_symmetric(const Matrix& a, std::size_t k);

}  // namespace rotorlab
