#include "rotorlab/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "rotorlab/errors.hpp"

namespace rotorlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kResidualBound = 1e-10;

double tridiagonal_norm(const std::vector<double>& d, const std::vector<double>& e, double corner = 0.0) {
  const std::size_t n = d.size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(d[i]);
    if (i > 0) row += std::abs(e[i - 1]);
    if (i + 1 < n) row += std::abs(e[i]);
    if (i == 0 || i + 1 == n) row += std::abs(corner);
    norm = std::max(norm, row);
  }
  return norm;
}

double pivot_floor(const std::vector<double>& e) {
  double emax = 1.0;
  for (double v : e) emax = std::max(emax, v * v);
  return std::numeric_limits<double>::min() * emax;
}

std::size_t sturm_count_impl(const std::vector<double>& d, const std::vector<double>& e, double x, double pivmin) {
  std::size_t count = 0;
  double q = d[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

// LU with partial pivoting of (T - shift I); LAPACK dgttrf layout.
struct TridiagonalLu {
  std::vector<double> dl, d, du, du2;
  std::vector<char> swapped;

  TridiagonalLu(const std::vector<double>& diag, const std::vector<double>& off, double shift, double tiny) {
    const std::size_t n = diag.size();
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
    dl = off;
    du = off;
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = tiny;
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du2[i];
        }
        swapped[i] = 1;
      }
    }
    if (n > 0 && d[n - 1] == 0.0) d[n - 1] = tiny;
    for (double& v : d)
      if (std::abs(v) < tiny) v = std::copysign(tiny, v == 0.0 ? 1.0 : v);
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      } else {
        b[i + 1] -= dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n >= 2 ? n - 2 : 0; ii-- > 0;) b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
  }
};

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> tridiagonal_multiply(const std::vector<double>& d, const std::vector<double>& e,
                                         const std::vector<double>& x) {
  const std::size_t n = d.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = d[i] * x[i];
    if (i > 0) s += e[i - 1] * x[i - 1];
    if (i + 1 < n) s += e[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

EigenPairs tridiagonal_eigenpairs(const std::vector<double>& d, const std::vector<double>& e, std::size_t k) {
  const std::size_t n = d.size();
  EigenPairs out;
  out.matrix_norm = tridiagonal_norm(d, e);
  const double norm = std::max(out.matrix_norm, std::numeric_limits<double>::min());
  const double pivmin = pivot_floor(e);

  double gl = std::numeric_limits<double>::infinity(), gu = -gl;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    gl = std::min(gl, d[i] - r);
    gu = std::max(gu, d[i] + r);
  }
  gl -= 2.0 * kEps * norm + pivmin;
  gu += 2.0 * kEps * norm + pivmin;

  // Bisection on the Sturm count, one eigenvalue at a time.
  out.values.resize(k);
  const double abstol = kEps * norm;
  for (std::size_t j = 0; j < k; ++j) {
    double lo = j > 0 ? std::max(gl, out.values[j - 1] - 4.0 * abstol) : gl;
    double hi = gu;
    while (sturm_count_impl(d, e, lo, pivmin) > j) lo -= std::max(abstol, std::abs(lo) * kEps) * 16.0;
    int iterations = 0;
    while (hi - lo > std::max(abstol, 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)))) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count_impl(d, e, mid, pivmin) > j)
        hi = mid;
      else
        lo = mid;
      if (++iterations > 2000) {
        std::ostringstream os;
        os << "bisection did not converge for eigenvalue " << j << " after " << iterations
           << " steps (interval [" << lo << ", " << hi << "])";
        throw ConvergenceFailure(os.str());
      }
    }
    out.values[j] = 0.5 * (lo + hi);
  }

  // Inverse iteration; vectors in a cluster are orthogonalized against each other.
  out.vectors = Matrix(n, k);
  out.residuals.assign(k, 0.0);
  std::mt19937_64 rng(0x5eed1234ULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double cluster_gap = 1e-3 * norm;
  const double tiny = kEps * norm;
  std::size_t cluster_start = 0;
  double previous_shift = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    double shift = out.values[j];
    if (j > 0) {
      if (out.values[j] - out.values[j - 1] > cluster_gap) cluster_start = j;
      const double min_sep = 10.0 * kEps * std::max(std::abs(shift), norm * 1e-3);
      if (shift - previous_shift < min_sep) shift = previous_shift + min_sep;
    }
    previous_shift = shift;

    const TridiagonalLu lu(d, e, shift, tiny);
    std::vector<double> x(n);
    for (double& v : x) v = uni(rng);

    double residual = std::numeric_limits<double>::infinity();
    std::vector<double> best;
    for (int it = 0; it < 8; ++it) {
      const double scale = norm2(x);
      for (double& v : x) v /= scale;
      lu.solve(x);
      for (std::size_t i = cluster_start; i < j; ++i) {
        double proj = 0.0;
        for (std::size_t r = 0; r < n; ++r) proj += out.vectors(r, i) * x[r];
        for (std::size_t r = 0; r < n; ++r) x[r] -= proj * out.vectors(r, i);
      }
      const double xn = norm2(x);
      if (!(xn > 0.0) || !std::isfinite(xn)) {
        for (double& v : x) v = uni(rng);
        continue;
      }
      for (double& v : x) v /= xn;
      const std::vector<double> ax = tridiagonal_multiply(d, e, x);
      double r2 = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double t = ax[r] - out.values[j] * x[r];
        r2 += t * t;
      }
      const double res = std::sqrt(r2);
      if (res < residual) {
        residual = res;
        best = x;
      }
      if (it >= 1 && residual <= 1e-3 * kResidualBound * norm) break;
    }
    if (!(residual <= kResidualBound * norm)) {
      std::ostringstream os;
      os << "inverse iteration failed for eigenvalue " << j << " (" << out.values[j] << "): residual " << residual
         << " exceeds " << kResidualBound * norm;
      throw ConvergenceFailure(os.str());
    }
    // Fix the sign so that the largest component is positive (deterministic output).
    std::size_t imax = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(best[r]) > std::abs(best[imax])) imax = r;
    if (best[imax] < 0.0)
      for (double& v : best) v = -v;
    out.vectors.set_column(j, best);
    out.residuals[j] = residual;
  }
  return out;
}

// Householder reduction A = Q T Q^T. Reflector k acts on rows k+1..n-1.
struct HouseholderReduction {
  std::vector<double> d, e;
  std::vector<std::vector<double>> reflectors;
  std::vector<double> betas;

  explicit HouseholderReduction(Matrix a) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n > 0 ? n - 1 : 0, 0.0);
    std::vector<double> p(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
      const std::size_t m = n - k - 1;
      std::vector<double> v(m);
      double sigma = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        v[i] = a(k + 1 + i, k);
        if (i > 0) sigma += v[i] * v[i];
      }
      double beta = 0.0;
      const double x0 = v[0];
      double alpha = x0;
      if (sigma > 0.0) {
        const double mu = std::sqrt(x0 * x0 + sigma);
        alpha = x0 <= 0.0 ? mu : -mu;
        const double v0 = x0 - alpha;
        beta = 2.0 * v0 * v0 / (sigma + v0 * v0);
        for (std::size_t i = 1; i < m; ++i) v[i] /= v0;
        v[0] = 1.0;
      } else {
        v[0] = 1.0;
      }
      e[k] = alpha;
      d[k] = a(k, k);
      if (beta != 0.0) {
        // p = beta * A22 v ; w = p - (beta p.v / 2) v ; A22 -= v w^T + w v^T
        for (std::size_t i = 0; i < m; ++i) {
          double s = 0.0;
          const double* row = &a(k + 1 + i, k + 1);
          for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
          p[i] = beta * s;
        }
        double pv = 0.0;
        for (std::size_t i = 0; i < m; ++i) pv += p[i] * v[i];
        const double gamma = 0.5 * beta * pv;
        for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - gamma * v[i];
        for (std::size_t i = 0; i < m; ++i) {
          double* row = &a(k + 1 + i, k + 1);
          const double vi = v[i], wi = w[i];
          for (std::size_t j = 0; j < m; ++j) row[j] -= vi * w[j] + wi * v[j];
        }
      }
      reflectors.push_back(std::move(v));
      betas.push_back(beta);
    }
    if (n >= 2) {
      e[n - 2] = a(n - 1, n - 2);
      d[n - 2] = a(n - 2, n - 2);
    }
    if (n >= 1) d[n - 1] = a(n - 1, n - 1);
  }

  void back_transform(std::vector<double>& y) const {
    for (std::size_t kk = reflectors.size(); kk-- > 0;) {
      const std::vector<double>& v = reflectors[kk];
      if (betas[kk] == 0.0) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * y[kk + 1 + i];
      s *= betas[kk];
      for (std::size_t i = 0; i < v.size(); ++i) y[kk + 1 + i] -= s * v[i];
    }
  }
};

double dense_norm(const Matrix& a) {
  double norm = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  return norm;
}

void check_request(std::size_t n, std::size_t k) {
  if (n == 0) throw ConvergenceFailure("empty matrix");
  if (k > n) throw ConvergenceFailure("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
}

}  // namespace

Matrix TridiagonalMatrix::to_dense() const {
  const std::size_t n = size();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = diag[i];
    if (i + 1 < n) {
      a(i, i + 1) = off[i];
      a(i + 1, i) = off[i];
    }
  }
  if (periodic && n > 2) {
    a(0, n - 1) += corner;
    a(n - 1, 0) += corner;
  }
  return a;
}

std::vector<double> TridiagonalMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y = tridiagonal_multiply(diag, off, x);
  const std::size_t n = size();
  if (periodic && n > 2) {
    y[0] += corner * x[n - 1];
    y[n - 1] += corner * x[0];
  }
  return y;
}

double TridiagonalMatrix::norm() const {
  return tridiagonal_norm(diag, off, periodic && size() > 2 ? corner : 0.0);
}

std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  return sturm_count_impl(diag, off, x, pivot_floor(off));
}

EigenPairs eigen_symmetric(const TridiagonalMatrix& a, std::size_t k) {
  check_request(a.size(), k);
  if (a.off.size() + 1 != a.size()) throw ConvergenceFailure("tridiagonal off-diagonal has wrong length");
  if (!a.periodic || a.size() <= 2 || a.corner == 0.0) return tridiagonal_eigenpairs(a.diag, a.off, k);
  return eigen_symmetric(a.to_dense(), k);
}

EigenPairs eigen_symmetric(const Matrix& a, std::size_t k) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ConvergenceFailure("matrix is not square");
  check_request(n, k);
  if (n == 1) {
    EigenPairs out;
    out.matrix_norm = std::abs(a(0, 0));
    out.values.assign(k, a(0, 0));
    out.vectors = Matrix(1, k, 1.0);
    out.residuals.assign(k, 0.0);
    return out;
  }
  const HouseholderReduction red(a);
  EigenPairs out = tridiagonal_eigenpairs(red.d, red.e, k);
  const double norm = std::max(dense_norm(a), out.matrix_norm);
  out.matrix_norm = norm;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> y = out.vectors.column(j);
    red.back_transform(y);
    std::vector<double> ay(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += a(i, c) * y[c];
      ay[i] = s;
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = ay[i] - out.values[j] * y[i];
      r2 += t * t;
    }
    out.residuals[j] = std::sqrt(r2);
    if (!(out.residuals[j] <= kResidualBound * norm)) {
      std::ostringstream os;
      os << "dense eigenpair " << j << " residual " << out.residuals[j] << " exceeds " << kResidualBound * norm;
      throw ConvergenceFailure(os.str());
    }
    std::size_t imax = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(y[r]) > std::abs(y[imax])) imax = r;
    if (y[imax] < 0.0)
      for (double& v : y) v = -v;
    out.vectors.set_column(j, y);
  }
  return out;
}

}  // namespace rotorlab
