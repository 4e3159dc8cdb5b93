#pragma once

// Small fixed-size and dense helpers. 3x3 work happens on the configuration
// metric and on group elements; the dense type backs the eigensolvers.

#include <array>
#include <cstddef>
#include <vector>

namespace rotorlab {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 identity3();
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);
Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);
double dot(const Vec3& a, const Vec3& b);
/// Largest absolute entry of a - b.
double max_abs_diff(const Mat3& a, const Mat3& b);

/// Rotation about the z axis by `angle` (counter-clockwise).
Mat3 rotation_z(double angle);
/// Rotation about the x axis by `angle`.
Mat3 rotation_x(double angle);
/// Boost in the (y, z) plane with rapidity `chi`.
Mat3 boost_yz(double chi);

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, const std::vector<double>& v);

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace rotorlab
