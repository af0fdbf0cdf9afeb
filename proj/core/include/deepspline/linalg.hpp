#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace deepspline {

using Vec = std::vector<double>;

/// Dense row-major matrix. Rows index output neurons, columns inputs.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  static Mat from_rows(std::initializer_list<std::initializer_list<double>> entries);

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

Vec matvec(const Mat& a, const Vec& x);

/// y^T A, i.e. A^T y.
Vec matvec_transpose(const Mat& a, const Vec& y);

double dot(const Vec& a, const Vec& b);
double frobenius_sq(const Mat& a);
double norm2(const Vec& v);

}  // namespace deepspline
