#include "deepspline/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace deepspline {

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> entries) {
  Mat m;
  m.rows = static_cast<int>(entries.size());
  m.cols = m.rows > 0 ? static_cast<int>(entries.begin()->size()) : 0;
  m.data.reserve(static_cast<std::size_t>(m.rows) * m.cols);
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != m.cols)
      throw std::invalid_argument("Mat::from_rows: ragged rows");
    m.data.insert(m.data.end(), row.begin(), row.end());
  }
  return m;
}

Vec matvec(const Mat& a, const Vec& x) {
  if (static_cast<int>(x.size()) != a.cols)
    throw std::invalid_argument("matvec: dimension mismatch");
  Vec y(static_cast<std::size_t>(a.rows), 0.0);
  for (int r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    const double* row = a.data.data() + static_cast<std::size_t>(r) * a.cols;
    for (int c = 0; c < a.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

Vec matvec_transpose(const Mat& a, const Vec& y) {
  if (static_cast<int>(y.size()) != a.rows)
    throw std::invalid_argument("matvec_transpose: dimension mismatch");
  Vec x(static_cast<std::size_t>(a.cols), 0.0);
  for (int r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + static_cast<std::size_t>(r) * a.cols;
    for (int c = 0; c < a.cols; ++c) x[c] += row[c] * y[r];
  }
  return x;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double frobenius_sq(const Mat& a) {
  double acc = 0.0;
  for (double v : a.data) acc += v * v;
  return acc;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

}  // namespace deepspline
