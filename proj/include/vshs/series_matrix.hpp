#pragma once

#include <string>
#include <vector>

#include "vshs/matrix.hpp"
#include "vshs/series.hpp"

namespace vshs {

/// Dense matrix of truncated series sharing one truncation order.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(int rows, int cols, int order);

  static SeriesMatrix identity(int n, int order);
  static SeriesMatrix constant(const Matrix& m, int order);
  /// sum_k q^k coeffs[k], truncated to `order`.
  static SeriesMatrix from_coefficients(const std::vector<Matrix>& coeffs, int rows, int cols, int order);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int order() const { return order_; }
  bool is_square() const { return rows_ == cols_; }

  const Series& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }
  /// Replaces an entry; the series is truncated or padded to the matrix order.
  void set(int i, int j, const Series& s);
  void set_coeff(int i, int j, int k, const Scalar& c);

  /// Constant matrix of q^k coefficients.
  Matrix coefficient(int k) const;
  bool is_zero() const;
  SeriesMatrix truncated(int order) const;
  SeriesMatrix transpose() const;
  SeriesMatrix block(int r0, int c0, int nr, int nc) const;

  SeriesMatrix& operator+=(const SeriesMatrix& o);
  SeriesMatrix& operator-=(const SeriesMatrix& o);
  SeriesMatrix& operator*=(const Scalar& c);
  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) { return a += b; }
  friend SeriesMatrix operator-(SeriesMatrix a, const SeriesMatrix& b) { return a -= b; }
  friend SeriesMatrix operator*(SeriesMatrix a, const Scalar& c) { return a *= c; }
  friend SeriesMatrix operator*(const Scalar& c, SeriesMatrix a) { return a *= c; }
  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
  friend SeriesMatrix operator*(const Series& s, const SeriesMatrix& m);
  SeriesMatrix operator-() const { return *this * Scalar(-1); }
  friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.order_ == b.order_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const SeriesMatrix& a, const SeriesMatrix& b) { return !(a == b); }

  std::string str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int order_ = 0;
  std::vector<Series> entries_;
};

/// Entrywise theta = q d/dq.
SeriesMatrix theta(const SeriesMatrix& m);
/// Entrywise composition m(g(q)).
SeriesMatrix compose(const SeriesMatrix& m, const Series& g);
/// Inverse over the power-series ring; requires m(0) invertible.
SeriesMatrix inverse(const SeriesMatrix& m);
/// Determinant over the power-series ring.
Series determinant(const SeriesMatrix& m);

}  // namespace vshs
