#pragma once

#include <string>
#include <vector>

#include "vshs/scalar.hpp"

namespace vshs {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix over Q(i).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  static Matrix identity(int n);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows);
  /// Matrix whose columns are the given vectors (all of length `dim`).
  static Matrix from_columns(int dim, const std::vector<Vector>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Scalar& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * cols_ + j)];
  }

  Vector column(int j) const;
  Vector row(int i) const;
  Matrix transpose() const;
  bool is_zero() const;
  Matrix block(int r0, int c0, int nr, int nc) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Scalar& c);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& c) { return a *= c; }
  friend Matrix operator*(const Scalar& c, Matrix a) { return a *= c; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  Matrix operator-() const { return *this * Scalar(-1); }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> data_;
};

Matrix matrix_power(const Matrix& m, int k);

/// Reduced row echelon form together with the pivot column of each nonzero row.
struct RowEchelon {
  Matrix reduced;
  std::vector<int> pivots;
};

RowEchelon row_echelon(Matrix m);
int rank(const Matrix& m);
Scalar determinant(const Matrix& m);
/// Throws Singular when m is not invertible.
Matrix inverse(const Matrix& m);
/// Columns form a basis of {x : m x = 0}, one vector per free column.
std::vector<Vector> nullspace(const Matrix& m);

/// A linear subspace of Q(i)^dim, stored as the reduced row echelon form of a
/// spanning set so that equality of subspaces is equality of representations.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {}

  static Subspace span(int ambient_dim, const std::vector<Vector>& vectors);
  static Subspace full(int ambient_dim);
  /// Span of the standard basis vectors with the given indices.
  static Subspace coordinate(int ambient_dim, const std::vector<int>& indices);

  int ambient_dim() const { return ambient_; }
  int dim() const { return basis_.rows(); }
  /// Canonical basis vectors (rows of the reduced echelon form).
  std::vector<Vector> basis() const;
  const Matrix& echelon() const { return basis_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  /// Linear functionals cutting out the subspace: v in S iff a.v = 0 for all a.
  std::vector<Vector> annihilator() const;

  Subspace intersect(const Subspace& other) const;
  Subspace operator+(const Subspace& other) const;
  Subspace image(const Matrix& m) const;
  /// {v : m v in target}.
  static Subspace preimage(const Matrix& m, const Subspace& target);

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  int ambient_ = 0;
  Matrix basis_;
};

}  // namespace vshs
