#include "vshs/matrix.hpp"

#include <utility>

#include "vshs/error.hpp"

namespace vshs {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    }
    for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

Matrix Matrix::from_columns(int dim, const std::vector<Vector>& cols) {
  Matrix m(dim, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols(); ++j) {
    const auto& v = cols[static_cast<std::size_t>(j)];
    if (static_cast<int>(v.size()) != dim) throw Error(ErrorCode::DimensionMismatch, "column length");
    for (int i = 0; i < dim; ++i) m(i, j) = v[static_cast<std::size_t>(i)];
  }
  return m;
}

Vector Matrix::column(int j) const {
  Vector v(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) v[static_cast<std::size_t>(i)] = (*this)(i, j);
  return v;
}

Vector Matrix::row(int i) const {
  Vector v(static_cast<std::size_t>(cols_));
  for (int j = 0; j < cols_; ++j) v[static_cast<std::size_t>(j)] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  Matrix b(nr, nc);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix add");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sub");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(const Scalar& c) {
  for (auto& x : data_) x *= c;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  Matrix out(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (!b(k, j).is_zero()) out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols_ != static_cast<int>(v.size())) throw Error(ErrorCode::DimensionMismatch, "matrix-vector");
  Vector out(static_cast<std::size_t>(a.rows_));
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) {
      if (!a(i, j).is_zero()) out[static_cast<std::size_t>(i)] += a(i, j) * v[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

std::string Matrix::str() const {
  std::string out = "[";
  for (int i = 0; i < rows_; ++i) {
    out += i == 0 ? "[" : " [";
    for (int j = 0; j < cols_; ++j) {
      if (j > 0) out += ", ";
      out += (*this)(i, j).str();
    }
    out += "]";
  }
  return out + "]";
}

Matrix matrix_power(const Matrix& m, int k) {
  Matrix out = Matrix::identity(m.rows());
  for (int j = 0; j < k; ++j) out = out * m;
  return out;
}

RowEchelon row_echelon(Matrix m) {
  RowEchelon out;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pivot = -1;
    for (int i = row; i < m.rows(); ++i) {
      if (!m(i, col).is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(pivot, j));
    }
    const Scalar inv = m(row, col).inverse();
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Scalar factor = m(i, col);
      for (int j = col; j < m.cols(); ++j) {
        if (!m(row, j).is_zero()) m(i, j) -= factor * m(row, j);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = m.block(0, 0, row, m.cols());
  return out;
}

int rank(const Matrix& m) { return static_cast<int>(row_echelon(m).pivots.size()); }

Scalar determinant(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  Matrix a = m;
  const int n = a.rows();
  Scalar det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i) {
      if (!a(i, col).is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return Scalar(0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      det = -det;
    }
    det *= a(col, col);
    const Scalar inv = a(col, col).inverse();
    for (int i = col + 1; i < n; ++i) {
      if (a(i, col).is_zero()) continue;
      const Scalar factor = a(i, col) * inv;
      for (int j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  const int n = m.rows();
  Matrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Scalar(1);
  }
  RowEchelon re = row_echelon(aug);
  if (static_cast<int>(re.pivots.size()) < n || re.pivots[static_cast<std::size_t>(n - 1)] != n - 1) {
    throw Error(ErrorCode::Singular, "matrix is not invertible");
  }
  return re.reduced.block(0, n, n, n);
}

std::vector<Vector> nullspace(const Matrix& m) {
  RowEchelon re = row_echelon(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int p : re.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Vector> out;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Vector v(static_cast<std::size_t>(m.cols()));
    v[static_cast<std::size_t>(free)] = Scalar(1);
    for (std::size_t r = 0; r < re.pivots.size(); ++r) {
      v[static_cast<std::size_t>(re.pivots[r])] = -re.reduced(static_cast<int>(r), free);
    }
    out.push_back(std::move(v));
  }
  return out;
}

Subspace Subspace::span(int ambient_dim, const std::vector<Vector>& vectors) {
  Subspace s(ambient_dim);
  if (vectors.empty()) return s;
  Matrix rows(static_cast<int>(vectors.size()), ambient_dim);
  for (int i = 0; i < rows.rows(); ++i) {
    const auto& v = vectors[static_cast<std::size_t>(i)];
    if (static_cast<int>(v.size()) != ambient_dim) throw Error(ErrorCode::DimensionMismatch, "span vector");
    for (int j = 0; j < ambient_dim; ++j) rows(i, j) = v[static_cast<std::size_t>(j)];
  }
  s.basis_ = row_echelon(rows).reduced;
  return s;
}

Subspace Subspace::full(int ambient_dim) {
  Subspace s(ambient_dim);
  s.basis_ = Matrix::identity(ambient_dim);
  return s;
}

Subspace Subspace::coordinate(int ambient_dim, const std::vector<int>& indices) {
  std::vector<Vector> vs;
  for (int idx : indices) {
    Vector v(static_cast<std::size_t>(ambient_dim));
    v[static_cast<std::size_t>(idx)] = Scalar(1);
    vs.push_back(std::move(v));
  }
  return span(ambient_dim, vs);
}

std::vector<Vector> Subspace::basis() const {
  std::vector<Vector> out;
  for (int i = 0; i < basis_.rows(); ++i) out.push_back(basis_.row(i));
  return out;
}

bool Subspace::contains(const Vector& v) const {
  for (const auto& a : annihilator()) {
    Scalar dot;
    for (std::size_t k = 0; k < v.size(); ++k) dot += a[k] * v[k];
    if (!dot.is_zero()) return false;
  }
  return true;
}

bool Subspace::contains(const Subspace& other) const {
  for (const auto& v : other.basis()) {
    if (!contains(v)) return false;
  }
  return true;
}

std::vector<Vector> Subspace::annihilator() const {
  if (dim() == 0) return Subspace::full(ambient_).basis();
  return nullspace(basis_);
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw Error(ErrorCode::DimensionMismatch, "subspace intersection");
  if (dim() == 0 || other.dim() == 0) return Subspace(ambient_);
  // x = sum c_i b_i with ann(other) x = 0.
  const auto ann = other.annihilator();
  if (ann.empty()) return *this;
  Matrix constraint(static_cast<int>(ann.size()), dim());
  for (int r = 0; r < constraint.rows(); ++r) {
    for (int c = 0; c < dim(); ++c) {
      Scalar dot;
      for (int k = 0; k < ambient_; ++k) dot += ann[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] * basis_(c, k);
      constraint(r, c) = dot;
    }
  }
  std::vector<Vector> vs;
  for (const auto& coeffs : nullspace(constraint)) {
    Vector x(static_cast<std::size_t>(ambient_));
    for (int c = 0; c < dim(); ++c) {
      for (int k = 0; k < ambient_; ++k) x[static_cast<std::size_t>(k)] += coeffs[static_cast<std::size_t>(c)] * basis_(c, k);
    }
    vs.push_back(std::move(x));
  }
  return span(ambient_, vs);
}

Subspace Subspace::operator+(const Subspace& other) const {
  auto vs = basis();
  for (auto& v : other.basis()) vs.push_back(std::move(v));
  return span(ambient_, vs);
}

Subspace Subspace::image(const Matrix& m) const {
  std::vector<Vector> vs;
  for (const auto& v : basis()) vs.push_back(m * v);
  return span(m.rows(), vs);
}

Subspace Subspace::preimage(const Matrix& m, const Subspace& target) {
  const auto ann = target.annihilator();
  if (ann.empty()) return full(m.cols());
  Matrix constraint(static_cast<int>(ann.size()), m.cols());
  for (int r = 0; r < constraint.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      Scalar dot;
      for (int k = 0; k < m.rows(); ++k) dot += ann[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] * m(k, c);
      constraint(r, c) = dot;
    }
  }
  return span(m.cols(), nullspace(constraint));
}

}  // namespace vshs
