#include "vshs/series_matrix.hpp"

#include <algorithm>

#include "vshs/error.hpp"

namespace vshs {

namespace {

Series fit(const Series& s, int order) {
  if (s.order() == order) return s;
  Series out(order);
  for (int k = 0; k < std::min(order, s.order()); ++k) out[k] = s[k];
  return out;
}

}  // namespace

SeriesMatrix::SeriesMatrix(int rows, int cols, int order)
    : rows_(rows), cols_(cols), order_(order), entries_(static_cast<std::size_t>(rows * cols), Series(order)) {}

SeriesMatrix SeriesMatrix::identity(int n, int order) {
  SeriesMatrix m(n, n, order);
  for (int i = 0; i < n; ++i) m.set_coeff(i, i, 0, Scalar(1));
  return m;
}

SeriesMatrix SeriesMatrix::constant(const Matrix& c, int order) {
  SeriesMatrix m(c.rows(), c.cols(), order);
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) m.set_coeff(i, j, 0, c(i, j));
  }
  return m;
}

SeriesMatrix SeriesMatrix::from_coefficients(const std::vector<Matrix>& coeffs, int rows, int cols, int order) {
  SeriesMatrix m(rows, cols, order);
  for (int k = 0; k < std::min(order, static_cast<int>(coeffs.size())); ++k) {
    const Matrix& c = coeffs[static_cast<std::size_t>(k)];
    if (c.rows() != rows || c.cols() != cols) throw Error(ErrorCode::DimensionMismatch, "coefficient shape");
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m.set_coeff(i, j, k, c(i, j));
    }
  }
  return m;
}

void SeriesMatrix::set(int i, int j, const Series& s) {
  entries_[static_cast<std::size_t>(i * cols_ + j)] = fit(s, order_);
}

void SeriesMatrix::set_coeff(int i, int j, int k, const Scalar& c) {
  if (k < order_) entries_[static_cast<std::size_t>(i * cols_ + j)][k] = c;
}

Matrix SeriesMatrix::coefficient(int k) const {
  Matrix m(rows_, cols_);
  if (k < 0 || k >= order_) return m;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j)[k];
  }
  return m;
}

bool SeriesMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Series& s) { return s.is_zero(); });
}

SeriesMatrix SeriesMatrix::truncated(int order) const {
  const int n = std::min(order, order_);
  SeriesMatrix m(rows_, cols_, n);
  for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = entries_[k].truncated(n);
  return m;
}

SeriesMatrix SeriesMatrix::transpose() const {
  SeriesMatrix t(cols_, rows_, order_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t.entries_[static_cast<std::size_t>(j * rows_ + i)] = (*this)(i, j);
  }
  return t;
}

SeriesMatrix SeriesMatrix::block(int r0, int c0, int nr, int nc) const {
  SeriesMatrix b(nr, nc, order_);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nc; ++j) b.set(i, j, (*this)(r0 + i, c0 + j));
  }
  return b;
}

SeriesMatrix& SeriesMatrix::operator+=(const SeriesMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "series matrix add");
  order_ = std::min(order_, o.order_);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] = fit(entries_[k] + o.entries_[k], order_);
  return *this;
}

SeriesMatrix& SeriesMatrix::operator-=(const SeriesMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "series matrix sub");
  order_ = std::min(order_, o.order_);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] = fit(entries_[k] - o.entries_[k], order_);
  return *this;
}

SeriesMatrix& SeriesMatrix::operator*=(const Scalar& c) {
  for (auto& e : entries_) e *= c;
  return *this;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "series matrix product");
  const int order = std::min(a.order_, b.order_);
  SeriesMatrix out(a.rows_, b.cols_, order);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const Series& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        const Series& bkj = b(k, j);
        if (bkj.is_zero()) continue;
        auto& slot = out.entries_[static_cast<std::size_t>(i * out.cols_ + j)];
        slot += aik * bkj;
      }
    }
  }
  return out;
}

SeriesMatrix operator*(const Series& s, const SeriesMatrix& m) {
  SeriesMatrix out(m.rows_, m.cols_, std::min(s.order(), m.order_));
  for (std::size_t k = 0; k < m.entries_.size(); ++k) out.entries_[k] = fit(s * m.entries_[k], out.order_);
  return out;
}

std::string SeriesMatrix::str() const {
  std::string out;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if ((*this)(i, j).is_zero()) continue;
      out += "(" + std::to_string(i) + "," + std::to_string(j) + "): " + (*this)(i, j).str() + "\n";
    }
  }
  return out.empty() ? "0\n" : out;
}

SeriesMatrix theta(const SeriesMatrix& m) {
  SeriesMatrix out(m.rows(), m.cols(), m.order());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out.set(i, j, theta(m(i, j)));
  }
  return out;
}

SeriesMatrix compose(const SeriesMatrix& m, const Series& g) {
  const int order = std::min(m.order(), g.order());
  SeriesMatrix out(m.rows(), m.cols(), order);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out.set(i, j, compose(m(i, j), g));
  }
  return out;
}

SeriesMatrix inverse(const SeriesMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square series matrix");
  const int n = m.rows();
  const int order = m.order();
  Matrix inv0;
  try {
    inv0 = inverse(m.coefficient(0));
  } catch (const Error&) {
    throw Error(ErrorCode::Singular, "series matrix is not invertible at q = 0");
  }
  // X_k = -X_0 sum_{j>=1} M_j X_{k-j}
  std::vector<Matrix> mc;
  for (int k = 0; k < order; ++k) mc.push_back(m.coefficient(k));
  std::vector<Matrix> x{inv0};
  for (int k = 1; k < order; ++k) {
    Matrix acc(n, n);
    for (int j = 1; j <= k; ++j) {
      if (!mc[static_cast<std::size_t>(j)].is_zero()) acc += mc[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(k - j)];
    }
    x.push_back(-(inv0 * acc));
  }
  return SeriesMatrix::from_coefficients(x, n, n, order);
}

Series determinant(const SeriesMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square series matrix");
  const int n = m.rows();
  if (n > 16) throw Error(ErrorCode::DimensionMismatch, "series determinant limited to rank 16");
  // Laplace expansion along rows, memoised on the set of used columns.
  const std::size_t full = std::size_t{1} << static_cast<unsigned>(n);
  std::vector<Series> dp(full, Series(m.order()));
  dp[0] = Series::constant(Scalar(1), m.order());
  for (std::size_t mask = 0; mask + 1 < full; ++mask) {
    if (dp[mask].is_zero()) continue;
    const int row = __builtin_popcountll(mask);
    int sign_parity = 0;
    for (int col = n - 1; col >= 0; --col) {
      const std::size_t bit = std::size_t{1} << static_cast<unsigned>(col);
      if ((mask & bit) != 0) {
        ++sign_parity;
        continue;
      }
      if (m(row, col).is_zero()) continue;
      Series term = dp[mask] * m(row, col);
      if (sign_parity % 2 == 1) term = -term;
      dp[mask | bit] += term;
    }
  }
  return dp[full - 1];
}

}  // namespace vshs
