#pragma once

#include <span>
#include <string>
#include <vector>

#include "vshs/scalar.hpp"

namespace vshs {

/// Truncated power series c_0 + c_1 q + ... + c_{N-1} q^{N-1}, known mod q^N.
///
/// Binary operations return a result of order min(N_a, N_b). The coefficient
/// vector always has exactly `order()` entries.
class Series {
 public:
  Series() = default;
  explicit Series(int order);
  explicit Series(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {}

  static Series constant(const Scalar& c, int order);
  /// The coordinate q itself.
  static Series variable(int order);
  static Series monomial(const Scalar& c, int power, int order);
  /// Finite polynomial, zero-padded or truncated to `order`.
  static Series from_polynomial(std::span<const Scalar> coeffs, int order);

  int order() const { return static_cast<int>(coeffs_.size()); }
  const Scalar& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  Scalar& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }

  /// Index of the first nonzero coefficient, or order() if none is known.
  int valuation() const;
  bool is_zero() const { return valuation() == order(); }
  Series truncated(int order) const;

  Series operator-() const;
  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(const Scalar& c);

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator*(Series a, const Scalar& c) { return a *= c; }
  friend Series operator*(const Scalar& c, Series a) { return a *= c; }
  friend bool operator==(const Series& a, const Series& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

  std::string str() const;

 private:
  std::vector<Scalar> coeffs_;
};

/// Multiplicative inverse; requires a(0) != 0.
Series invert(const Series& a);

/// f(g(q)); requires g(0) = 0. Result order is min(order(f), order(g)).
Series compose(const Series& f, const Series& g);

/// Compositional inverse of f; requires f(0) = 0 and f'(0) != 0.
Series reverse(const Series& f);

/// exp(a) with a(0) = 0.
Series exp(const Series& a);

/// log(a) with a(0) = 1.
Series log(const Series& a);

/// theta = q d/dq.
Series theta(const Series& a);

/// The theta-antiderivative without constant term; requires a(0) = 0.
Series theta_inverse(const Series& a);

/// f(c q).
Series scale_variable(const Series& f, const Scalar& c);

}  // namespace vshs
