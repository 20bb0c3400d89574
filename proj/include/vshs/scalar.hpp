#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace vshs {

/// Exact Gaussian rational a + b*i with a, b in Q.
///
/// Both parts are kept canonical (lowest terms, positive denominator) by
/// GMP. Values are immutable from the outside; every operation returns a
/// fresh value.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class re, mpq_class im = 0);

  static Scalar rational(long num, long den);
  static Scalar i() { return Scalar(0, 1); }

  /// Accepts "a", "a/b", "a/b+c/d*i", "c/d*i", "i", "-i" and friends.
  static Scalar parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_integer() const { return is_real() && re_.get_den() == 1; }

  Scalar conj() const { return Scalar(re_, -im_); }
  Scalar inverse() const;

  /// Canonical text form: "a/b" for rationals (plain "a" when integral),
  /// otherwise "re+im*i" with the real part omitted when it is zero.
  std::string str() const;

  /// k-digit decimal approximation, for display only.
  std::string decimal(int digits) const;

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// i^k for any integer k.
Scalar i_pow(long k);

/// (-1)^k for any integer k.
inline Scalar sign_pow(long k) { return (k % 2 == 0) ? Scalar(1) : Scalar(-1); }

Scalar pow(const Scalar& base, unsigned exponent);

/// Exact square root in Q(i) when one exists. The root returned has positive
/// real part, or zero real part and positive imaginary part; its negative is
/// the other root.
std::optional<Scalar> exact_sqrt(const Scalar& value);

}  // namespace vshs
