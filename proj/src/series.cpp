#include "vshs/series.hpp"

#include <algorithm>

#include "vshs/error.hpp"

namespace vshs {

Series::Series(int order) : coeffs_(static_cast<std::size_t>(std::max(order, 0))) {}

Series Series::constant(const Scalar& c, int order) {
  Series s(order);
  if (order > 0) s[0] = c;
  return s;
}

Series Series::variable(int order) { return monomial(Scalar(1), 1, order); }

Series Series::monomial(const Scalar& c, int power, int order) {
  Series s(order);
  if (power >= 0 && power < order) s[power] = c;
  return s;
}

Series Series::from_polynomial(std::span<const Scalar> coeffs, int order) {
  Series s(order);
  const int n = std::min(order, static_cast<int>(coeffs.size()));
  for (int k = 0; k < n; ++k) s[k] = coeffs[static_cast<std::size_t>(k)];
  return s;
}

int Series::valuation() const {
  for (int k = 0; k < order(); ++k) {
    if (!(*this)[k].is_zero()) return k;
  }
  return order();
}

Series Series::truncated(int order) const {
  Series s(std::min(order, this->order()));
  for (int k = 0; k < s.order(); ++k) s[k] = (*this)[k];
  return s;
}

Series Series::operator-() const {
  Series s(*this);
  for (auto& c : s.coeffs_) c = -c;
  return s;
}

Series& Series::operator+=(const Series& o) {
  coeffs_.resize(static_cast<std::size_t>(std::min(order(), o.order())));
  for (int k = 0; k < order(); ++k) (*this)[k] += o[k];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  coeffs_.resize(static_cast<std::size_t>(std::min(order(), o.order())));
  for (int k = 0; k < order(); ++k) (*this)[k] -= o[k];
  return *this;
}

Series& Series::operator*=(const Scalar& c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

Series operator*(const Series& a, const Series& b) {
  const int n = std::min(a.order(), b.order());
  Series out(n);
  const int va = a.valuation();
  const int vb = b.valuation();
  for (int i = va; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = vb; i + j < n; ++j) {
      if (b[j].is_zero()) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

std::string Series::str() const {
  std::string out;
  for (int k = 0; k < order(); ++k) {
    const Scalar& c = (*this)[k];
    if (c.is_zero()) continue;
    std::string term = c.str();
    if (!c.is_real()) term = "(" + term + ")";
    if (k > 0) {
      if (c.is_one()) {
        term = "";
      } else if (c == Scalar(-1)) {
        term = "-";
      } else {
        term += "*";
      }
      term += k == 1 ? "q" : "q^" + std::to_string(k);
    }
    if (!out.empty()) out += term.front() == '-' ? " - " + term.substr(1) : " + " + term;
    else out = term;
  }
  if (out.empty()) out = "0";
  return out + " + O(q^" + std::to_string(order()) + ")";
}

Series invert(const Series& a) {
  const int n = a.order();
  if (n == 0) return a;
  if (a[0].is_zero()) throw Error(ErrorCode::ZeroConstantTerm, "series is not a unit");
  Series b(n);
  const Scalar inv0 = a[0].inverse();
  b[0] = inv0;
  for (int k = 1; k < n; ++k) {
    Scalar acc;
    for (int j = 1; j <= k; ++j) {
      if (!a[j].is_zero()) acc += a[j] * b[k - j];
    }
    b[k] = -acc * inv0;
  }
  return b;
}

Series compose(const Series& f, const Series& g) {
  const int n = std::min(f.order(), g.order());
  if (n == 0) return Series(0);
  if (!g[0].is_zero()) {
    throw Error(ErrorCode::NonzeroInnerConstant, "inner series must vanish at q = 0");
  }
  // Horner evaluation; terms f_k with k >= n cannot contribute mod q^n.
  Series acc(n);
  for (int k = n - 1; k >= 0; --k) {
    acc = acc * g;
    acc[0] += f[k];
  }
  return acc;
}

Series reverse(const Series& f) {
  const int n = f.order();
  if (n < 2 || !f[0].is_zero() || f[1].is_zero()) {
    throw Error(ErrorCode::NotReversible, "need f(0) = 0 and f'(0) != 0");
  }
  // Lagrange inversion: [q^k] g = (1/k) [w^{k-1}] (w / f(w))^k.
  Series shifted(n - 1);
  for (int k = 0; k + 1 < n; ++k) shifted[k] = f[k + 1];
  const Series phi = invert(shifted);
  Series g(n);
  Series power = Series::constant(Scalar(1), n - 1);
  for (int k = 1; k < n; ++k) {
    power = power * phi;
    g[k] = power[k - 1] / Scalar(k);
  }
  return g;
}

Series exp(const Series& a) {
  const int n = a.order();
  if (n == 0) return a;
  if (!a[0].is_zero()) throw Error(ErrorCode::BadConstantTerm, "exp needs a(0) = 0");
  Series b(n);
  b[0] = Scalar(1);
  for (int k = 1; k < n; ++k) {
    Scalar acc;
    for (int j = 1; j <= k; ++j) {
      if (!a[j].is_zero()) acc += Scalar(j) * a[j] * b[k - j];
    }
    b[k] = acc / Scalar(k);
  }
  return b;
}

Series log(const Series& a) {
  const int n = a.order();
  if (n == 0) return a;
  if (!a[0].is_one()) throw Error(ErrorCode::BadConstantTerm, "log needs a(0) = 1");
  Series b(n);
  for (int k = 1; k < n; ++k) {
    Scalar acc = Scalar(k) * a[k];
    for (int j = 1; j < k; ++j) {
      if (!a[k - j].is_zero()) acc -= Scalar(j) * b[j] * a[k - j];
    }
    b[k] = acc / Scalar(k);
  }
  return b;
}

Series theta(const Series& a) {
  Series b(a);
  for (int k = 0; k < b.order(); ++k) b[k] *= Scalar(k);
  return b;
}

Series theta_inverse(const Series& a) {
  if (a.order() > 0 && !a[0].is_zero()) {
    throw Error(ErrorCode::NonzeroConstant, "theta_inverse needs a(0) = 0");
  }
  Series b(a);
  for (int k = 1; k < b.order(); ++k) b[k] /= Scalar(k);
  return b;
}

Series scale_variable(const Series& f, const Scalar& c) {
  Series out(f);
  Scalar power(1);
  for (int k = 0; k < out.order(); ++k) {
    out[k] *= power;
    power *= c;
  }
  return out;
}

}  // namespace vshs
