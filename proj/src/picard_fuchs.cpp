#include "vshs/picard_fuchs.hpp"

#include <cctype>
#include <map>

#include "vshs/error.hpp"

namespace vshs {

namespace {

// ---------------------------------------------------------------------------
// Text form: elements of the Weyl algebra in normal order q^a theta^b.

using Weyl = std::map<std::pair<int, int>, Scalar>;

Scalar binomial(int n, int k) {
  Scalar b(1);
  for (int i = 0; i < k; ++i) b = b * Scalar(n - i) / Scalar(i + 1);
  return b;
}

void add_term(Weyl& w, int a, int b, const Scalar& c) {
  if (c.is_zero()) return;
  Scalar& slot = w[{a, b}];
  slot += c;
  if (slot.is_zero()) w.erase({a, b});
}

// theta^b q^c = q^c (theta + c)^b
Weyl multiply(const Weyl& x, const Weyl& y) {
  Weyl out;
  for (const auto& [xk, xc] : x) {
    for (const auto& [yk, yc] : y) {
      const auto [a, b] = xk;
      const auto [c, d] = yk;
      Scalar cpow(1);
      for (int t = 0; t <= b; ++t) {
        add_term(out, a + c, (b - t) + d, xc * yc * binomial(b, t) * cpow);
        cpow *= Scalar(c);
      }
    }
  }
  return out;
}

Weyl add(Weyl x, const Weyl& y, const Scalar& sign) {
  for (const auto& [k, c] : y) add_term(x, k.first, k.second, sign * c);
  return x;
}

class TextParser {
 public:
  explicit TextParser(std::string_view s) : s_(s) {}

  Weyl parse() {
    Weyl w = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "operator text at offset " + std::to_string(i_) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool starts_factor() {
    skip();
    if (i_ >= s_.size()) return false;
    const char c = s_[i_];
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '(' ||
           static_cast<unsigned char>(c) >= 0x80;
  }

  Weyl expr() {
    Scalar sign(1);
    if (peek('-')) {
      ++i_;
      sign = Scalar(-1);
    } else if (peek('+')) {
      ++i_;
    }
    Weyl acc = add(Weyl{}, term(), sign);
    while (true) {
      if (peek('+')) {
        ++i_;
        acc = add(acc, term(), Scalar(1));
      } else if (peek('-')) {
        ++i_;
        acc = add(acc, term(), Scalar(-1));
      } else {
        return acc;
      }
    }
  }

  Weyl term() {
    Weyl acc = factor();
    while (true) {
      if (peek('*')) {
        ++i_;
        acc = multiply(acc, factor());
      } else if (peek('/')) {
        ++i_;
        skip();
        const long d = integer();
        if (d == 0) fail("division by zero");
        for (auto& [k, c] : acc) c /= Scalar(d);
      } else if (starts_factor()) {
        acc = multiply(acc, factor());
      } else {
        return acc;
      }
    }
  }

  Weyl factor() {
    Weyl base = atom();
    if (peek('^')) {
      ++i_;
      skip();
      const long e = integer();
      Weyl out{{{0, 0}, Scalar(1)}};
      for (long k = 0; k < e; ++k) out = multiply(out, base);
      return out;
    }
    return base;
  }

  long integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    return std::stol(std::string(s_.substr(start, i_ - start)));
  }

  Weyl atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      Weyl inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++i_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return Weyl{{{0, 0}, Scalar::parse(s_.substr(start, i_ - start))}};
    }
    if (s_.substr(i_, 5) == "theta") {
      i_ += 5;
      return Weyl{{{0, 1}, Scalar(1)}};
    }
    if (s_.substr(i_, 2) == "θ") {
      i_ += 2;
      return Weyl{{{0, 1}, Scalar(1)}};
    }
    if (c == 'q') {
      ++i_;
      return Weyl{{{1, 0}, Scalar(1)}};
    }
    fail("unknown token");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Truncated series in the exponent parameter epsilon.

using Eps = std::vector<Scalar>;

Eps eps_mul(const Eps& a, const Eps& b) {
  Eps out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Eps eps_inverse(const Eps& a) {
  Eps out(a.size());
  const Scalar inv0 = a[0].inverse();
  out[0] = inv0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    Scalar acc;
    for (std::size_t j = 1; j <= k; ++j) acc += a[j] * out[k - j];
    out[k] = -(acc * inv0);
  }
  return out;
}

// p(x + eps) for a polynomial p with coefficients low-first.
Eps eps_eval(const std::vector<Scalar>& p, long x, std::size_t depth) {
  Eps base(depth);
  base[0] = Scalar(x);
  if (depth > 1) base[1] = Scalar(1);
  Eps acc(depth);
  for (std::size_t j = p.size(); j-- > 0;) {
    acc = eps_mul(acc, base);
    acc[0] += p[j];
  }
  return acc;
}

}  // namespace

Series PFOperator::coefficient(int j, int order) const {
  const auto& c = coeffs.at(static_cast<std::size_t>(j));
  return Series::from_polynomial(c, order);
}

bool operator==(const PFOperator& a, const PFOperator& b) {
  return a.order_theta == b.order_theta && a.coeffs == b.coeffs;
}

void check_maximally_unipotent(const PFOperator& op) {
  const int r = op.order_theta;
  if (r < 1 || static_cast<int>(op.coeffs.size()) != r + 1) {
    throw Error(ErrorCode::NotMaximallyUnipotent, "operator must have positive order in theta");
  }
  for (int j = 0; j <= r; ++j) {
    const auto& c = op.coeffs[static_cast<std::size_t>(j)];
    const bool zero0 = c.empty() || c[0].is_zero();
    if (j < r && !zero0) {
      throw Error(ErrorCode::NotMaximallyUnipotent,
                  "indicial polynomial has a theta^" + std::to_string(j) + " term, so not all exponents are 0");
    }
    if (j == r && zero0) {
      throw Error(ErrorCode::NotMaximallyUnipotent, "leading coefficient vanishes at q = 0");
    }
  }
}

PFOperator make_operator(std::vector<std::vector<Scalar>> coeffs) {
  for (auto& c : coeffs) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  while (!coeffs.empty() && coeffs.back().empty()) coeffs.pop_back();
  PFOperator op;
  op.order_theta = static_cast<int>(coeffs.size()) - 1;
  op.coeffs = std::move(coeffs);
  check_maximally_unipotent(op);
  return op;
}

PFOperator parse_pf_text(std::string_view text) {
  const Weyl w = TextParser(text).parse();
  int r = 0;
  for (const auto& [k, c] : w) r = std::max(r, k.second);
  std::vector<std::vector<Scalar>> coeffs(static_cast<std::size_t>(r + 1));
  for (const auto& [k, c] : w) {
    auto& poly = coeffs[static_cast<std::size_t>(k.second)];
    if (static_cast<int>(poly.size()) <= k.first) poly.resize(static_cast<std::size_t>(k.first + 1));
    poly[static_cast<std::size_t>(k.first)] = c;
  }
  return make_operator(std::move(coeffs));
}

std::vector<Series> FrobeniusBasis::solution(int j) const {
  std::vector<Series> g;
  Scalar fact(1);
  for (int i = 0; i <= j; ++i) {
    if (i > 0) fact *= Scalar(i);
    g.push_back(f.at(static_cast<std::size_t>(j - i)) * fact.inverse());
  }
  return g;
}

FrobeniusBasis frobenius_solve(const PFOperator& op, int depth, int order) {
  check_maximally_unipotent(op);
  if (depth < 1 || depth > op.order_theta) {
    throw Error(ErrorCode::InvalidStructure, "depth must lie between 1 and the order of the operator");
  }
  const int r = op.order_theta;
  const auto d = static_cast<std::size_t>(depth);
  int max_m = 0;
  for (const auto& c : op.coeffs) max_m = std::max(max_m, static_cast<int>(c.size()) - 1);
  // P_m(x) = sum_j [q^m] c_j x^j
  std::vector<std::vector<Scalar>> p(static_cast<std::size_t>(max_m + 1), std::vector<Scalar>(static_cast<std::size_t>(r + 1)));
  for (int j = 0; j <= r; ++j) {
    const auto& c = op.coeffs[static_cast<std::size_t>(j)];
    for (int m = 0; m < static_cast<int>(c.size()); ++m) p[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(m)];
  }
  std::vector<Eps> a;
  Eps a0(d);
  a0[0] = Scalar(1);
  a.push_back(a0);
  for (int k = 1; k < order; ++k) {
    Eps rhs(d);
    for (int m = 1; m <= std::min(k, max_m); ++m) {
      const Eps term = eps_mul(eps_eval(p[static_cast<std::size_t>(m)], k - m, d), a[static_cast<std::size_t>(k - m)]);
      for (std::size_t t = 0; t < d; ++t) rhs[t] -= term[t];
    }
    a.push_back(eps_mul(eps_inverse(eps_eval(p[0], k, d)), rhs));
  }
  FrobeniusBasis out;
  for (std::size_t j = 0; j < d; ++j) {
    Series s(order);
    for (int k = 0; k < order; ++k) s[k] = a[static_cast<std::size_t>(k)][j];
    out.f.push_back(std::move(s));
  }
  return out;
}

std::vector<Series> apply_operator(const PFOperator& op, const std::vector<Series>& log_coeffs) {
  if (log_coeffs.empty()) return {};
  const int order = log_coeffs.front().order();
  // theta(sum (log q)^i g_i) = sum (log q)^i (theta g_i + (i+1) g_{i+1})
  auto theta_log = [](const std::vector<Series>& g) {
    std::vector<Series> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Series t = theta(g[i]);
      if (i + 1 < g.size()) t += g[i + 1] * Scalar(static_cast<long>(i + 1));
      out.push_back(std::move(t));
    }
    return out;
  };
  std::vector<Series> result(log_coeffs.size(), Series(order));
  std::vector<Series> power = log_coeffs;
  for (int j = 0; j <= op.order_theta; ++j) {
    const Series c = op.coefficient(j, order);
    for (std::size_t i = 0; i < result.size(); ++i) result[i] += c * power[i];
    power = theta_log(power);
  }
  return result;
}

Series mirror_map_frobenius(const FrobeniusBasis& basis) {
  if (basis.depth() < 2) throw Error(ErrorCode::InvalidStructure, "mirror map needs a logarithmic solution");
  const Series& f0 = basis.f[0];
  const Series ratio = basis.f[1] * invert(f0);
  return Series::variable(f0.order()) * exp(ratio);
}

GeometricVHS companion_vhs(const PFOperator& op, int order) {
  check_maximally_unipotent(op);
  const int r = op.order_theta;
  const int n = r - 1;
  const Series lead_inv = invert(op.coefficient(r, order));
  GeometricVHS out;
  out.dimension_parity = n % 2;
  for (int j = 0; j < r; ++j) out.levels.push_back(n - 2 * j);
  out.connection = SeriesMatrix(r, r, order);
  for (int j = 0; j + 1 < r; ++j) out.connection.set_coeff(j + 1, j, 0, Scalar(1));
  for (int i = 0; i < r; ++i) out.connection.set(i, r - 1, -(op.coefficient(i, order) * lead_inv));
  return out;
}

BModelResult bmodel_pipeline(const PFOperator& op, const Scalar& volume, int order, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidStructure, "sign must be +1 or -1");
  BModelResult out;
  out.report = to_normal_form(companion_vhs(op, order), volume);
  out.frobenius_mirror = mirror_map_frobenius(frobenius_solve(op, 2, order));
  if (out.frobenius_mirror != out.report.mirror_coordinate) {
    throw Error(ErrorCode::MirrorMapMismatch, "Frobenius and canonical-coordinate mirror maps disagree");
  }
  DnObject dn = out.report.dn;
  if (sign == -1) dn = rescale_coordinate(dn, Scalar(-1));
  const bool chain_ok = std::all_of(dn.graded_dims.begin(), dn.graded_dims.end(), [](const auto& e) { return e.second == 1; });
  out.chain = chain_ok ? chain_basis(dn) : dn;
  if (op.order_theta == 4) {
    const Series g = out.chain.a_series(2, 1);
    const Series y = yukawa(out.chain);
    if (y != g * volume) {
      throw Error(ErrorCode::MirrorMapMismatch, "Yukawa coupling and volume * g(Q) disagree");
    }
    out.g = g;
    out.yukawa = y;
    out.instantons = instantons_from_g(g, volume);
  }
  return out;
}

}  // namespace vshs
