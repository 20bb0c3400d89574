#pragma once
// Random generators and independent oracles shared by the unit and acceptance suites.

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vshs/amodel.hpp"
#include "vshs/matrix.hpp"
#include "vshs/nilpotent.hpp"
#include "vshs/picard_fuchs.hpp"
#include "vshs/series.hpp"
#include "vshs/series_matrix.hpp"
#include "vshs/vshs.hpp"

namespace vshs::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin() { return uniform(0, 1) == 1; }
  /// p/q with |p| <= num, 1 <= q <= den.
  Scalar rational(int num = 5, int den = 4) { return Scalar::rational(uniform(-num, num), uniform(1, den)); }
  Scalar nonzero_rational(int num = 5, int den = 4) {
    for (;;) {
      Scalar s = rational(num, den);
      if (!s.is_zero()) return s;
    }
  }
  Scalar gaussian(int num = 3, int den = 3) { return Scalar(rational(num, den).re(), rational(num, den).re()); }
  Series series(int order, int num = 5, int den = 4) {
    Series s(order);
    for (int k = 0; k < order; ++k) s[k] = rational(num, den);
    return s;
  }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Random normal-form objects
// ---------------------------------------------------------------------------

/// Graded dims ascending in degree, symmetric, nondecreasing towards the middle.
inline std::map<int, int> random_graded_dims(Rng& rng, int n, int max_dim = 2) {
  std::map<int, int> dims;
  int cur = 1;
  for (int k = -n; k <= 0; k += 2) {
    if (k != -n) cur = std::min(max_dim, cur + rng.uniform(0, 1));
    dims[k] = cur;
    dims[-k] = cur;
  }
  return dims;
}

inline std::vector<int> degree_list(const std::map<int, int>& dims) {
  std::vector<int> out;
  for (const auto& [k, d] : dims) out.insert(out.end(), static_cast<std::size_t>(d), k);
  return out;
}

/// Untwisted pairing G = i^{-deg j} pairing0: symmetric, pairs degree k with -k, nondegenerate.
inline Matrix random_untwisted_pairing(Rng& rng, const std::vector<int>& deg) {
  const int r = static_cast<int>(deg.size());
  for (;;) {
    Matrix g(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = i; j < r; ++j) {
        if (deg[static_cast<std::size_t>(i)] + deg[static_cast<std::size_t>(j)] != 0) continue;
        g(i, j) = rng.rational(4, 3);
        g(j, i) = g(i, j);
      }
    }
    if (!determinant(g).is_zero()) return g;
  }
}

/// Random D_n object with every q-coefficient of A self-adjoint for the
/// untwisted pairing and the top component of A constant.
inline DnObject random_dn(Rng& rng, int n, int order, int max_dim = 2) {
  const auto dims = random_graded_dims(rng, n, max_dim);
  const auto deg = degree_list(dims);
  const int r = static_cast<int>(deg.size());
  const int vol = 0;
  for (;;) {
    const Matrix g = random_untwisted_pairing(rng, deg);
    const Matrix g_inv = inverse(g);
    std::vector<Matrix> a_coeffs;
    for (int k = 0; k < order; ++k) {
      // S = G A is symmetric and supported on deg i + deg j = -2.
      Matrix s(r, r);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j <= i; ++j) {
          if (deg[static_cast<std::size_t>(i)] + deg[static_cast<std::size_t>(j)] != -2) continue;
          if (k > 0 && (i == vol || j == vol)) continue;
          if (k > 0 && rng.uniform(0, 2) == 0) continue;
          const Scalar v = rng.rational(4, 3);
          s(i, j) = v;
          s(j, i) = v;
        }
      }
      a_coeffs.push_back(g_inv * s);
    }
    DnObject dn;
    dn.n = n;
    dn.graded_dims = dims;
    dn.a_series = SeriesMatrix::from_coefficients(a_coeffs, r, r, order);
    dn.pairing0 = Matrix(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) dn.pairing0(i, j) = i_pow(deg[static_cast<std::size_t>(j)]) * g(i, j);
    }
    if (check_dn(dn).ok()) return dn;
  }
}

/// Connection matrix B with B(0) compatible with `m0` and arbitrary
/// degree-raising higher coefficients, so that the covariant extension of m0
/// genuinely depends on q.
inline SeriesMatrix random_compatible_connection(Rng& rng, const DnObject& dn, int order) {
  const auto deg = dn.degrees();
  const int r = dn.dim();
  SeriesMatrix b(r, r, order);
  const Matrix a0 = dn.a_series.coefficient(0);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      b.set_coeff(i, j, 0, -a0(i, j));
      if (deg[static_cast<std::size_t>(i)] != deg[static_cast<std::size_t>(j)] + 2) continue;
      for (int k = 1; k < order; ++k) {
        if (rng.coin()) b.set_coeff(i, j, k, rng.rational(3, 2));
      }
    }
  }
  return b;
}

/// Filtration-preserving gauge I + q X + q^2 Y: e'_j only picks up e_i with level_i >= level_j.
inline SeriesMatrix random_flag_gauge(Rng& rng, const std::vector<int>& levels, int order) {
  const int r = static_cast<int>(levels.size());
  SeriesMatrix g = SeriesMatrix::identity(r, order);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (levels[static_cast<std::size_t>(i)] < levels[static_cast<std::size_t>(j)]) continue;
      if ((levels[static_cast<std::size_t>(i)] - levels[static_cast<std::size_t>(j)]) % 2 != 0) continue;
      for (int k = 1; k < std::min(order, 3); ++k) {
        if (rng.coin()) g.set_coeff(i, j, k, rng.rational(3, 2));
      }
    }
  }
  return g;
}

/// Coordinate change phi(q) = q + O(q^2).
inline Series random_coordinate_change(Rng& rng, int order) {
  Series phi(order);
  if (order > 1) phi[1] = 1;
  for (int k = 2; k < order; ++k) phi[k] = rng.rational(3, 2);
  return phi;
}

// ---------------------------------------------------------------------------
// Random Rees modules
// ---------------------------------------------------------------------------

/// Homogeneous connection (u-power (d_j - d_i)/2 >= -1) and a pairing with
/// the (-1)^{n + d_j + m} symmetry; covariant constancy is not imposed.
inline ReesModule random_rees(Rng& rng, int rank, int order) {
  ReesModule m;
  m.dimension_parity = rng.uniform(0, 1);
  const int par = rng.uniform(0, 1);
  for (int i = 0; i < rank; ++i) m.degrees.push_back(2 * rng.uniform(-2, 2) + (rng.uniform(0, 3) == 0 ? 1 - par : par));
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) {
      const int diff = m.degrees[static_cast<std::size_t>(j)] - m.degrees[static_cast<std::size_t>(i)];
      if (diff % 2 != 0 || diff < -2 || rng.uniform(0, 2) == 0) continue;
      auto [it, fresh] = m.connection.try_emplace(diff / 2, rank, rank, order);
      Series s = rng.series(order);
      for (int k = 0; k < order; ++k) {
        if (rng.coin()) s[k] = Scalar(rng.rational().re(), rng.rational().re());
      }
      it->second.set(i, j, s);
    }
  }
  for (int i = 0; i < rank; ++i) {
    for (int j = i; j < rank; ++j) {
      const int sum = m.degrees[static_cast<std::size_t>(i)] + m.degrees[static_cast<std::size_t>(j)];
      if (sum % 2 != 0 || sum < 0 || rng.uniform(0, 3) == 0) continue;
      const int mu = sum / 2;
      const Scalar sgn = sign_pow(m.dimension_parity + m.degrees[static_cast<std::size_t>(j)] + mu);
      if (i == j && sgn != Scalar(1)) continue;
      auto [it, fresh] = m.pairing.try_emplace(mu, rank, rank, order);
      const Series s = rng.series(order);
      it->second.set(i, j, s);
      it->second.set(j, i, s * sgn);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Exhaustive weight filtration search over F_3
// ---------------------------------------------------------------------------

/// Vectors of F_3^d are encoded base 3; a subspace is the set of its elements.
class BruteForceF3 {
 public:
  static constexpr int kP = 3;
  using Set = std::bitset<243>;
  using IntMatrix = std::vector<std::vector<int>>;

  explicit BruteForceF3(int dim) : dim_(dim), size_(1) {
    for (int i = 0; i < dim; ++i) size_ *= kP;
    add_.assign(static_cast<std::size_t>(size_ * size_), 0);
    for (int a = 0; a < size_; ++a) {
      for (int b = 0; b < size_; ++b) {
        auto x = digits(a);
        const auto y = digits(b);
        for (int i = 0; i < dim_; ++i) x[static_cast<std::size_t>(i)] += y[static_cast<std::size_t>(i)];
        add_[static_cast<std::size_t>(a * size_ + b)] = encode(x);
      }
    }
    enumerate();
  }

  int dim() const { return dim_; }
  int size() const { return size_; }
  std::size_t subspace_count() const { return subspaces_.size(); }

  std::vector<int> digits(int v) const {
    std::vector<int> x(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
      x[static_cast<std::size_t>(i)] = v % kP;
      v /= kP;
    }
    return x;
  }
  int encode(const std::vector<int>& x) const {
    int v = 0;
    for (int i = dim_ - 1; i >= 0; --i) v = v * kP + ((x[static_cast<std::size_t>(i)] % kP) + kP) % kP;
    return v;
  }
  int add(int a, int b) const { return add_[static_cast<std::size_t>(a * size_ + b)]; }

  /// Action of an integer matrix on every vector.
  std::vector<int> action(const IntMatrix& m) const {
    std::vector<int> out(static_cast<std::size_t>(size_));
    for (int a = 0; a < size_; ++a) {
      const auto x = digits(a);
      std::vector<int> y(static_cast<std::size_t>(dim_));
      for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
          y[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        }
      }
      out[static_cast<std::size_t>(a)] = encode(y);
    }
    return out;
  }

  Set span(const std::vector<int>& gens) const {
    Set s;
    s.set(0);
    for (int g : gens) s = extend(s, g);
    return s;
  }
  Set image(const std::vector<int>& map, const Set& s) const {
    Set out;
    for (int v = 0; v < size_; ++v) {
      if (s.test(static_cast<std::size_t>(v))) out.set(static_cast<std::size_t>(map[static_cast<std::size_t>(v)]));
    }
    return out;
  }
  Set sum(const Set& a, const Set& b) const {
    Set out;
    for (int x = 0; x < size_; ++x) {
      if (!a.test(static_cast<std::size_t>(x))) continue;
      for (int y = 0; y < size_; ++y) {
        if (b.test(static_cast<std::size_t>(y))) out.set(static_cast<std::size_t>(add(x, y)));
      }
    }
    return out;
  }
  static bool subset(const Set& a, const Set& b) { return (a & ~b).none(); }

  /// Every filtration W_{-n} ... W_{n-1} (W_{-n-1} = 0, W_n = V) meeting both axioms.
  std::vector<std::map<int, Set>> all_weight_filtrations(const IntMatrix& nmat, int n) const {
    const std::vector<int> nmap = action(nmat);
    std::vector<Set> stable;
    std::vector<Set> stable_image;
    for (const Set& s : subspaces_) {
      Set img = image(nmap, s);
      if (subset(img, s)) {
        stable.push_back(s);
        stable_image.push_back(img);
      }
    }
    Set full;
    for (int v = 0; v < size_; ++v) full.set(static_cast<std::size_t>(v));
    Set zero;
    zero.set(0);
    std::vector<std::map<int, Set>> found;
    std::map<int, Set> w;
    w[-n - 2] = zero;
    w[-n - 1] = zero;
    w[n] = full;
    w[n + 1] = full;
    std::function<void(int)> rec = [&](int k) {
      if (k == n) {
        if (subset(image(nmap, full), w[n - 2]) && lefschetz_ok(nmat, n, w)) found.push_back(w);
        return;
      }
      for (std::size_t t = 0; t < stable.size(); ++t) {
        if (!subset(w[k - 1], stable[t])) continue;
        if (!subset(stable_image[t], w[k - 2])) continue;
        w[k] = stable[t];
        rec(k + 1);
      }
      w.erase(k);
    };
    rec(-n);
    return found;
  }

 private:
  Set extend(const Set& s, int v) const {
    Set t = s;
    const int v2 = add(v, v);
    for (int a = 0; a < size_; ++a) {
      if (!s.test(static_cast<std::size_t>(a))) continue;
      t.set(static_cast<std::size_t>(add(a, v)));
      t.set(static_cast<std::size_t>(add(a, v2)));
    }
    return t;
  }
  bool lefschetz_ok(const IntMatrix& nmat, int n, std::map<int, Set>& w) const {
    IntMatrix nk = identity();
    for (int k = 1; k <= n; ++k) {
      // N^k : W_k / W_{k-1} -> W_{-k} / W_{-k-1} is bijective.
      nk = multiply(nmat, nk);
      const std::vector<int> map = action(nk);
      const Set& wk = w[k];
      const Set& wk1 = w[k - 1];
      const Set& wmk = w[-k];
      const Set& wmk1 = w[-k - 1];
      if (sum(image(map, wk), wmk1) != wmk) return false;
      for (int v = 0; v < size_; ++v) {
        if (wk.test(static_cast<std::size_t>(v)) && wmk1.test(static_cast<std::size_t>(map[static_cast<std::size_t>(v)])) &&
            !wk1.test(static_cast<std::size_t>(v))) {
          return false;
        }
      }
    }
    return true;
  }
  IntMatrix identity() const {
    IntMatrix m(static_cast<std::size_t>(dim_), std::vector<int>(static_cast<std::size_t>(dim_)));
    for (int i = 0; i < dim_; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return m;
  }
  IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) const {
    IntMatrix m(static_cast<std::size_t>(dim_), std::vector<int>(static_cast<std::size_t>(dim_)));
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) {
        int acc = 0;
        for (int k = 0; k < dim_; ++k) acc += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc % kP;
      }
    }
    return m;
  }
  // Breadth-first closure from the zero subspace: every subspace is reached by adding vectors.
  void enumerate() {
    std::set<std::string> seen;
    std::vector<Set> frontier;
    Set zero;
    zero.set(0);
    frontier.push_back(zero);
    seen.insert(zero.to_string());
    subspaces_.push_back(zero);
    while (!frontier.empty()) {
      std::vector<Set> next;
      for (const Set& s : frontier) {
        for (int v = 1; v < size_; ++v) {
          if (s.test(static_cast<std::size_t>(v))) continue;
          Set t = extend(s, v);
          if (seen.insert(t.to_string()).second) {
            subspaces_.push_back(t);
            next.push_back(t);
          }
        }
      }
      frontier = std::move(next);
    }
  }

  int dim_;
  int size_;
  std::vector<int> add_;
  std::vector<Set> subspaces_;
};

/// Nilpotent Jordan matrix (N e_j = e_{j+1} inside each block) for a partition.
inline Matrix jordan_matrix(const std::vector<int>& partition) {
  const int d = std::accumulate(partition.begin(), partition.end(), 0);
  Matrix m(d, d);
  int base = 0;
  for (int b : partition) {
    for (int j = 0; j + 1 < b; ++j) m(base + j + 1, base + j) = 1;
    base += b;
  }
  return m;
}

inline void partitions_rec(int rest, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (rest == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(rest, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(rest - p, p, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> partitions(int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(d, d, cur, out);
  return out;
}

/// Integer matrix of a rational one, or throws if some entry has a denominator.
inline std::vector<std::vector<int>> to_f3(const Matrix& m) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(m.rows()), std::vector<int>(static_cast<std::size_t>(m.cols())));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const mpq_class& v = m(i, j).re();
      mpz_class num = v.get_num() % 3;
      mpz_class den = v.get_den() % 3;
      if (den == 0) throw std::runtime_error("denominator divisible by 3");
      const int n3 = static_cast<int>(((num.get_si() % 3) + 3) % 3);
      const int d3 = static_cast<int>(((den.get_si() % 3) + 3) % 3);
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (n3 * d3) % 3;  // d^{-1} = d mod 3
    }
  }
  return out;
}

/// Reduction mod 3 of a rational subspace; nullopt if its dimension drops.
inline std::optional<BruteForceF3::Set> reduce_subspace(const BruteForceF3& bf, const Subspace& s) {
  std::vector<int> gens;
  for (const Vector& v : s.basis()) {
    mpz_class l = 1;
    for (const Scalar& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.re().get_den_mpz_t());
    std::vector<int> digits;
    for (const Scalar& x : v) {
      mpz_class z = x.re().get_num() * (l / x.re().get_den());
      z %= 3;
      digits.push_back(static_cast<int>(((z.get_si() % 3) + 3) % 3));
    }
    gens.push_back(bf.encode(digits));
  }
  BruteForceF3::Set out = bf.span(gens);
  int expected = 1;
  for (int i = 0; i < s.dim(); ++i) expected *= 3;
  if (static_cast<int>(out.count()) != expected) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Picard-Fuchs examples
// ---------------------------------------------------------------------------

/// theta^4 - mu q (theta + a1)(theta + 1 - a1)(theta + a2)(theta + 1 - a2), written as polynomial coefficients.
inline PFOperator hypergeometric_operator(const Scalar& mu, const Scalar& a1, const Scalar& a2) {
  // product of (theta + c) over c in {a1, 1-a1, a2, 1-a2}
  std::vector<Scalar> poly{Scalar(1)};
  for (const Scalar& c : {a1, Scalar(1) - a1, a2, Scalar(1) - a2}) {
    std::vector<Scalar> next(poly.size() + 1);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k] * c;
      next[k + 1] += poly[k];
    }
    poly = std::move(next);
  }
  std::vector<std::vector<Scalar>> coeffs(5);
  for (int j = 0; j <= 4; ++j) {
    coeffs[static_cast<std::size_t>(j)] = {j == 4 ? Scalar(1) : Scalar(0), -mu * poly[static_cast<std::size_t>(j)]};
  }
  return make_operator(coeffs);
}

/// (5d)! / (d!)^5 computed with GMP factorials.
inline mpz_class quintic_period_coefficient(unsigned d) {
  mpz_class num;
  mpz_class den;
  mpz_fac_ui(num.get_mpz_t(), 5 * d);
  mpz_fac_ui(den.get_mpz_t(), d);
  mpz_class den5;
  mpz_pow_ui(den5.get_mpz_t(), den.get_mpz_t(), 5);
  return num / den5;
}

/// sum_{d | k} n_d d^3 re-expanded; used to cross-check instanton inversion.
inline Scalar lambert_coefficient(const InstantonTable& t, int k) {
  Scalar acc;
  for (int d = 1; d <= k; ++d) {
    if (k % d != 0) continue;
    auto it = t.entries.find(d);
    if (it != t.entries.end()) acc += it->second * Scalar(static_cast<long>(d) * d * d);
  }
  return acc;
}

}  // namespace vshs::testing
