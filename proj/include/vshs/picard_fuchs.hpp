#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vshs/amodel.hpp"
#include "vshs/vshs.hpp"

namespace vshs {

/// L = sum_j c_j(q) theta^j with polynomial coefficients written to the left.
struct PFOperator {
  int order_theta = 0;
  std::vector<std::vector<Scalar>> coeffs;  // coeffs[j][m] = [q^m] c_j

  /// c_j as a series truncated to `order`.
  Series coefficient(int j, int order) const;
  friend bool operator==(const PFOperator& a, const PFOperator& b);
};

/// Throws NotMaximallyUnipotent unless the indicial polynomial is c theta^r.
void check_maximally_unipotent(const PFOperator& op);

/// Trims trailing zeros, sets order_theta and checks maximal unipotency.
PFOperator make_operator(std::vector<std::vector<Scalar>> coeffs);

/// JSON {"order": r, "coeffs": [[...], ...]} or the text form, e.g.
/// "theta^4 - 5*q*(5theta+1)(5theta+2)(5theta+3)(5theta+4)".
PFOperator parse_pf(std::string_view text);

/// Text form only.
PFOperator parse_pf_text(std::string_view text);

/// solution_j = sum_{i<=j} (log q)^i / i! * f[j - i].
struct FrobeniusBasis {
  std::vector<Series> f;

  int depth() const { return static_cast<int>(f.size()); }
  const Series& y0() const { return f.at(0); }
  /// Coefficients g_i of (log q)^i for solution j.
  std::vector<Series> solution(int j) const;
};

FrobeniusBasis frobenius_solve(const PFOperator& op, int depth, int order);

/// L applied to sum_i (log q)^i g_i; returns the log-coefficients of the result.
std::vector<Series> apply_operator(const PFOperator& op, const std::vector<Series>& log_coeffs);

/// Q = q exp(f_1 / f_0).
Series mirror_map_frobenius(const FrobeniusBasis& basis);

/// Frame (Omega, theta Omega, ..., theta^{r-1} Omega), levels n - 2j, no pairing.
GeometricVHS companion_vhs(const PFOperator& op, int order);

struct BModelResult {
  NormalFormReport report;
  Series frobenius_mirror;
  /// Normal form after the optional sign flip, in the chain basis.
  DnObject chain;
  /// Middle entry of A in the chain basis; only for r = 4.
  std::optional<Series> g;
  std::optional<Series> yukawa;
  std::optional<InstantonTable> instantons;
};

/// sign = -1 substitutes Q -> -Q before extracting g.
BModelResult bmodel_pipeline(const PFOperator& op, const Scalar& volume, int order, int sign = 1);

}  // namespace vshs
