#pragma once

#include <map>
#include <set>
#include <vector>

#include "vshs/vshs.hpp"

namespace vshs {

/// Ambient even cohomology of a compact n-fold together with the quantum
/// product by the Kahler class. The basis is ordered by cohomological degree:
/// betti[0] classes of H^0, then betti[2] classes of H^2, and so on. Odd
/// entries of `betti` must be zero.
struct CohomologyInput {
  int n = 0;
  std::vector<int> betti;
  Matrix intersection;              // integral of a cup b
  SeriesMatrix quantum_mult_omega;  // A(Q)
};

/// V_k = H^{n+k}, <a, b> = (-1)^{n(n+1)/2} i^{|b|-n} int a cup b, A = omega*.
DnObject build_amodel_dn(const CohomologyInput& input);

struct InstantonTable {
  std::map<int, Scalar> entries;  // degree -> n_d
  int max_degree = 0;
  std::set<int> nonintegral;      // degrees whose n_d is not an integer

  /// True when every n_d vanishes.
  bool trivial() const;
  friend bool operator==(const InstantonTable& a, const InstantonTable& b) {
    return a.entries == b.entries && a.max_degree == b.max_degree;
  }
};

/// g(Q) = 1 + (1/volume) sum_d n_d d^3 Q^d / (1 - Q^d) mod Q^order.
Series g_from_instantons(const InstantonTable& table, const Scalar& volume, int order);

/// Divisor-sum inversion of the Lambert expansion, degrees 1 .. order-1.
InstantonTable instantons_from_g(const Series& g, const Scalar& volume);

}  // namespace vshs
