#include "vshs/amodel.hpp"

#include <algorithm>

#include "vshs/error.hpp"

namespace vshs {

DnObject build_amodel_dn(const CohomologyInput& input) {
  const int n = input.n;
  if (n < 0 || static_cast<int>(input.betti.size()) != 2 * n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "betti numbers must cover H^0 .. H^2n");
  }
  std::vector<int> cdeg;
  for (int k = 0; k <= 2 * n; ++k) {
    const int b = input.betti[static_cast<std::size_t>(k)];
    if (b < 0 || (k % 2 == 1 && b != 0)) {
      throw Error(ErrorCode::DimensionMismatch, "only even cohomology is modelled");
    }
    cdeg.insert(cdeg.end(), static_cast<std::size_t>(b), k);
  }
  const int r = static_cast<int>(cdeg.size());
  const Matrix& ints = input.intersection;
  if (ints.rows() != r || ints.cols() != r || input.quantum_mult_omega.rows() != r ||
      input.quantum_mult_omega.cols() != r) {
    throw Error(ErrorCode::DimensionMismatch, "intersection matrix or A(Q) does not match the betti numbers");
  }
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      if (!ints(a, b).is_zero() && cdeg[static_cast<std::size_t>(a)] + cdeg[static_cast<std::size_t>(b)] != 2 * n) {
        throw Error(ErrorCode::DegenerateIntersection, "intersection pairs classes whose degrees do not sum to 2n");
      }
    }
  }
  if (r == 0 || determinant(ints).is_zero()) throw Error(ErrorCode::DegenerateIntersection, "intersection form is degenerate");

  DnObject dn;
  dn.n = n;
  for (int k = 0; k <= 2 * n; k += 2) {
    if (input.betti[static_cast<std::size_t>(k)] > 0) dn.graded_dims[k - n] = input.betti[static_cast<std::size_t>(k)];
  }
  dn.pairing0 = Matrix(r, r);
  const Scalar prefactor = sign_pow(static_cast<long>(n) * (n + 1) / 2);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      dn.pairing0(a, b) = prefactor * i_pow(cdeg[static_cast<std::size_t>(b)] - n) * ints(a, b);
    }
  }
  dn.a_series = input.quantum_mult_omega;

  const CheckReport rep = check_dn(dn);
  if (const AxiomResult* hl = rep.find("hard_lefschetz"); hl && !hl->pass) {
    throw Error(ErrorCode::HardLefschetzFailure, hl->detail);
  }
  if (const AxiomResult* unit = rep.find("top_component_constant"); unit && !unit->pass) {
    throw Error(ErrorCode::UnitNotPreserved, unit->detail);
  }
  validate(dn);
  return dn;
}

bool InstantonTable::trivial() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second.is_zero(); });
}

Series g_from_instantons(const InstantonTable& table, const Scalar& volume, int order) {
  if (volume.is_zero()) throw Error(ErrorCode::ZeroVolume, "volume must be nonzero");
  Series g = Series::constant(Scalar(1), order);
  const Scalar inv = volume.inverse();
  for (const auto& [d, nd] : table.entries) {
    if (d < 1 || nd.is_zero()) continue;
    const Scalar c = nd * Scalar(static_cast<long>(d) * d * d) * inv;
    for (long k = d; k < order; k += d) g[static_cast<int>(k)] += c;
  }
  return g;
}

InstantonTable instantons_from_g(const Series& g, const Scalar& volume) {
  if (volume.is_zero()) throw Error(ErrorCode::ZeroVolume, "volume must be nonzero");
  if (g.order() < 1 || !g[0].is_one()) throw Error(ErrorCode::InvalidStructure, "g(0) must be 1");
  InstantonTable t;
  t.max_degree = g.order() - 1;
  for (int k = 1; k < g.order(); ++k) {
    Scalar c = volume * g[k];
    for (int d = 1; d < k; ++d) {
      if (k % d == 0) c -= t.entries[d] * Scalar(static_cast<long>(d) * d * d);
    }
    const Scalar nk = c / Scalar(static_cast<long>(k) * k * k);
    if (!nk.is_integer()) t.nonintegral.insert(k);
    t.entries[k] = nk;
  }
  return t;
}

}  // namespace vshs
