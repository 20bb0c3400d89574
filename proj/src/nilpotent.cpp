#include "vshs/nilpotent.hpp"

#include <algorithm>
#include <set>

#include "vshs/error.hpp"

namespace vshs {

namespace {

void build_weights(const Matrix& n, const Subspace& sub, const Subspace& quot, int m,
                   std::map<int, Subspace>& out) {
  out[m] = sub;
  out[-m - 1] = quot;
  if (m == 0) return;
  const Matrix nm = matrix_power(n, m);
  Subspace ker = Subspace::preimage(nm, quot).intersect(sub);
  Subspace im = sub.image(nm) + quot;
  build_weights(n, ker, im, m - 1, out);
}

}  // namespace

int nilpotency_index(const Matrix& n) {
  if (!n.is_square()) throw Error(ErrorCode::DimensionMismatch, "endomorphism must be square");
  Matrix power = Matrix::identity(n.rows());
  for (int k = 0; k <= n.rows(); ++k) {
    // power == N^k here; N^{k} = 0 means index k - 1.
    if (power.is_zero()) return k - 1;
    power = power * n;
  }
  throw Error(ErrorCode::NotNilpotent, "N^dim != 0");
}

Subspace WeightFiltration::at(int k) const {
  if (k >= center_) return Subspace::full(ambient_);
  if (k < -center_) return Subspace(ambient_);
  return levels_.at(k);
}

WeightFiltration weight_filtration(const Matrix& n) {
  const int dim = n.rows();
  if (dim == 0) return WeightFiltration(0, 0, {});
  const int index = nilpotency_index(n);
  std::map<int, Subspace> levels;
  build_weights(n, Subspace::full(dim), Subspace(dim), index, levels);
  return WeightFiltration(index, dim, std::move(levels));
}

bool satisfies_weight_axioms(const Matrix& n, const WeightFiltration& w) {
  const int c = w.center();
  for (int k = -c - 1; k <= c; ++k) {
    if (!w.at(k).contains(w.at(k - 1))) return false;
    if (!w.at(k - 2).contains(w.at(k).image(n))) return false;
  }
  if (w.at(c).dim() != n.rows() || w.at(-c - 1).dim() != 0) return false;
  for (int k = 1; k <= c; ++k) {
    if (w.graded_dim(k) != w.graded_dim(-k)) return false;
    const Subspace hit = w.at(k).image(matrix_power(n, k)) + w.at(-k - 1);
    if (hit != w.at(-k)) return false;
  }
  return true;
}

Subspace HodgeFlag::at_least(int level) const {
  std::vector<Vector> vs;
  for (int j = 0; j < basis.cols(); ++j) {
    const int lj = levels[static_cast<std::size_t>(j)];
    if (lj >= level && (lj - level) % 2 == 0) vs.push_back(basis.column(j));
  }
  return Subspace::span(basis.rows(), vs);
}

GradedSplitting graded_splitting(const Matrix& n, const HodgeFlag& flag) {
  const int dim = n.rows();
  if (flag.basis.rows() != dim || flag.basis.cols() != dim ||
      static_cast<int>(flag.levels.size()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, "flag must be an adapted basis of the whole space");
  }
  const WeightFiltration w = weight_filtration(n);
  int lo = -w.center() - 1;
  int hi = w.center() + 1;
  for (int l : flag.levels) {
    lo = std::min(lo, l - 1);
    hi = std::max(hi, l + 1);
  }
  GradedSplitting out;
  std::vector<Vector> all;
  for (int level = hi; level >= lo; --level) {
    Subspace piece = flag.at_least(level).intersect(w.at(level));
    if (piece.dim() == 0) continue;
    for (auto& v : piece.basis()) {
      all.push_back(v);
      out.levels.push_back(level);
    }
    out.pieces.emplace(level, std::move(piece));
  }
  if (static_cast<int>(all.size()) != dim || rank(Matrix::from_columns(dim, all)) != dim) {
    throw Error(ErrorCode::NotSplit, "F cap W pieces do not form a direct sum decomposition");
  }
  out.basis = Matrix::from_columns(dim, all);
  return out;
}

}  // namespace vshs
