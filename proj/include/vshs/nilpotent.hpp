#pragma once

#include <map>
#include <vector>

#include "vshs/matrix.hpp"

namespace vshs {

/// Smallest n with N^{n+1} = 0. Throws NotNilpotent if N^dim != 0.
int nilpotency_index(const Matrix& n);

/// Monodromy weight filtration MW_{<=k} of a nilpotent endomorphism, in the
/// doubled-integer convention: N MW_{<=k} is contained in MW_{<=k-2} and N^k
/// induces Gr_k = Gr_{-k} for k >= 0.
class WeightFiltration {
 public:
  WeightFiltration() = default;
  WeightFiltration(int center, int ambient_dim, std::map<int, Subspace> levels)
      : center_(center), ambient_(ambient_dim), levels_(std::move(levels)) {}

  /// The nilpotency index n; weights live in [-n, n].
  int center() const { return center_; }
  int ambient_dim() const { return ambient_; }

  /// MW_{<=k}; the full space above the center and zero below -center.
  Subspace at(int k) const;
  /// dim Gr_k = dim MW_{<=k} - dim MW_{<=k-1}.
  int graded_dim(int k) const { return at(k).dim() - at(k - 1).dim(); }

  const std::map<int, Subspace>& levels() const { return levels_; }

  friend bool operator==(const WeightFiltration& a, const WeightFiltration& b) {
    for (int k = -std::max(a.center_, b.center_) - 1; k <= std::max(a.center_, b.center_); ++k) {
      if (a.at(k) != b.at(k)) return false;
    }
    return a.ambient_ == b.ambient_;
  }

 private:
  int center_ = 0;
  int ambient_ = 0;
  std::map<int, Subspace> levels_;
};

/// Inductive construction: MW_{<=n-1} = ker N^n, MW_{<=-n} = im N^n, then the
/// same recipe on ker N^n / im N^n with n lowered by one.
WeightFiltration weight_filtration(const Matrix& n);

/// Checks both defining properties of a weight filtration for N.
bool satisfies_weight_axioms(const Matrix& n, const WeightFiltration& w);

/// A decreasing filtration given by an adapted basis: F^{>=L} is spanned by
/// the basis columns whose doubled level is >= L. Vectors whose level has odd
/// parity live in the odd part and are only compared against odd levels.
struct HodgeFlag {
  Matrix basis;             // columns
  std::vector<int> levels;  // doubled levels 2p, one per column

  Subspace at_least(int level) const;
};

/// Graded pieces V^(p) = F^{>=p} cap W_{<=p} (W_{<=p} = MW_{<=2p}).
struct GradedSplitting {
  std::map<int, Subspace> pieces;  // keyed by doubled level 2p
  Matrix basis;                    // columns: piece bases, highest level first
  std::vector<int> levels;         // doubled level of each basis column
};

/// Throws NotSplit unless the pieces form a direct sum decomposition.
GradedSplitting graded_splitting(const Matrix& n, const HodgeFlag& flag);

}  // namespace vshs
