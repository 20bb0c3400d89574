#include <algorithm>
#include <set>

#include "vshs/error.hpp"
#include "vshs/vshs.hpp"

namespace vshs {

namespace {

int parity(int k) { return ((k % 2) + 2) % 2; }

// (1/k) sum_t (L/k)^t phi for a nilpotent linear map L.
template <typename Op>
Matrix neumann_solve(const Matrix& phi, int k, Op op) {
  const Scalar inv = Scalar::rational(1, k);
  Matrix term = phi * inv;
  Matrix acc = term;
  for (int guard = 0; !term.is_zero(); ++guard) {
    if (guard > 4 * (phi.rows() + 1)) throw Error(ErrorCode::NotNilpotentResidue, "Neumann series does not terminate");
    term = op(term) * inv;
    acc += term;
  }
  return acc;
}

void require_nilpotent(const Matrix& n, const char* what) {
  try {
    nilpotency_index(n);
  } catch (const Error&) {
    throw Error(ErrorCode::NotNilpotentResidue, what);
  }
}

SeriesMatrix column_vector(const SeriesMatrix& m, int j) { return m.block(0, j, m.rows(), 1); }

Series pair(const SeriesMatrix& x, const SeriesMatrix& m, const SeriesMatrix& y) {
  return (x.transpose() * m * y)(0, 0);
}

// Linear system for a pairing M0 compatible with levels, symmetry and residue.
Matrix solve_pairing(const Matrix& a0, const std::vector<int>& levels, int dim_parity) {
  const int r = a0.rows();
  const int nv = r * r;
  auto var = [r](int i, int j) { return i * r + j; };
  std::vector<Vector> rows;
  const Scalar s = sign_pow(dim_parity);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (levels[static_cast<std::size_t>(i)] + levels[static_cast<std::size_t>(j)] != 0) {
        Vector row(static_cast<std::size_t>(nv));
        row[static_cast<std::size_t>(var(i, j))] = 1;
        rows.push_back(std::move(row));
      }
      Vector sym(static_cast<std::size_t>(nv));
      sym[static_cast<std::size_t>(var(i, j))] += 1;
      sym[static_cast<std::size_t>(var(j, i))] -= s;
      rows.push_back(std::move(sym));
      // (A0^t X + X A0)_{ij}
      Vector comp(static_cast<std::size_t>(nv));
      for (int k = 0; k < r; ++k) {
        comp[static_cast<std::size_t>(var(k, j))] += a0(k, i);
        comp[static_cast<std::size_t>(var(i, k))] += a0(k, j);
      }
      rows.push_back(std::move(comp));
    }
  }
  const auto null = nullspace(Matrix::from_rows(rows));
  if (null.size() != 1) {
    throw Error(ErrorCode::PairingNotDetermined,
                "compatible pairings form a space of dimension " + std::to_string(null.size()));
  }
  Matrix m(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) m(i, j) = null[0][static_cast<std::size_t>(var(i, j))];
  }
  if (determinant(m).is_zero()) throw Error(ErrorCode::PairingNotDetermined, "the compatible pairing is degenerate");
  return m;
}

// Scale basis vector `index` by lambda.
void scale_basis_vector(SeriesMatrix& a, Matrix& m, SeriesMatrix& frame, int index, const Scalar& lambda) {
  const Scalar inv = lambda.inverse();
  for (int j = 0; j < a.cols(); ++j) a.set(index, j, a(index, j) * inv);
  for (int i = 0; i < a.rows(); ++i) a.set(i, index, a(i, index) * lambda);
  for (int j = 0; j < m.cols(); ++j) m(index, j) *= lambda;
  for (int i = 0; i < m.rows(); ++i) m(i, index) *= lambda;
  for (int i = 0; i < frame.rows(); ++i) frame.set(i, index, frame(i, index) * lambda);
}

}  // namespace

SeriesMatrix formal_flat_gauge(const SeriesMatrix& connection) {
  if (!connection.is_square()) throw Error(ErrorCode::DimensionMismatch, "connection must be square");
  const int r = connection.rows();
  const int order = connection.order();
  const Matrix n = connection.coefficient(0);
  require_nilpotent(n, "residue B(0) is not nilpotent");
  std::vector<Matrix> b;
  for (int k = 0; k < order; ++k) b.push_back(connection.coefficient(k));
  std::vector<Matrix> u{Matrix::identity(r)};
  for (int k = 1; k < order; ++k) {
    Matrix phi(r, r);
    for (int j = 1; j <= k; ++j) {
      if (!b[static_cast<std::size_t>(j)].is_zero()) phi += b[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k - j)];
    }
    u.push_back(neumann_solve(phi, k, [&](const Matrix& x) { return n * x - x * n; }));
  }
  return SeriesMatrix::from_coefficients(u, r, r, order);
}

HodgeTateFrame hodge_tate_split(const GeometricVHS& vhs) {
  const int r = vhs.rank();
  const SeriesMatrix& b = vhs.connection;
  if (b.rows() != r || b.cols() != r) throw Error(ErrorCode::DimensionMismatch, "connection size differs from levels");
  const int order = vhs.order();
  const Matrix n = b.coefficient(0);

  HodgeTateFrame out;
  // theta U = U N - B U, so that U^{-1}(B U + theta U) = N.
  out.flat_gauge = formal_flat_gauge(-b);
  const SeriesMatrix u_inv = inverse(out.flat_gauge);
  out.weights = weight_filtration(n);
  const WeightFiltration& w = out.weights;
  const auto& l = vhs.levels;

  int lo = -w.center() - 2;
  int hi = w.center() + 2;
  for (int level : l) {
    lo = std::min(lo, level - 2);
    hi = std::max(hi, level + 2);
  }

  struct Piece {
    int level;
    Subspace space;
  };
  std::vector<Piece> pieces;
  int total = 0;
  for (int level = hi; level >= lo; --level) {
    const int sigma = parity(level);
    std::vector<int> same;
    std::vector<int> above;
    for (int i = 0; i < r; ++i) {
      const int li = l[static_cast<std::size_t>(i)];
      if (parity(li) != sigma) continue;
      same.push_back(i);
      if (li >= level) above.push_back(i);
    }
    const Subspace v_sigma = Subspace::coordinate(r, same);
    Subspace piece = Subspace::coordinate(r, above).intersect(w.at(level)).intersect(v_sigma);
    if (piece.dim() == 0) continue;
    total += piece.dim();
    pieces.push_back({level, std::move(piece)});
  }
  std::vector<Vector> all;
  for (const auto& p : pieces) {
    for (auto& v : p.space.basis()) all.push_back(v);
  }
  if (total != r || rank(Matrix::from_columns(r, all)) != r) {
    throw Error(ErrorCode::NotHodgeTate, "Hodge-Tate: the Hodge flag does not split the weight filtration at q = 0");
  }

  SeriesMatrix p_frame(r, r, order);
  int col = 0;
  for (const auto& p : pieces) {
    const int sigma = parity(p.level);
    std::vector<int> same;
    std::vector<int> above;
    for (int i = 0; i < r; ++i) {
      const int li = l[static_cast<std::size_t>(i)];
      if (parity(li) != sigma) continue;
      same.push_back(i);
      if (li >= p.level) above.push_back(i);
    }
    const auto complement = w.at(p.level - 2).intersect(Subspace::coordinate(r, same)).basis();
    const int m = static_cast<int>(same.size());
    const int na = static_cast<int>(above.size());
    if (na + static_cast<int>(complement.size()) != m) {
      throw Error(ErrorCode::NotHodgeTate, "Hodge-Tate: F^{>=" + std::to_string(p.level) +
                                               "/2} is not complementary to the lower weights");
    }
    // S = [Phi | C] on the coordinates of this parity.
    SeriesMatrix s(m, m, order);
    for (int a = 0; a < m; ++a) {
      for (int c = 0; c < na; ++c) s.set(a, c, u_inv(same[static_cast<std::size_t>(a)], above[static_cast<std::size_t>(c)]));
      for (int c = 0; c < static_cast<int>(complement.size()); ++c) {
        s.set_coeff(a, na + c, 0, complement[static_cast<std::size_t>(c)][static_cast<std::size_t>(same[static_cast<std::size_t>(a)])]);
      }
    }
    SeriesMatrix s_inv;
    try {
      s_inv = inverse(s);
    } catch (const Error&) {
      throw Error(ErrorCode::NotHodgeTate, "the flat frame is not transverse to the weight filtration at q = 0");
    }
    for (const auto& wv : p.space.basis()) {
      SeriesMatrix rhs(m, 1, order);
      for (int a = 0; a < m; ++a) rhs.set_coeff(a, 0, 0, wv[static_cast<std::size_t>(same[static_cast<std::size_t>(a)])]);
      const SeriesMatrix z = s_inv * rhs;
      for (int i = 0; i < r; ++i) {
        Series acc(order);
        for (int c = 0; c < na; ++c) acc += u_inv(i, above[static_cast<std::size_t>(c)]) * z(c, 0);
        p_frame.set(i, col, acc);
      }
      out.levels.push_back(p.level);
      ++col;
    }
  }
  out.frame = out.flat_gauge * p_frame;
  try {
    inverse(out.frame.coefficient(0));
  } catch (const Error&) {
    throw Error(ErrorCode::NotHodgeTate, "assembled frame is singular at q = 0");
  }
  return out;
}

CanonicalConnection to_canonical_connection(const GeometricVHS& vhs) {
  CanonicalConnection out;
  out.split = hodge_tate_split(vhs);
  const SeriesMatrix& t = out.split.frame;
  out.connection = inverse(t) * (vhs.connection * t + theta(t));
  const auto& l = out.split.levels;
  const SeriesMatrix& a = out.connection;
  for (int k = 0; k < a.order(); ++k) {
    const Matrix ak = a.coefficient(k);
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) {
        if (ak(i, j).is_zero() || l[static_cast<std::size_t>(i)] == l[static_cast<std::size_t>(j)] - 2) continue;
        throw Error(ErrorCode::DegreeViolation,
                    "q^" + std::to_string(k) + " coefficient maps level " + std::to_string(l[static_cast<std::size_t>(j)]) +
                        "/2 to " + std::to_string(l[static_cast<std::size_t>(i)]) + "/2");
      }
    }
  }
  return out;
}

CanonicalCoordinate canonical_coordinate(const SeriesMatrix& a, const std::vector<int>& levels) {
  const int r = a.rows();
  if (static_cast<int>(levels.size()) != r) throw Error(ErrorCode::DimensionMismatch, "grading length");
  const int order = a.order();
  const int top = *std::max_element(levels.begin(), levels.end());
  std::vector<int> top_idx;
  std::vector<int> next_idx;
  for (int i = 0; i < r; ++i) {
    if (levels[static_cast<std::size_t>(i)] == top) top_idx.push_back(i);
    if (levels[static_cast<std::size_t>(i)] == top - 2) next_idx.push_back(i);
  }
  if (top_idx.size() != 1) throw Error(ErrorCode::NoVolumeForm, "top graded piece is not one-dimensional");
  const int t = top_idx[0];
  int pivot = -1;
  for (int j : next_idx) {
    if (!a(j, t)[0].is_zero()) {
      pivot = j;
      break;
    }
  }
  if (pivot < 0) throw Error(ErrorCode::ZeroKS, "Kodaira-Spencer image vanishes at q = 0");
  const Series h = a(pivot, t) * a(pivot, t)[0].inverse();
  for (int j : next_idx) {
    if (a(j, t) != h * a(j, t)[0]) {
      throw Error(ErrorCode::NotProportional, "Kodaira-Spencer component is not a scalar multiple of its value at q = 0");
    }
  }
  CanonicalCoordinate out;
  out.ks_factor = h;
  out.coordinate = Series::variable(order) * exp(theta_inverse(h - Series::constant(Scalar(1), order)));
  return out;
}

SeriesMatrix extend_pairing(const SeriesMatrix& a, const Matrix& m0, PairingConvention convention,
                            const std::vector<int>& degrees) {
  const int r = a.rows();
  if (!a.is_square() || m0.rows() != r || m0.cols() != r) throw Error(ErrorCode::DimensionMismatch, "pairing size");
  const Matrix a0 = a.coefficient(0);
  if (convention == PairingConvention::NormalForm) {
    if (static_cast<int>(degrees.size()) != r) throw Error(ErrorCode::DimensionMismatch, "degrees required");
    Matrix p(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) p(i, j) = i_pow(-degrees[static_cast<std::size_t>(j)]) * m0(i, j);
    }
    if (a0.transpose() * p != p * a0) {
      throw Error(ErrorCode::ResidueNotCompatible, "A(0) is not self-adjoint for the untwisted pairing");
    }
  } else if (!(a0.transpose() * m0 + m0 * a0).is_zero()) {
    throw Error(ErrorCode::ResidueNotCompatible, "A(0) is not skew-adjoint for M0");
  }
  const SeriesMatrix b = convention == PairingConvention::Geometric ? a : -a;
  const Matrix b0 = b.coefficient(0);
  require_nilpotent(b0, "residue is not nilpotent");
  const int order = a.order();
  std::vector<Matrix> bc;
  std::vector<Matrix> bt;
  for (int k = 0; k < order; ++k) {
    bc.push_back(b.coefficient(k));
    bt.push_back(bc.back().transpose());
  }
  const Matrix b0t = b0.transpose();
  std::vector<Matrix> m{m0};
  for (int k = 1; k < order; ++k) {
    Matrix phi(r, r);
    for (int j = 1; j <= k; ++j) {
      if (bc[static_cast<std::size_t>(j)].is_zero()) continue;
      const Matrix& prev = m[static_cast<std::size_t>(k - j)];
      phi += bt[static_cast<std::size_t>(j)] * prev + prev * bc[static_cast<std::size_t>(j)];
    }
    m.push_back(neumann_solve(phi, k, [&](const Matrix& x) { return b0t * x + x * b0; }));
  }
  return SeriesMatrix::from_coefficients(m, r, r, order);
}

CheckReport pairing_grading_check(const Matrix& m0, const std::vector<int>& grading) {
  CheckReport rep;
  const int r = m0.rows();
  std::string bad;
  for (int i = 0; i < r && bad.empty(); ++i) {
    for (int j = 0; j < r; ++j) {
      if (!m0(i, j).is_zero() && grading[static_cast<std::size_t>(i)] + grading[static_cast<std::size_t>(j)] != 0) {
        bad = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") pairs " +
              std::to_string(grading[static_cast<std::size_t>(i)]) + " with " +
              std::to_string(grading[static_cast<std::size_t>(j)]);
        break;
      }
    }
  }
  rep.add("block_pattern", bad.empty(), bad);
  bad.clear();
  for (int g : std::set<int>(grading.begin(), grading.end())) {
    std::vector<Vector> cols;
    std::vector<int> rows_idx;
    std::vector<int> cols_idx;
    for (int i = 0; i < r; ++i) {
      if (grading[static_cast<std::size_t>(i)] == g) rows_idx.push_back(i);
      if (grading[static_cast<std::size_t>(i)] == -g) cols_idx.push_back(i);
    }
    Matrix blk(static_cast<int>(rows_idx.size()), static_cast<int>(cols_idx.size()));
    for (std::size_t a = 0; a < rows_idx.size(); ++a) {
      for (std::size_t c = 0; c < cols_idx.size(); ++c) blk(static_cast<int>(a), static_cast<int>(c)) = m0(rows_idx[a], cols_idx[c]);
    }
    if (rows_idx.size() != cols_idx.size() || rank(blk) != static_cast<int>(rows_idx.size())) {
      bad = "block (" + std::to_string(g) + "," + std::to_string(-g) + ") is degenerate";
      break;
    }
  }
  rep.add("block_nondegenerate", bad.empty(), bad);
  return rep;
}

NormalFormReport to_normal_form(const GeometricVHS& vhs, const std::optional<Scalar>& volume) {
  const CanonicalConnection cc = to_canonical_connection(vhs);
  const auto& levels = cc.split.levels;
  const int order = vhs.order();
  const int n = levels.front();
  if (levels.back() != -n || std::count(levels.begin(), levels.end(), n) != 1) {
    throw Error(ErrorCode::NoVolumeForm, "graded pieces are not concentrated symmetrically with a one-dimensional top");
  }
  if (n < 0) throw Error(ErrorCode::NoVolumeForm, "top level is negative");

  NormalFormReport report;
  SeriesMatrix a = cc.connection;
  SeriesMatrix frame = cc.split.frame;
  Series q_of_big_q = Series::variable(order);
  if (n > 0) {
    const CanonicalCoordinate coord = canonical_coordinate(a, levels);
    report.mirror_coordinate = coord.coordinate;
    q_of_big_q = reverse(coord.coordinate);
    a = compose(invert(coord.ks_factor) * a, q_of_big_q);
  } else {
    report.mirror_coordinate = Series::variable(order);
  }

  Matrix m0;
  std::optional<Scalar> lambda;
  const int vol = 0;
  if (vhs.pairing) {
    const SeriesMatrix mt = compose(frame.transpose() * *vhs.pairing * frame, q_of_big_q);
    if (!(theta(mt) - a.transpose() * mt - mt * a).is_zero()) {
      throw Error(ErrorCode::InvalidStructure, "pairing is not covariantly constant");
    }
    m0 = mt.coefficient(0);
  } else {
    if (!volume) throw Error(ErrorCode::PairingNotDetermined, "a volume normalisation is required without a pairing");
    m0 = solve_pairing(a.coefficient(0), levels, vhs.dimension_parity);
  }
  const CheckReport grading = pairing_grading_check(m0, levels);
  if (!grading.ok()) {
    throw Error(ErrorCode::NotHodgeTate, "pairing at q = 0 is incompatible with the grading: " + grading.failures());
  }

  if (volume) {
    const Matrix a_dn0 = -a.coefficient(0);
    const Scalar current = (m0 * matrix_power(a_dn0, n))(vol, vol);
    if (current.is_zero()) throw Error(ErrorCode::PairingNotDetermined, "top pairing value vanishes");
    const Scalar ratio = volume_twist(n) * *volume / current;
    if (vhs.pairing) {
      lambda = exact_sqrt(ratio);
      if (!lambda) throw Error(ErrorCode::NotASquare, "rescaling factor " + ratio.str() + " has no square root in Q(i)");
      scale_basis_vector(a, m0, frame, vol, *lambda);
    } else {
      m0 *= ratio;
    }
  }

  DnObject dn;
  dn.n = n;
  for (int level : levels) dn.graded_dims[-level] += 1;
  dn.pairing0 = m0;
  dn.a_series = -a;
  validate(dn);

  report.c1 = Scalar(1);
  report.gauge = frame;
  report.dn = std::move(dn);
  report.volume_index = vol;
  report.sign_ambiguity = true;
  return report;
}

Series yukawa(const DnObject& dn) {
  const int vol = dn.volume_index();
  const int r = dn.dim();
  const int order = dn.order();
  const SeriesMatrix m = extend_pairing(dn.a_series, dn.pairing0, PairingConvention::Geometric);
  SeriesMatrix omega(r, 1, order);
  omega.set_coeff(vol, 0, 0, Scalar(1));
  SeriesMatrix s = omega;
  for (int k = 0; k < dn.n; ++k) s = theta(s) + dn.a_series * s;
  return pair(omega, m, s) * volume_twist(dn.n).inverse();
}

Series yukawa(const GeometricVHS& vhs) {
  if (!vhs.pairing) throw Error(ErrorCode::NoVolumeForm, "Yukawa coupling needs a pairing");
  const auto& l = vhs.levels;
  const int top = *std::max_element(l.begin(), l.end());
  if (std::count(l.begin(), l.end(), top) != 1) throw Error(ErrorCode::NoVolumeForm, "top level is not one-dimensional");
  const int t = static_cast<int>(std::find(l.begin(), l.end(), top) - l.begin());
  const SeriesMatrix omega = column_vector(SeriesMatrix::identity(vhs.rank(), vhs.order()), t);
  SeriesMatrix s = omega;
  for (int k = 0; k < top; ++k) s = theta(s) + vhs.connection * s;
  return pair(omega, *vhs.pairing, s);
}

GeometricVHS pullback(const GeometricVHS& vhs, const Series& phi) {
  if (phi.order() < 2 || !phi[0].is_zero() || phi[1].is_zero()) {
    throw Error(ErrorCode::NotReversible, "coordinate change must satisfy phi(0) = 0, phi'(0) != 0");
  }
  // theta(phi)/phi = 1 + theta(u)/u with u = phi/q.
  std::vector<Scalar> uc(phi.coeffs().begin() + 1, phi.coeffs().end());
  const Series u = Series(std::move(uc)) * phi[1].inverse();
  const Series w = Series::constant(Scalar(1), u.order()) + theta(log(u));
  GeometricVHS out = vhs;
  out.connection = w * compose(vhs.connection, phi);
  if (vhs.pairing) out.pairing = compose(*vhs.pairing, phi).truncated(out.connection.order());
  return out;
}

GeometricVHS rescale_coordinate(const GeometricVHS& vhs, const Scalar& c) {
  if (c.is_zero()) throw Error(ErrorCode::ZeroScalar, "rescaling by zero");
  const Scalar inv = c.inverse();
  auto scale = [&](const SeriesMatrix& m) {
    SeriesMatrix out(m.rows(), m.cols(), m.order());
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) out.set(i, j, scale_variable(m(i, j), inv));
    }
    return out;
  };
  GeometricVHS out = vhs;
  out.connection = scale(vhs.connection);
  if (vhs.pairing) out.pairing = scale(*vhs.pairing);
  return out;
}

GeometricVHS gauge_transform(const GeometricVHS& vhs, const SeriesMatrix& g) {
  GeometricVHS out = vhs;
  out.connection = inverse(g) * (vhs.connection * g + theta(g));
  if (vhs.pairing) out.pairing = g.transpose() * *vhs.pairing * g;
  return out;
}

}  // namespace vshs
