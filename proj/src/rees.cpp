#include <algorithm>
#include <set>
#include <sstream>

#include "vshs/error.hpp"
#include "vshs/vshs.hpp"

namespace vshs {

namespace {

std::string pos(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

bool even(int k) { return k % 2 == 0; }

std::vector<int> indices_with(const std::vector<int>& grading, int value) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(grading.size()); ++i) {
    if (grading[static_cast<std::size_t>(i)] == value) out.push_back(i);
  }
  return out;
}

Matrix sub_matrix(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) out(static_cast<int>(a), static_cast<int>(b)) = m(rows[a], cols[b]);
  }
  return out;
}

SeriesMatrix sub_matrix(const SeriesMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  SeriesMatrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()), m.order());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) out.set(static_cast<int>(a), static_cast<int>(b), m(rows[a], cols[b]));
  }
  return out;
}

bool shape_ok(const SeriesMatrix& m, int r) { return m.rows() == r && m.cols() == r; }

const SeriesMatrix* lookup(const std::map<int, SeriesMatrix>& m, int key) {
  auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

}  // namespace

// ---------------------------------------------------------------------------

int ReesModule::order() const {
  int order = -1;
  for (const auto& [k, m] : connection) order = order < 0 ? m.order() : std::min(order, m.order());
  for (const auto& [k, m] : pairing) order = order < 0 ? m.order() : std::min(order, m.order());
  return std::max(order, 0);
}

ReesModule ReesModule::canonicalized() const {
  ReesModule out{degrees, dimension_parity, {}, {}};
  for (const auto& [k, m] : connection) {
    if (!m.is_zero()) out.connection.emplace(k, m);
  }
  for (const auto& [k, m] : pairing) {
    if (!m.is_zero()) out.pairing.emplace(k, m);
  }
  return out;
}

bool operator==(const ReesModule& a, const ReesModule& b) {
  const ReesModule ca = a.canonicalized();
  const ReesModule cb = b.canonicalized();
  return ca.degrees == cb.degrees && ca.dimension_parity % 2 == cb.dimension_parity % 2 &&
         ca.connection == cb.connection && ca.pairing == cb.pairing;
}

std::pair<int, int> GeometricVHS::parity_split() const {
  int ev = 0;
  for (int l : levels) ev += even(l) ? 1 : 0;
  return {ev, rank() - ev};
}

int DnObject::dim() const {
  int d = 0;
  for (const auto& [k, v] : graded_dims) d += v;
  return d;
}

std::vector<int> DnObject::degrees() const {
  std::vector<int> out;
  for (const auto& [k, v] : graded_dims) out.insert(out.end(), static_cast<std::size_t>(std::max(v, 0)), k);
  return out;
}

int DnObject::volume_index() const {
  auto it = graded_dims.find(-n);
  if (it == graded_dims.end() || it->second != 1) {
    throw Error(ErrorCode::NoVolumeForm, "V_{-n} is not one-dimensional");
  }
  int index = 0;
  for (const auto& [k, v] : graded_dims) {
    if (k == -n) break;
    index += v;
  }
  return index;
}

bool CheckReport::ok() const {
  return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.pass; });
}

const AxiomResult* CheckReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

void CheckReport::add(std::string name, bool pass, std::string detail) {
  results.push_back({std::move(name), pass, pass ? std::string{} : std::move(detail)});
}

std::string CheckReport::failures() const {
  std::string out;
  for (const auto& r : results) {
    if (r.pass) continue;
    if (!out.empty()) out += ", ";
    out += r.name;
  }
  return out;
}

Scalar volume_twist(int n) { return sign_pow(static_cast<long>(n) * (n + 1) / 2) * i_pow(n); }

// ---------------------------------------------------------------------------
// Rees modules

CheckReport verify_prevhs(const ReesModule& module) {
  CheckReport rep;
  rep.order = module.order();
  const int r = module.rank();
  const auto& d = module.degrees;

  bool shapes = true;
  for (const auto& [k, m] : module.connection) shapes = shapes && shape_ok(m, r);
  for (const auto& [k, m] : module.pairing) shapes = shapes && shape_ok(m, r);
  rep.add("shape", shapes, "matrix size differs from the rank");
  if (!shapes) return rep;

  const ReesModule c = module.canonicalized();
  const int min_conn = c.connection.empty() ? 0 : c.connection.begin()->first;
  rep.add("u_valuation", min_conn >= -1, "connection has a u^" + std::to_string(min_conn) + " term");
  rep.add("flatness", true);

  std::string bad;
  for (const auto& [m, cm] : c.connection) {
    for (int i = 0; i < r && bad.empty(); ++i) {
      for (int j = 0; j < r; ++j) {
        if (!cm(i, j).is_zero() && 2 * m != d[static_cast<std::size_t>(j)] - d[static_cast<std::size_t>(i)]) {
          bad = "connection u^" + std::to_string(m) + " entry " + pos(i, j) + " is not of degree 0";
          break;
        }
      }
    }
  }
  for (const auto& [m, pm] : c.pairing) {
    for (int i = 0; i < r && bad.empty(); ++i) {
      for (int j = 0; j < r; ++j) {
        if (!pm(i, j).is_zero() && 2 * m != d[static_cast<std::size_t>(i)] + d[static_cast<std::size_t>(j)]) {
          bad = "pairing u^" + std::to_string(m) + " entry " + pos(i, j) + " is not of degree 0";
          break;
        }
      }
    }
  }
  rep.add("grading", bad.empty(), bad);

  const int min_pair = c.pairing.empty() ? 0 : c.pairing.begin()->first;
  rep.add("pairing_u_valuation", min_pair >= 0, "pairing has a u^" + std::to_string(min_pair) + " term");

  // (e_i, e_j)(u) = (-1)^{n + d_j} (e_j, e_i)(-u)
  bad.clear();
  for (const auto& [m, pm] : c.pairing) {
    for (int i = 0; i < r && bad.empty(); ++i) {
      for (int j = 0; j < r; ++j) {
        const Scalar s = sign_pow(module.dimension_parity + d[static_cast<std::size_t>(j)] + m);
        if (pm(i, j) != s * pm(j, i)) {
          bad = "u^" + std::to_string(m) + " entry " + pos(i, j);
          break;
        }
      }
    }
  }
  rep.add("pairing_symmetry", bad.empty(), bad);

  // theta P = C^t P + P C(-u)
  bad.clear();
  std::set<int> keys;
  for (const auto& [a, cm] : c.connection) {
    for (const auto& [b, pm] : c.pairing) keys.insert(a + b);
  }
  for (const auto& [b, pm] : c.pairing) keys.insert(b);
  const int order = module.order();
  for (int m : keys) {
    SeriesMatrix lhs(r, r, order);
    if (const SeriesMatrix* p = lookup(c.pairing, m)) lhs = theta(*p);
    for (const auto& [a, cm] : c.connection) {
      const SeriesMatrix* p = lookup(c.pairing, m - a);
      if (p == nullptr) continue;
      lhs -= cm.transpose() * *p;
      lhs -= (*p * cm) * sign_pow(a);
    }
    if (!lhs.is_zero()) {
      bad = "u^" + std::to_string(m) + " component";
      break;
    }
  }
  rep.add("covariant_constancy", bad.empty(), bad);

  bool nondeg = false;
  if (const SeriesMatrix* p0 = lookup(c.pairing, 0)) nondeg = r <= 16 && !determinant(*p0).is_zero();
  if (r == 0) nondeg = true;
  rep.add("nondegenerate_mod_u", nondeg, "pairing mod u is degenerate");
  return rep;
}

GeometricVHS rees_to_geometric(const ReesModule& module) {
  const int r = module.rank();
  const CheckReport rep = verify_prevhs(module);
  if (!rep.find("shape")->pass) throw Error(ErrorCode::NotFree, "matrix sizes do not match the rank");
  if (const AxiomResult* g = rep.find("grading"); g != nullptr && !g->pass) {
    throw Error(ErrorCode::InvalidStructure, g->detail);
  }
  const int order = module.order();
  const auto& d = module.degrees;
  GeometricVHS out;
  out.dimension_parity = ((module.dimension_parity % 2) + 2) % 2;
  for (int k : d) out.levels.push_back(-k);
  out.connection = SeriesMatrix(r, r, order);
  for (const auto& [m, cm] : module.connection) out.connection += cm;
  if (!module.pairing.empty()) {
    SeriesMatrix pm(r, r, order);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        const int s = d[static_cast<std::size_t>(i)] + d[static_cast<std::size_t>(j)];
        if (!even(s)) continue;
        const SeriesMatrix* p = lookup(module.pairing, s / 2);
        if (p == nullptr) continue;
        pm.set(i, j, (*p)(i, j) * i_pow(d[static_cast<std::size_t>(j)]));
      }
    }
    out.pairing = std::move(pm);
  }
  return out;
}

ReesModule geometric_to_rees(const GeometricVHS& vhs, const std::optional<std::vector<int>>& degree_choice) {
  const int r = vhs.rank();
  if (!shape_ok(vhs.connection, r) || (vhs.pairing && !shape_ok(*vhs.pairing, r))) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sizes do not match the number of levels");
  }
  ReesModule out;
  out.dimension_parity = ((vhs.dimension_parity % 2) + 2) % 2;
  for (int l : vhs.levels) out.degrees.push_back(-l);
  if (degree_choice) {
    if (static_cast<int>(degree_choice->size()) != r) {
      throw Error(ErrorCode::InconsistentLift, "degree choice has the wrong length");
    }
    for (int i = 0; i < r; ++i) {
      if ((*degree_choice)[static_cast<std::size_t>(i)] != out.degrees[static_cast<std::size_t>(i)]) {
        throw Error(ErrorCode::InconsistentLift,
                    "frame vector " + std::to_string(i) + " at level " +
                        std::to_string(vhs.levels[static_cast<std::size_t>(i)]) + "/2 lifts to degree " +
                        std::to_string(out.degrees[static_cast<std::size_t>(i)]) + ", not " +
                        std::to_string((*degree_choice)[static_cast<std::size_t>(i)]));
      }
    }
  }
  const auto& d = out.degrees;
  const int order = vhs.order();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const Series& b = vhs.connection(i, j);
      if (b.is_zero()) continue;
      const int diff = d[static_cast<std::size_t>(j)] - d[static_cast<std::size_t>(i)];
      if (!even(diff)) throw Error(ErrorCode::InvalidStructure, "connection entry " + pos(i, j) + " mixes parities");
      auto [it, fresh] = out.connection.try_emplace(diff / 2, r, r, order);
      it->second.set(i, j, b);
    }
  }
  if (vhs.pairing) {
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        const Series& p = (*vhs.pairing)(i, j);
        if (p.is_zero()) continue;
        const int s = d[static_cast<std::size_t>(i)] + d[static_cast<std::size_t>(j)];
        if (!even(s)) throw Error(ErrorCode::InvalidStructure, "pairing entry " + pos(i, j) + " mixes parities");
        auto [it, fresh] = out.pairing.try_emplace(s / 2, r, r, vhs.pairing->order());
        it->second.set(i, j, p * i_pow(-d[static_cast<std::size_t>(j)]));
      }
    }
    if (out.pairing.empty()) out.pairing.emplace(0, SeriesMatrix(r, r, vhs.pairing->order()));
  }
  return out;
}

CheckReport check_geometric(const GeometricVHS& vhs) {
  CheckReport rep;
  rep.order = vhs.order();
  const int r = vhs.rank();
  const auto& l = vhs.levels;
  const bool shapes = shape_ok(vhs.connection, r) && (!vhs.pairing || shape_ok(*vhs.pairing, r));
  rep.add("shape", shapes, "matrix size differs from the number of levels");
  if (!shapes) return rep;

  std::string parity_bad;
  std::string griffiths_bad;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (vhs.connection(i, j).is_zero()) continue;
      const int li = l[static_cast<std::size_t>(i)];
      const int lj = l[static_cast<std::size_t>(j)];
      if (!even(li - lj) && parity_bad.empty()) parity_bad = "entry " + pos(i, j);
      if (li < lj - 2 && griffiths_bad.empty()) {
        griffiths_bad = "entry " + pos(i, j) + " maps level " + std::to_string(lj) + "/2 to " + std::to_string(li) + "/2";
      }
    }
  }
  rep.add("parity_blocks", parity_bad.empty(), parity_bad);
  rep.add("griffiths_transversality", griffiths_bad.empty(), griffiths_bad);
  if (!vhs.pairing) return rep;

  const SeriesMatrix& m = *vhs.pairing;
  const SeriesMatrix mt = m.transpose() * sign_pow(vhs.dimension_parity);
  rep.add("pairing_symmetry", (m - mt).is_zero(), "M != (-1)^n M^t");
  const SeriesMatrix& b = vhs.connection;
  rep.add("covariant_constancy", (theta(m) - b.transpose() * m - m * b).is_zero(), "theta M != B^t M + M B");

  std::string orth_bad;
  for (int i = 0; i < r && orth_bad.empty(); ++i) {
    for (int j = 0; j < r; ++j) {
      const int s = l[static_cast<std::size_t>(i)] + l[static_cast<std::size_t>(j)];
      if ((s > 0 || !even(s)) && !m(i, j).is_zero()) {
        orth_bad = "entry " + pos(i, j);
        break;
      }
    }
  }
  rep.add("hodge_orthogonality", orth_bad.empty(), orth_bad);

  std::string nondeg_bad;
  for (int level : std::set<int>(l.begin(), l.end())) {
    const auto rows = indices_with(l, level);
    const auto cols = indices_with(l, -level);
    if (rows.size() != cols.size() || rows.size() > 16 || determinant(sub_matrix(m, rows, cols)).is_zero()) {
      nondeg_bad = "levels " + std::to_string(level) + "/2 and " + std::to_string(-level) + "/2";
      break;
    }
  }
  rep.add("graded_nondegenerate", nondeg_bad.empty(), nondeg_bad);
  return rep;
}

// ---------------------------------------------------------------------------
// Normal form objects

CheckReport check_dn(const DnObject& dn) {
  CheckReport rep;
  rep.order = dn.order();
  const int r = dn.dim();
  const int n = dn.n;
  const auto deg = dn.degrees();
  bool dims_ok = n >= 0;
  for (const auto& [k, v] : dn.graded_dims) dims_ok = dims_ok && v >= 0;
  const bool shapes = dims_ok && dn.pairing0.rows() == r && dn.pairing0.cols() == r && shape_ok(dn.a_series, r);
  rep.add("shape", shapes, "graded dimensions, pairing and A(q) sizes disagree");
  if (!shapes) return rep;

  bool range = true;
  for (const auto& [k, v] : dn.graded_dims) range = range && (v == 0 || (k >= -n && k <= n));
  rep.add("grading_range", range, "V_k nonzero outside [-n, n]");

  std::string bad;
  for (int i = 0; i < r && bad.empty(); ++i) {
    for (int j = 0; j < r; ++j) {
      if (!dn.a_series(i, j).is_zero() && deg[static_cast<std::size_t>(i)] != deg[static_cast<std::size_t>(j)] + 2) {
        bad = "A entry " + pos(i, j) + " does not raise degree by 2";
        break;
      }
    }
  }
  rep.add("a_degree", bad.empty(), bad);

  const Matrix a0 = dn.a_series.coefficient(0);
  bad.clear();
  for (int k = 1; k <= n; ++k) {
    const auto rows = indices_with(deg, k);
    const auto cols = indices_with(deg, -k);
    const Matrix block = sub_matrix(matrix_power(a0, k), rows, cols);
    if (rows.size() != cols.size() || rank(block) != static_cast<int>(rows.size())) {
      bad = "A(0)^" + std::to_string(k) + ": V_" + std::to_string(-k) + " -> V_" + std::to_string(k);
      break;
    }
  }
  rep.add("hard_lefschetz", bad.empty(), bad);

  const Matrix& m0 = dn.pairing0;
  rep.add("self_adjoint", (a0.transpose() * m0 + m0 * a0).is_zero(),
          "A(0) is not self-adjoint with respect to the pairing");

  bad.clear();
  for (int i = 0; i < r && bad.empty(); ++i) {
    for (int j = 0; j < r; ++j) {
      if (!m0(i, j).is_zero() && deg[static_cast<std::size_t>(i)] + deg[static_cast<std::size_t>(j)] != 0) {
        bad = "entry " + pos(i, j);
        break;
      }
    }
  }
  rep.add("pairing_degree", bad.empty(), bad);
  rep.add("pairing_nondegenerate", r == 0 || !determinant(m0).is_zero(), "pairing is degenerate");
  rep.add("pairing_symmetry", m0 == m0.transpose() * sign_pow(n), "pairing is not (-1)^n-symmetric");

  auto top = dn.graded_dims.find(-n);
  rep.add("top_one_dimensional", top != dn.graded_dims.end() && top->second == 1, "dim V_{-n} != 1");

  bad.clear();
  if (n > 0) {
    const SeriesMatrix blk = sub_matrix(dn.a_series, indices_with(deg, -n + 2), indices_with(deg, -n));
    for (int k = 1; k < blk.order(); ++k) {
      if (!blk.coefficient(k).is_zero()) {
        bad = "V_{-n} -> V_{-n+2} component has a q^" + std::to_string(k) + " term";
        break;
      }
    }
  }
  rep.add("top_component_constant", bad.empty(), bad);

  // Needed for the pairing to extend as a constant: A(q) self-adjoint at every order.
  bad.clear();
  for (int k = 1; k < dn.order(); ++k) {
    const Matrix ak = dn.a_series.coefficient(k);
    if (!(ak.transpose() * m0 + m0 * ak).is_zero()) {
      bad = "q^" + std::to_string(k) + " coefficient of A is not self-adjoint";
      break;
    }
  }
  rep.add("self_adjoint_all_orders", bad.empty(), bad);
  return rep;
}

void validate(const DnObject& dn) {
  const CheckReport rep = check_dn(dn);
  for (const auto& r : rep.results) {
    if (!r.pass) throw Error(ErrorCode::InvalidDnObject, r.name + (r.detail.empty() ? "" : ": " + r.detail));
  }
}

GeometricVHS dn_to_geometric(const DnObject& dn) {
  const auto deg = dn.degrees();
  GeometricVHS out;
  out.dimension_parity = dn.n % 2;
  for (int k : deg) out.levels.push_back(-k);
  out.connection = -dn.a_series;
  out.pairing = extend_pairing(dn.a_series, dn.pairing0, PairingConvention::NormalForm, deg);
  return out;
}

ReesModule from_normal_form(const DnObject& dn) {
  validate(dn);
  return geometric_to_rees(dn_to_geometric(dn));
}

DnObject rescale_coordinate(const DnObject& dn, const Scalar& c) {
  if (c.is_zero()) throw Error(ErrorCode::ZeroScalar, "rescaling by zero");
  DnObject out = dn;
  const Scalar inv = c.inverse();
  for (int i = 0; i < dn.a_series.rows(); ++i) {
    for (int j = 0; j < dn.a_series.cols(); ++j) out.a_series.set(i, j, scale_variable(dn.a_series(i, j), inv));
  }
  return out;
}

DnObject flip_volume_sign(const DnObject& dn) {
  const int v = dn.volume_index();
  DnObject out = dn;
  for (int j = 0; j < dn.dim(); ++j) {
    out.a_series.set(v, j, -out.a_series(v, j));
    out.a_series.set(j, v, -out.a_series(j, v));
    out.pairing0(v, j) = -out.pairing0(v, j);
    out.pairing0(j, v) = -out.pairing0(j, v);
  }
  return out;
}

bool equal_up_to_sign(const DnObject& a, const DnObject& b) {
  if (a == b) return true;
  if (a.n != b.n || a.graded_dims != b.graded_dims) return false;
  return flip_volume_sign(a) == b;
}

DnObject chain_basis(const DnObject& dn) {
  validate(dn);
  for (int k = -dn.n; k <= dn.n; k += 2) {
    auto it = dn.graded_dims.find(k);
    if (it == dn.graded_dims.end() || it->second != 1) {
      throw Error(ErrorCode::InvalidDnObject, "chain basis needs every graded piece one-dimensional");
    }
  }
  const int r = dn.dim();
  if (r != dn.n + 1) throw Error(ErrorCode::InvalidDnObject, "chain basis needs every graded piece one-dimensional");
  const Matrix a0 = dn.a_series.coefficient(0);
  std::vector<Vector> cols;
  Vector v(static_cast<std::size_t>(r));
  v[static_cast<std::size_t>(dn.volume_index())] = 1;
  for (int j = 0; j < r; ++j) {
    cols.push_back(v);
    v = a0 * v;
  }
  const Matrix s = Matrix::from_columns(r, cols);
  const Matrix s_inv = inverse(s);
  DnObject out = dn;
  out.pairing0 = s.transpose() * dn.pairing0 * s;
  out.a_series = SeriesMatrix::constant(s_inv, dn.order()) * dn.a_series * SeriesMatrix::constant(s, dn.order());
  return out;
}

}  // namespace vshs
