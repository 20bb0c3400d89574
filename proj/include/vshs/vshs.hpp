#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vshs/matrix.hpp"
#include "vshs/nilpotent.hpp"
#include "vshs/series.hpp"
#include "vshs/series_matrix.hpp"

namespace vshs {

// ---------------------------------------------------------------------------
// Data types
// ---------------------------------------------------------------------------

/// A free graded K[[u]]-module with a connection allowed a simple pole in u
/// and a sesquilinear pairing. Both are stored as Laurent polynomials in u
/// whose coefficients are matrices over K = C((q)) truncated mod q^N.
///
/// Conventions: nabla_{q d/dq} e_j = sum_{m,i} u^m connection[m](i, j) e_i and
/// (e_i, e_j) = sum_m u^m pairing[m](i, j). Missing keys are zero.
struct ReesModule {
  std::vector<int> degrees;
  int dimension_parity = 0;
  std::map<int, SeriesMatrix> connection;
  std::map<int, SeriesMatrix> pairing;

  int rank() const { return static_cast<int>(degrees.size()); }
  int order() const;
  /// Same module with identically-zero u-coefficients removed.
  ReesModule canonicalized() const;

  friend bool operator==(const ReesModule& a, const ReesModule& b);
};

/// Filtered flat bundle presentation: frame e_0..e_{r-1}, adapted to the
/// Hodge filtration, with nabla_{q d/dq} e_j = sum_i B_ij e_i and
/// M_ij = (e_i, e_j).
///
/// Hodge levels are stored doubled (2p), so odd levels belong to V_odd.
struct GeometricVHS {
  std::vector<int> levels;
  int dimension_parity = 0;
  SeriesMatrix connection;
  std::optional<SeriesMatrix> pairing;

  int rank() const { return static_cast<int>(levels.size()); }
  int order() const { return connection.order(); }
  /// (dim V_ev, dim V_odd).
  std::pair<int, int> parity_split() const;

  friend bool operator==(const GeometricVHS& a, const GeometricVHS& b) {
    return a.levels == b.levels && a.dimension_parity == b.dimension_parity &&
           a.connection == b.connection && a.pairing == b.pairing;
  }
};

/// Normal form (V, <.,.>, A(q)). The basis of V is ordered by degree, lowest
/// first, with `graded_dims[k]` vectors in degree k. A(q) raises degree by 2.
///
/// `pairing0` is the pairing (.,.)_0 at q = 0 of the flat-bundle picture,
/// which carries the i^k twist of the Rees correspondence; with this
/// convention A(0) is skew for `pairing0`, equivalently self-adjoint for the
/// untwisted form i^{-deg b} <a, b>.
struct DnObject {
  int n = 0;
  std::map<int, int> graded_dims;
  Matrix pairing0;
  SeriesMatrix a_series;

  int dim() const;
  int order() const { return a_series.order(); }
  /// Degree of each basis vector.
  std::vector<int> degrees() const;
  /// Index of the spanning vector of V_{-n}; throws NoVolumeForm if V_{-n} is
  /// not one-dimensional.
  int volume_index() const;

  friend bool operator==(const DnObject& a, const DnObject& b) {
    return a.n == b.n && a.graded_dims == b.graded_dims && a.pairing0 == b.pairing0 &&
           a.a_series == b.a_series;
  }
};

struct AxiomResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

/// Pass/fail per named axiom, verified mod q^order.
struct CheckReport {
  int order = 0;
  std::vector<AxiomResult> results;

  bool ok() const;
  const AxiomResult* find(const std::string& name) const;
  void add(std::string name, bool pass, std::string detail = {});
  /// Failing axioms, comma-separated.
  std::string failures() const;
};

struct NormalFormReport {
  /// Canonical coordinate Q(q) with Q'(0) = c1 = 1.
  Series mirror_coordinate;
  Scalar c1{1};
  /// Frame realising the flat trivialisation, as columns in the input frame,
  /// written in the input coordinate q.
  SeriesMatrix gauge;
  DnObject dn;
  int volume_index = 0;
  /// The normalised volume vector is only determined up to sign.
  bool sign_ambiguity = true;
};

// ---------------------------------------------------------------------------
// Rees correspondence
// ---------------------------------------------------------------------------

CheckReport verify_prevhs(const ReesModule& module);

GeometricVHS rees_to_geometric(const ReesModule& module);

/// Lifts each frame vector to degree -level. `degree_choice`, when given, must
/// agree with that lift; otherwise InconsistentLift.
ReesModule geometric_to_rees(const GeometricVHS& vhs,
                             const std::optional<std::vector<int>>& degree_choice = std::nullopt);

/// Griffiths transversality, parity blocks and, when present, symmetry,
/// covariant constancy and Hodge-compatibility of the pairing.
CheckReport check_geometric(const GeometricVHS& vhs);

// ---------------------------------------------------------------------------
// Normalisation
// ---------------------------------------------------------------------------

/// Unique U with U(0) = 1 and theta U = B U - U N, N = B(0) nilpotent.
SeriesMatrix formal_flat_gauge(const SeriesMatrix& connection);

struct HodgeTateFrame {
  SeriesMatrix flat_gauge;         // U(q), connection becomes N in the frame U
  SeriesMatrix frame;              // T(q) = U(q) P(q), columns in the input frame
  std::vector<int> levels;         // doubled level of each frame column
  WeightFiltration weights;        // of the residue
};

HodgeTateFrame hodge_tate_split(const GeometricVHS& vhs);

struct CanonicalConnection {
  HodgeTateFrame split;
  /// nabla_{q d/dq} = theta + A(q) in the frame `split.frame`.
  SeriesMatrix connection;
};

/// Throws DegreeViolation unless A(q) maps level L to level L - 2 only.
CanonicalConnection to_canonical_connection(const GeometricVHS& vhs);

struct CanonicalCoordinate {
  Series coordinate;  // Q(q)
  Series ks_factor;   // h(q) with a(q) = h(q) a(0)
};

/// `levels` are the doubled levels (or negated degrees) of the basis of A.
CanonicalCoordinate canonical_coordinate(const SeriesMatrix& a, const std::vector<int>& levels);

enum class PairingConvention {
  /// `a` is the connection matrix of nabla = theta + a; requires
  /// a(0)^t M0 + M0 a(0) = 0.
  Geometric,
  /// `a` is the A(q) of a normal form (nabla = theta - u^{-1} A); requires
  /// A(0) self-adjoint for the untwisted form i^{-deg j} M0_ij.
  NormalForm,
};

/// Unique M(q) with M(0) = M0 and theta M = B^t M + M B for the connection
/// matrix B (B = a, or B = -a in NormalForm convention).
SeriesMatrix extend_pairing(const SeriesMatrix& a, const Matrix& m0, PairingConvention convention,
                            const std::vector<int>& degrees = {});

/// Block pattern of a pairing at q = 0 against a grading: zero unless the
/// gradings sum to zero, nondegenerate on each (g, -g) block.
CheckReport pairing_grading_check(const Matrix& m0, const std::vector<int>& grading);

/// Normal form of a Hodge-Tate VSHS. `volume` fixes the top pairing value
/// <e_vol, A(0)^n e_vol> = (-1)^{n(n+1)/2} i^n volume. Without a pairing on
/// the input it is required; with one it is optional.
NormalFormReport to_normal_form(const GeometricVHS& vhs, const std::optional<Scalar>& volume);

/// Flat-bundle presentation of a normal form: frame = basis of V, levels =
/// -degrees, connection -A(q), pairing extended covariantly.
GeometricVHS dn_to_geometric(const DnObject& dn);

ReesModule from_normal_form(const DnObject& dn);

/// A(Q) -> A(Q/c).
DnObject rescale_coordinate(const DnObject& dn, const Scalar& c);

/// Basis e_{k+1} = A(0) e_k starting from the volume vector; requires every
/// graded piece to be one-dimensional.
DnObject chain_basis(const DnObject& dn);

/// Replaces the volume basis vector e_vol by -e_vol.
DnObject flip_volume_sign(const DnObject& dn);
/// Equality modulo the overall sign of the normalised volume vector.
bool equal_up_to_sign(const DnObject& a, const DnObject& b);

/// Named invariant suite of a normal form object.
CheckReport check_dn(const DnObject& dn);
/// Throws InvalidDnObject naming the first failing invariant.
void validate(const DnObject& dn);

/// (-1)^{n(n+1)/2} i^n.
Scalar volume_twist(int n);

/// (Omega, nabla^n Omega) / volume_twist(n) for the normalised volume vector,
/// with nabla = theta + A(q) and the covariantly constant pairing.
Series yukawa(const DnObject& dn);

/// (Omega, nabla^n Omega) with nabla = theta + B in the given frame, Omega the
/// unique top-level frame vector and n its doubled level. Needs a pairing.
Series yukawa(const GeometricVHS& vhs);

/// Coordinate change x = phi(q): B -> (theta phi / phi) B(phi), M -> M(phi).
/// The result is known to one order less than min(order, order(phi)).
GeometricVHS pullback(const GeometricVHS& vhs, const Series& phi);

/// Exact special case phi(q) = q / c.
GeometricVHS rescale_coordinate(const GeometricVHS& vhs, const Scalar& c);

/// New frame e'_j = sum_i g_ij e_i: B -> g^{-1}(B g + theta g), M -> g^t M g.
/// Levels are kept, so g should preserve the Hodge flag.
GeometricVHS gauge_transform(const GeometricVHS& vhs, const SeriesMatrix& g);

}  // namespace vshs
