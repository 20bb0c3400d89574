#include <doctest.h>

#include "oracles.hpp"
#include "vshs/error.hpp"
#include "vshs/picard_fuchs.hpp"
#include "vshs/vshs.hpp"

using namespace vshs;
using namespace vshs::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

PFOperator quintic() {
  return hypergeometric_operator(Scalar(3125), Scalar::rational(1, 5), Scalar::rational(2, 5));
}

/// True if every q-coefficient of `a` maps doubled level L only to level L - 2.
bool pure_degree_minus_one(const SeriesMatrix& a, const std::vector<int>& levels) {
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (levels[static_cast<std::size_t>(i)] != levels[static_cast<std::size_t>(j)] - 2 && !a(i, j).is_zero()) return false;
    }
  }
  return true;
}

GeometricVHS constant_regular(int r, int order) {
  GeometricVHS g;
  for (int j = 0; j < r; ++j) g.levels.push_back(r - 1 - 2 * j);
  g.dimension_parity = (r - 1) % 2;
  Matrix n(r, r);
  for (int j = 0; j + 1 < r; ++j) n(j + 1, j) = 1;
  g.connection = SeriesMatrix::constant(n, order);
  return g;
}

}  // namespace

TEST_CASE("formal flat gauge") {
  const int order = 8;
  SUBCASE("constant nilpotent connection") {
    const GeometricVHS g = constant_regular(4, order);
    CHECK(formal_flat_gauge(g.connection) == SeriesMatrix::identity(4, order));
  }
  SUBCASE("residual vanishes for N + q C") {
    Rng rng(3);
    for (int t = 0; t < 5; ++t) {
      SeriesMatrix b = SeriesMatrix::constant(jordan_matrix({2, 1}), order);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) b.set_coeff(i, j, 1, rng.rational());
      }
      const SeriesMatrix u = formal_flat_gauge(b);
      const Matrix n = b.coefficient(0);
      CHECK(u.coefficient(0) == Matrix::identity(3));
      CHECK((theta(u) - b * u + u * SeriesMatrix::constant(n, order)).is_zero());
    }
  }
  SUBCASE("quintic companion connection") {
    const GeometricVHS g = companion_vhs(quintic(), 12);
    const SeriesMatrix u = formal_flat_gauge(g.connection);
    const SeriesMatrix n = SeriesMatrix::constant(g.connection.coefficient(0), 12);
    CHECK((theta(u) - g.connection * u + u * n).is_zero());
  }
  SUBCASE("non-nilpotent residue") {
    CHECK(code_of([&] { formal_flat_gauge(SeriesMatrix::identity(2, 3)); }) == ErrorCode::NotNilpotentResidue);
  }
}

TEST_CASE("Hodge-Tate split") {
  SUBCASE("regular nilpotent with the standard flag") {
    const GeometricVHS g = constant_regular(4, 6);
    const HodgeTateFrame f = hodge_tate_split(g);
    CHECK(f.frame == SeriesMatrix::identity(4, 6));
    CHECK(f.levels == g.levels);
  }
  SUBCASE("flag not transverse to the weight filtration") {
    GeometricVHS g = constant_regular(4, 6);
    g.levels = {1, 3, -1, -3};
    CHECK(code_of([&] { hodge_tate_split(g); }) == ErrorCode::NotHodgeTate);
  }
  SUBCASE("quintic frame gives a pure degree -1 connection") {
    const GeometricVHS g = companion_vhs(quintic(), 10);
    const CanonicalConnection cc = to_canonical_connection(g);
    CHECK(pure_degree_minus_one(cc.connection, cc.split.levels));
    // in the canonical coordinate only the middle entry depends on Q
    const DnObject dn = to_normal_form(g, Scalar(5)).dn;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == 2 && j == 1) {
          CHECK_FALSE(dn.a_series(i, j)[1].is_zero());
          continue;
        }
        for (int k = 1; k < 10; ++k) CHECK(dn.a_series(i, j)[k] == Scalar(0));
      }
    }
  }
}

TEST_CASE("canonical connection of a constant residue is the residue") {
  const GeometricVHS g = constant_regular(3, 5);
  const CanonicalConnection cc = to_canonical_connection(g);
  CHECK(cc.connection == g.connection);
}

TEST_CASE("degree violations are reported") {
  // level 2 -> level -2 at order q breaks transversality; the split survives
  // at q = 0 but the connection cannot become pure of degree -1
  GeometricVHS g = constant_regular(3, 5);
  g.connection.set_coeff(2, 0, 1, Scalar(1));
  CHECK_FALSE(check_geometric(g).ok());
  CHECK(code_of([&] { to_canonical_connection(g); }) == ErrorCode::DegreeViolation);
}

TEST_CASE("level-preserving q-terms are gauged away") {
  GeometricVHS g = constant_regular(2, 6);
  g.connection.set_coeff(0, 0, 1, Scalar(1));
  g.connection.set_coeff(1, 1, 1, Scalar(-1));
  const CanonicalConnection cc = to_canonical_connection(g);
  CHECK(pure_degree_minus_one(cc.connection, cc.split.levels));
}

TEST_CASE("canonical coordinate examples") {
  const int order = 8;
  const std::vector<int> levels{1, -1};
  SUBCASE("constant a") {
    SeriesMatrix a(2, 2, order);
    a.set_coeff(1, 0, 0, Scalar(2));
    CHECK(canonical_coordinate(a, levels).coordinate == Series::variable(order));
  }
  SUBCASE("h = 1 + q gives q e^q") {
    SeriesMatrix a(2, 2, order);
    a.set_coeff(1, 0, 0, Scalar(1));
    a.set_coeff(1, 0, 1, Scalar(1));
    const CanonicalCoordinate c = canonical_coordinate(a, levels);
    CHECK(c.coordinate == Series::variable(order) * exp(Series::variable(order)));
    CHECK(c.ks_factor == Series::from_polynomial(std::vector<Scalar>{1, 1}, order));
  }
  SUBCASE("zero Kodaira-Spencer class") {
    SeriesMatrix a(2, 2, order);
    CHECK(code_of([&] { canonical_coordinate(a, levels); }) == ErrorCode::ZeroKS);
  }
  SUBCASE("non-proportional a") {
    SeriesMatrix a(3, 3, order);
    a.set_coeff(1, 0, 0, Scalar(1));
    a.set_coeff(2, 0, 1, Scalar(1));
    CHECK(code_of([&] { canonical_coordinate(a, {1, -1, -1}); }) == ErrorCode::NotProportional);
  }
}

TEST_CASE("extend_pairing") {
  const int order = 16;
  SUBCASE("A = 0 keeps M0") {
    const Matrix m0 = Matrix::from_rows({{0, 1}, {1, 0}});
    CHECK(extend_pairing(SeriesMatrix(2, 2, order), m0, PairingConvention::Geometric) == SeriesMatrix::constant(m0, order));
  }
  SUBCASE("constant compatible A keeps M0") {
    const DnObject dn = [] {
      Rng rng(1);
      return random_dn(rng, 3, 1, 1);
    }();
    const SeriesMatrix a = SeriesMatrix::constant(dn.a_series.coefficient(0), order);
    CHECK(extend_pairing(a, dn.pairing0, PairingConvention::NormalForm, dn.degrees()) ==
          SeriesMatrix::constant(dn.pairing0, order));
  }
  SUBCASE("random compatible inputs satisfy the recursion") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
      const DnObject dn = random_dn(rng, rng.uniform(1, 4), order);
      const SeriesMatrix b = -dn.a_series;
      const SeriesMatrix m = extend_pairing(b, dn.pairing0, PairingConvention::Geometric);
      CHECK(m.coefficient(0) == dn.pairing0);
      CHECK((theta(m) - b.transpose() * m - m * b).is_zero());
      CHECK(extend_pairing(dn.a_series, dn.pairing0, PairingConvention::NormalForm, dn.degrees()) == m);
    }
  }
  SUBCASE("q-dependent solutions") {
    Rng rng(78);
    int moving = 0;
    for (int t = 0; t < 20; ++t) {
      const DnObject dn = random_dn(rng, rng.uniform(2, 4), 6);
      const SeriesMatrix b = random_compatible_connection(rng, dn, order);
      const SeriesMatrix m = extend_pairing(b, dn.pairing0, PairingConvention::Geometric);
      CHECK(m.coefficient(0) == dn.pairing0);
      CHECK((theta(m) - b.transpose() * m - m * b).is_zero());
      if (m != SeriesMatrix::constant(dn.pairing0, order)) ++moving;
    }
    CHECK(moving > 10);
  }
  SUBCASE("incompatible residue") {
    const Matrix m0 = Matrix::from_rows({{0, 1}, {1, 0}});
    SeriesMatrix a(2, 2, 4);
    a.set_coeff(0, 0, 0, Scalar(1));
    CHECK(code_of([&] { extend_pairing(a, m0, PairingConvention::Geometric); }) == ErrorCode::ResidueNotCompatible);
  }
}

TEST_CASE("pairing grading check") {
  const Matrix anti = Matrix::from_rows({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  CHECK(pairing_grading_check(anti, {2, 0, -2}).ok());
  Matrix bad = anti;
  bad(0, 1) = 1;
  const CheckReport rep = pairing_grading_check(bad, {2, 0, -2});
  CHECK_FALSE(rep.ok());
  CHECK(rep.failures().find("block") != std::string::npos);
  const Matrix degenerate = Matrix::from_rows({{0, 0, 1}, {0, 0, 0}, {1, 0, 0}});
  CHECK_FALSE(pairing_grading_check(degenerate, {2, 0, -2}).ok());
}

TEST_CASE("normal form round trips") {
  Rng rng(2024);
  const int order = 8;
  SUBCASE("plain") {
    for (int t = 0; t < 10; ++t) {
      const DnObject dn = random_dn(rng, rng.uniform(3, 4), order);
      const NormalFormReport rep = to_normal_form(rees_to_geometric(from_normal_form(dn)), std::nullopt);
      CHECK(equal_up_to_sign(rep.dn, dn));
      CHECK(rep.mirror_coordinate == Series::variable(order));
    }
  }
  SUBCASE("after a filtration-preserving gauge") {
    for (int t = 0; t < 10; ++t) {
      const DnObject dn = random_dn(rng, rng.uniform(2, 4), order);
      const GeometricVHS g0 = dn_to_geometric(dn);
      const GeometricVHS g = gauge_transform(g0, random_flag_gauge(rng, g0.levels, order));
      CHECK(check_geometric(g).ok());
      const NormalFormReport rep = to_normal_form(g, std::nullopt);
      CHECK(equal_up_to_sign(rep.dn, dn));
    }
  }
  SUBCASE("after a coordinate change") {
    for (int t = 0; t < 6; ++t) {
      const DnObject dn = random_dn(rng, 3, order + 1);
      const Series phi = random_coordinate_change(rng, order + 1);
      const GeometricVHS g = pullback(dn_to_geometric(dn), phi);
      CHECK(g.order() == order);
      const NormalFormReport rep = to_normal_form(g, std::nullopt);
      DnObject expected = dn;
      expected.a_series = dn.a_series.truncated(order);
      CHECK(equal_up_to_sign(rep.dn, expected));
      // the canonical coordinate undoes phi
      CHECK(compose(rep.mirror_coordinate, reverse(phi.truncated(order))) == Series::variable(order));
    }
  }
  SUBCASE("volume normalisation") {
    const DnObject dn = random_dn(rng, 3, order, 1);
    const GeometricVHS g = dn_to_geometric(dn);
    const Scalar current = (dn.pairing0 * matrix_power(dn.a_series.coefficient(0), 3))(0, 0) / volume_twist(3);
    const NormalFormReport same = to_normal_form(g, current);
    CHECK(equal_up_to_sign(same.dn, dn));
    const NormalFormReport scaled = to_normal_form(g, current * Scalar(4));
    CHECK((scaled.dn.pairing0 * matrix_power(scaled.dn.a_series.coefficient(0), 3))(0, 0) ==
          volume_twist(3) * current * Scalar(4));
    CHECK(code_of([&] { to_normal_form(g, current * Scalar(2)); }) == ErrorCode::NotASquare);
  }
}

TEST_CASE("constant connections have trivial normal forms") {
  GeometricVHS g = constant_regular(4, 6);
  const NormalFormReport rep = to_normal_form(g, Scalar(5));
  CHECK(rep.dn.a_series == SeriesMatrix::constant(rep.dn.a_series.coefficient(0), 6));
  CHECK(yukawa(rep.dn) == Series::constant(Scalar(5), 6));
  CHECK(code_of([&] { to_normal_form(g, std::nullopt); }) == ErrorCode::PairingNotDetermined);
}

TEST_CASE("Yukawa coupling: direct route equals the matrix-entry route") {
  Rng rng(55);
  for (int t = 0; t < 5; ++t) {
    const DnObject dn = chain_basis(random_dn(rng, 3, 8, 1));
    // in the chain basis e_{k+1} = A(0) e_k; the middle entry carries g
    const Scalar vol = (dn.pairing0 * matrix_power(dn.a_series.coefficient(0), 3))(0, 0) / volume_twist(3);
    const Series g = dn.a_series(2, 1) * invert(Series::constant(dn.a_series(2, 1)[0], 8));
    CHECK(yukawa(dn) == g * vol);
    // the flat-bundle connection is theta - A
    CHECK(yukawa(dn_to_geometric(dn)) == yukawa(dn) * volume_twist(3) * Scalar(-1));
  }
}

TEST_CASE("coordinate rescaling") {
  Rng rng(8);
  const DnObject dn = random_dn(rng, 3, 8);
  CHECK(rescale_coordinate(dn, Scalar(1)) == dn);
  const Scalar c = Scalar::rational(-3, 2);
  CHECK(rescale_coordinate(rescale_coordinate(dn, c), c.inverse()) == dn);
  CHECK(code_of([&] { rescale_coordinate(dn, Scalar(0)); }) == ErrorCode::ZeroScalar);
  const DnObject expected = rescale_coordinate(dn, c);
  for (int k = 0; k < 8; ++k) CHECK(expected.a_series.coefficient(k) == dn.a_series.coefficient(k) * pow(c.inverse(), static_cast<unsigned>(k)));
  const NormalFormReport rep = to_normal_form(rescale_coordinate(dn_to_geometric(dn), c), std::nullopt);
  CHECK(equal_up_to_sign(rep.dn, expected));
}

TEST_CASE("canonical coordinate is invariant under reparametrisation") {
  const int order = 9;
  const GeometricVHS g = companion_vhs(quintic(), order + 1);
  Rng rng(4);
  const Series phi = random_coordinate_change(rng, order + 1);
  const Series q_direct = to_normal_form(g, Scalar(5)).mirror_coordinate.truncated(order);
  const Series q_pulled = to_normal_form(pullback(g, phi), Scalar(5)).mirror_coordinate;
  CHECK(q_pulled == compose(q_direct, phi.truncated(order)));
}

TEST_CASE("sign flips of the volume vector") {
  Rng rng(12);
  const DnObject dn = random_dn(rng, 4, 5);
  const DnObject f = flip_volume_sign(dn);
  CHECK_FALSE(f == dn);
  CHECK(equal_up_to_sign(f, dn));
  CHECK(check_dn(f).ok());
  CHECK(flip_volume_sign(f) == dn);
}
