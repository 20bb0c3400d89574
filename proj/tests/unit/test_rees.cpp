#include <doctest.h>

#include "oracles.hpp"
#include "vshs/error.hpp"
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

ReesModule rank_one(const Scalar& value, int order) {
  ReesModule m;
  m.degrees = {0};
  m.pairing.emplace(0, SeriesMatrix::constant(Matrix::from_rows({{value}}), order));
  return m;
}

}  // namespace

TEST_CASE("trivial module passes every axiom") {
  ReesModule m;
  m.degrees = {0, 0};
  m.pairing.emplace(0, SeriesMatrix::identity(2, 6));
  const CheckReport rep = verify_prevhs(m);
  CHECK(rep.ok());
  CHECK(rep.find("flatness")->pass);
}

TEST_CASE("u^-2 connection terms violate the valuation axiom") {
  ReesModule m;
  m.degrees = {0, 4};
  SeriesMatrix c(2, 2, 4);
  c.set_coeff(1, 0, 0, 1);
  m.connection.emplace(-2, c);
  const CheckReport rep = verify_prevhs(m);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.find("u_valuation")->pass);
}

TEST_CASE("rank one module in degree zero") {
  const ReesModule m = rank_one(Scalar(3), 5);
  const GeometricVHS g = rees_to_geometric(m);
  CHECK(g.levels == std::vector<int>{0});
  CHECK(g.parity_split() == std::pair<int, int>{1, 0});
  CHECK((*g.pairing)(0, 0) == Series::constant(Scalar(3), 5));
  CHECK(geometric_to_rees(g) == m);
}

TEST_CASE("pairing of degree k against degree -k picks up i^-k") {
  for (int k : {-3, -2, -1, 1, 2, 3}) {
    ReesModule m;
    m.degrees = {k, -k};
    m.dimension_parity = 0;
    SeriesMatrix p(2, 2, 3);
    p.set_coeff(0, 1, 0, 1);
    // symmetry (-1)^{n + d_j + m} at u^0
    p.set_coeff(1, 0, 0, sign_pow(-k));
    m.pairing.emplace(0, p);
    const GeometricVHS g = rees_to_geometric(m);
    CHECK((*g.pairing)(0, 1)[0] == i_pow(-k));
    CHECK(geometric_to_rees(g) == m);
  }
}

TEST_CASE("random Rees modules round trip exactly") {
  Rng rng(101);
  for (int t = 0; t < 30; ++t) {
    const ReesModule m = random_rees(rng, rng.uniform(1, 5), rng.uniform(2, 6));
    const GeometricVHS g = rees_to_geometric(m);
    // independent twist oracle
    if (g.pairing) {
      for (int i = 0; i < m.rank(); ++i) {
        for (int j = 0; j < m.rank(); ++j) {
          const int s = m.degrees[static_cast<std::size_t>(i)] + m.degrees[static_cast<std::size_t>(j)];
          Series expected(m.order());
          if (s % 2 == 0 && m.pairing.count(s / 2) != 0) {
            expected = m.pairing.at(s / 2)(i, j) * i_pow(m.degrees[static_cast<std::size_t>(j)]);
          }
          CHECK((*g.pairing)(i, j) == expected);
        }
      }
    }
    CHECK(geometric_to_rees(g) == m);
    CHECK(geometric_to_rees(g, m.degrees) == m);
  }
}

TEST_CASE("inconsistent degree lifts are refused") {
  const GeometricVHS g = rees_to_geometric(rank_one(Scalar(1), 3));
  CHECK(code_of([&] { geometric_to_rees(g, std::vector<int>{2}); }) == ErrorCode::InconsistentLift);
  CHECK(code_of([&] { geometric_to_rees(g, std::vector<int>{0, 0}); }) == ErrorCode::InconsistentLift);
}

TEST_CASE("shape errors") {
  ReesModule m;
  m.degrees = {0, 2};
  m.connection.emplace(0, SeriesMatrix(3, 3, 2));
  CHECK(code_of([&] { rees_to_geometric(m); }) == ErrorCode::NotFree);
}

TEST_CASE("random normal forms satisfy the invariant suite") {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const DnObject dn = random_dn(rng, rng.uniform(0, 4), 6);
    const CheckReport rep = check_dn(dn);
    CHECK(rep.ok());
    const ReesModule m = from_normal_form(dn);
    const CheckReport pre = verify_prevhs(m);
    INFO(pre.failures());
    CHECK(pre.ok());
    const GeometricVHS g = dn_to_geometric(dn);
    const CheckReport geo = check_geometric(g);
    INFO(geo.failures());
    CHECK(geo.ok());
    CHECK(rees_to_geometric(m) == g);
  }
}

TEST_CASE("D_0 with a single point is the trivial module") {
  DnObject dn;
  dn.n = 0;
  dn.graded_dims = {{0, 1}};
  dn.pairing0 = Matrix::identity(1);
  dn.a_series = SeriesMatrix(1, 1, 4);
  const ReesModule m = from_normal_form(dn);
  CHECK(m.rank() == 1);
  CHECK(m.canonicalized().connection.empty());
  CHECK(verify_prevhs(m).ok());
}

TEST_CASE("check_dn names the failing invariant") {
  Rng rng(5);
  const DnObject good = random_dn(rng, 3, 4, 1);
  SUBCASE("A(0) not self-adjoint") {
    DnObject bad = good;
    // e0 -> e1 changes while its mirror e2 -> e3 does not
    bad.a_series.set_coeff(1, 0, 0, bad.a_series.coefficient(0)(1, 0) + Scalar(1));
    const CheckReport rep = check_dn(bad);
    CHECK_FALSE(rep.find("self_adjoint")->pass);
    CHECK(code_of([&] { validate(bad); }) == ErrorCode::InvalidDnObject);
    CHECK(code_of([&] { from_normal_form(bad); }) == ErrorCode::InvalidDnObject);
  }
  SUBCASE("nonconstant top component") {
    DnObject bad = good;
    bad.a_series.set_coeff(1, 0, 2, Scalar(1));
    CHECK_FALSE(check_dn(bad).find("top_component_constant")->pass);
  }
  SUBCASE("hard Lefschetz") {
    DnObject bad = good;
    bad.a_series.set_coeff(2, 1, 0, Scalar(0));
    bad.a_series.set_coeff(1, 0, 0, Scalar(0));
    CHECK_FALSE(check_dn(bad).ok());
    CHECK_FALSE(check_dn(bad).find("hard_lefschetz")->pass);
  }
  SUBCASE("pairing symmetry") {
    DnObject bad = good;
    bad.pairing0(0, 3) += Scalar(1);
    CHECK_FALSE(check_dn(bad).ok());
  }
}

TEST_CASE("geometric checks catch Griffiths violations") {
  GeometricVHS g;
  g.levels = {3, 1, -1, -3};
  g.connection = SeriesMatrix(4, 4, 3);
  g.connection.set_coeff(3, 0, 1, Scalar(1));  // level 3 -> level -3 jumps three steps
  CHECK_FALSE(check_geometric(g).find("griffiths_transversality")->pass);
}
