#include <wqt/fockoracle.hpp>

#include <gtest/gtest.h>

using namespace wqt;

namespace {
const EvalPoint kPt(BigRat(2, 3), 3, 2);
}

TEST(FockSpace, BasisCounts) {
  EXPECT_EQ(FockSpace(1, 2).dim(), 4);  // {}, {1}, {1,1}, {2}
  EXPECT_EQ(FockSpace(2, 1).dim(), 3);  // {}, {1_c1}, {1_c2}
  EXPECT_EQ(FockSpace(2, 0).dim(), 1);
  EXPECT_EQ(FockSpace(2, 3).dim(), 18);
}

TEST(FockOracle, HeisenbergInterior) {
  ParamTable t(standard_diagram(1, 0), kPt);
  FockSpace space(t.L(), 3);
  auto rep = oracle_check_heisenberg(t, space);
  EXPECT_TRUE(rep.pass);
  EXPECT_GT(rep.elements_compared, 0);
}

TEST(FockOracle, VacuumExpectations) {
  ParamTable t(standard_diagram(1, 0), kPt);
  FockSpace space(t.L(), 2);
  FockOperators ops(t, space);
  // <vac|T_1(z)|vac> = |I_eps| + [r-1] |I_delta| (constant in z).
  BigRat expect = BigRat(2) + t.bracket(XExponent(BigRat(-1), BigRat(1), BigRat(0)), 1);
  WCurrent t1(t, 1);
  int vac = space.index(FockState{});
  BigRat got(0);
  for (const auto& e : t1.entries()) {
    auto mm = ops.monomial_modes(e.mono);
    if (mm.count(0)) got += e.coeff * mm[0][vac][vac];
  }
  EXPECT_EQ(got, expect);
  // Large positive modes annihilate everything in the truncated space.
  auto modes = ops.monomial_modes(WMonomial({1, 0, 0}));
  for (auto& [n, M] : modes) EXPECT_LE(std::abs(n), 2 * space.cutoff());
}

TEST(FockOracle, ContractionRecovery) {
  ParamTable t(standard_diagram(1, 0), kPt);
  FockSpace space(t.L(), 3);
  auto rep = oracle_check_contraction(t, space);
  EXPECT_TRUE(rep.pass);
}

TEST(FockOracle, BaseQuadraticSafeWindow) {
  ParamTable t(standard_diagram(1, 0), kPt);
  FockSpace space(t.L(), 3);
  auto rep = oracle_check_base_quadratic(t, space, 1, 1);
  EXPECT_TRUE(rep.pass);
  EXPECT_GT(rep.elements_compared, 1000);
  for (auto& f : rep.failures) ADD_FAILURE() << f;
}

TEST(FockOracle, WindowGuard) {
  ParamTable t(standard_diagram(1, 0), kPt);
  FockSpace space(t.L(), 2);
  EXPECT_THROW(oracle_check_base_quadratic(t, space, 1, 5), std::invalid_argument);
}

TEST(FockOracle, StableUnderCutoffGrowth) {
  // Safe matrix elements must not change when the cutoff grows.
  ParamTable t(standard_diagram(1, 0), kPt);
  FockSpace s2(t.L(), 2), s3(t.L(), 3);
  FockOperators o2(t, s2), o3(t, s3);
  auto m2 = o2.monomial_modes(WMonomial({0, 0, 1}));
  auto m3 = o3.monomial_modes(WMonomial({0, 0, 1}));
  for (auto& [n, M] : m2) {
    if (!m3.count(n)) continue;
    for (int a = 0; a < s2.dim(); ++a)
      for (int b = 0; b < s2.dim(); ++b) {
        int a3 = s3.index(s2.state(a)), b3 = s3.index(s2.state(b));
        // Rows of degree <= 2 are exact in both spaces.
        EXPECT_EQ(M[a][b], m3[n][a3][b3]) << "n=" << n;
      }
  }
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
