#include <wqt/freefield.hpp>
#include <wqt/wcurrents.hpp>

#include <gtest/gtest.h>

using namespace wqt;

namespace {

const EvalPoint kPt(BigRat(2, 3), 3, 2);
const std::vector<EvalPoint> kPts = {EvalPoint(BigRat(2, 3), 3, 2), EvalPoint(BigRat(1, 2), 2, 1),
                                     EvalPoint(BigRat(3, 5), 5, 3)};
const std::vector<std::pair<int, int>> kMN = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}};

}  // namespace

TEST(BuildParams, ExponentTable) {
  ParamTable t(standard_diagram(1, 0), kPt);
  // q_{1,1} = x^0 (D(1,0) = 0), q_{2,1} = x^{2r}.
  EXPECT_EQ(t.q_exp(1, 1), XExponent::zero());
  EXPECT_EQ(t.q_exp(2, 1), XExponent::r_(2));
  // s_j(m) = 1 for m > 0 in the paper gauge.
  EXPECT_EQ(t.s(1, 5), BigRat(1));
  EXPECT_EQ(t.s(2, 3), BigRat(1));
  // q_{j+1,j}/q_{j,j} = x^{2r} for every column.
  for (int j = 1; j <= t.L(); ++j)
    EXPECT_EQ(t.q_exp(j + 1, j) - t.q_exp(j, j), XExponent::r_(2));
}

TEST(BuildParams, RequiresRAboveOne) {
  // EvalPoint construction enforces p > q >= 1, so r > 1 always holds;
  // the guard still protects against degenerate points.
  EXPECT_THROW(EvalPoint(BigRat(1, 2), 2, 3), std::invalid_argument);
}

TEST(MutualLocality, PassesOnSmallRanks) {
  for (auto [M, N] : kMN) {
    ParamTable t(standard_diagram(M, N), kPt);
    auto rep = check_mutual_locality(t, 12);
    EXPECT_TRUE(rep.pass) << rep.summary();
  }
}

TEST(MutualLocality, ZeroModeHoldsInQr) {
  // The zero-mode identity is an identity of rational functions in r,
  // before any evaluation point enters.
  ParamTable t(standard_diagram(1, 1), kPt);
  for (int i = 1; i <= t.L() + 1; ++i)
    for (int j = 1; j <= t.L(); ++j) {
      RFunction lhs(BigRat(0));
      for (int k = 1; k <= t.L(); ++k) lhs = lhs + t.lam0(i, k) * t.A0().entry(k, j);
      EXPECT_EQ(lhs, RFunction::from_xexponent(t.qp_exp_diff(i, j)));
    }
}

TEST(MutualLocality, PerturbationFailsExactlyTheRow) {
  ParamTable t(standard_diagram(1, 0), kPt);
  t.perturb_lambda(1, 1, 1, BigRat(1));
  auto rep = check_mutual_locality(t, 4);
  EXPECT_FALSE(rep.pass);
  // Only i=1 rows can fail, at m=1.
  for (const auto& f : rep.failures) {
    EXPECT_NE(f.find("(1,"), std::string::npos) << f;
    EXPECT_NE(f.find(",1)"), std::string::npos) << f;
  }
}

TEST(LocalitySeries, MatchesRationalKernel) {
  for (auto [M, N] : kMN) {
    ParamTable t(standard_diagram(M, N), kPt);
    auto rep = check_locality_series(t, 10);
    EXPECT_TRUE(rep.pass) << rep.summary();
  }
}

TEST(LocalitySeries, ConstantTermIsQOverP) {
  ParamTable t(standard_diagram(1, 0), kPt);
  auto c = phi_lambda_screening(t, 2, 1, 6);
  BigRat qv = xpow_eval(t.q_exp(2, 1), kPt), pv = xpow_eval(t.p_exp(2, 1), kPt);
  EXPECT_EQ(c.inside.coeff(0), qv / pv);
  EXPECT_EQ(c.outside.coeff(0), BigRat(1));
}

TEST(T1Screening, PassesAndFermionicPMatches) {
  for (auto [M, N] : kMN) {
    ParamTable t(standard_diagram(M, N), kPt);
    auto rep = check_T1_screening(t, 12);
    EXPECT_TRUE(rep.pass) << rep.summary();
    for (int j = 1; j <= t.L(); ++j)
      if (t.in_jhat(j)) EXPECT_EQ(t.p_exp(j, j), t.p_exp(j + 1, j));
  }
}

TEST(Symmetry, HSymmetricAndTrivialAtDistance) {
  for (auto [M, N] : kMN) {
    ParamTable t(standard_diagram(M, N), kPt);
    EXPECT_TRUE(check_symmetry(t, 12).pass);
    EXPECT_TRUE(check_h_closed_forms(t, 12).pass);
  }
}

TEST(Symmetry, FermionicKernelIsOneMinusW) {
  ParamTable t(standard_diagram(1, 0), kPt);
  // Node 2 is fermionic for the standard A(1,0) system.
  TruncSeries h = h_series(t, 2, 2, 16);
  EXPECT_EQ(h.coeff(0), BigRat(1));
  EXPECT_EQ(h.coeff(1), BigRat(-1));
  for (long n = 2; n <= 16; ++n) EXPECT_EQ(h.coeff(n), BigRat(0));
}

TEST(ScreeningRelations, AllCases) {
  for (auto [M, N] : kMN) {
    ParamTable t(standard_diagram(M, N), kPt);
    auto rep = check_screening_relations(t, 10);
    EXPECT_TRUE(rep.pass) << rep.summary();
  }
}

TEST(VertexCommutation, ThetaRatioAndQuasiPeriodicity) {
  for (auto [M, N] : kMN) {
    ParamTable t(standard_diagram(M, N), kPt);
    auto rep = check_vertex_commutation(t, 10);
    EXPECT_TRUE(rep.pass) << rep.summary();
  }
}

TEST(Determinants, FormulaAndNonvanishing) {
  for (const auto& pt : kPts) {
    ParamTable t(standard_diagram(1, 0), pt);
    auto rep = check_det_A(t, 8);
    EXPECT_TRUE(rep.pass) << rep.summary();
    EXPECT_NE(det_A(t, 1), BigRat(0));
  }
  // The L=3, K=2 worked example: det A(0) = r^{-3} (r-1) 2r.
  ParamTable t(diagram_from_parities(3, {1, 3}), kPt);
  auto rep = check_det_A(t, 4);
  EXPECT_TRUE(rep.pass) << rep.summary();
}

TEST(Gauge, ShiftCovariance) {
  ParamTable t(standard_diagram(1, 1), kPt);
  t.set_shift_gauge(XExponent::one_(1));  // Lambda_i(z) -> Lambda_i(x z)
  // q and p exponents shift together; every check still passes.
  ParamTable base(standard_diagram(1, 1), kPt);
  EXPECT_EQ(t.q_exp(1, 1) - base.q_exp(1, 1), XExponent::one_(1));
  EXPECT_EQ(t.p_exp(2, 1) - base.p_exp(2, 1), XExponent::one_(1));
  EXPECT_EQ(t.lam(1, 1, 2) / base.lam(1, 1, 2), xpow_eval(XExponent::one_(2), kPt));
  EXPECT_TRUE(check_mutual_locality(t, 8).pass);
  EXPECT_TRUE(check_locality_series(t, 8).pass);
  EXPECT_TRUE(check_T1_screening(t, 8).pass);
  EXPECT_TRUE(check_symmetry(t, 8).pass);
  EXPECT_TRUE(check_det_A(t, 8).pass);
}

TEST(Gauge, BosonScalingCovariance) {
  ParamTable t(standard_diagram(1, 0), kPt);
  t.set_boson_gauge(1, BigRat(3, 2));
  t.set_boson_gauge(2, BigRat(-2, 7));
  EXPECT_TRUE(check_mutual_locality(t, 8).pass);
  EXPECT_TRUE(check_locality_series(t, 8).pass);
  EXPECT_TRUE(check_T1_screening(t, 8).pass);
  EXPECT_TRUE(check_symmetry(t, 8).pass);
  EXPECT_TRUE(check_det_A(t, 8).pass);
}

TEST(Falsifiability, QExponentPerturbation) {
  ParamTable t(standard_diagram(1, 0), kPt);
  t.perturb_q(1, 1, XExponent::one_(1));
  bool some_fail = !check_mutual_locality(t, 6).pass || !check_locality_series(t, 6).pass ||
                   !check_T1_screening(t, 6).pass;
  EXPECT_TRUE(some_fail);
}

TEST(StructFn, SeriesMatchesProductData) {
  for (auto [M, N] : kMN) {
    ParamTable t(standard_diagram(M, N), kPt);
    EXPECT_TRUE(struct_fn_series(t, 1, 1, 16) == qsum_series(f11_qsum(t.a_exponent()), 16, kPt));
  }
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
