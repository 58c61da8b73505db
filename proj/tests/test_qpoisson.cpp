#include <wqt/qpoisson.hpp>

#include <gtest/gtest.h>

using namespace wqt;

TEST(CCoeff, ZeroCases) {
  BigRat Q(3, 5);
  // Column M+1 vanishes identically.
  for (long m = -4; m <= 4; ++m) {
    EXPECT_EQ(c_coeff(1, 2, m, Q, 1), BigRat(0));
    EXPECT_EQ(c_coeff(2, 2, m, Q, 1), BigRat(0));
    EXPECT_EQ(c_coeff(3, 3, m, Q, 2), BigRat(0));
  }
  EXPECT_EQ(c_coeff(1, 1, 0, Q, 1), BigRat(0));
}

TEST(CCoeff, BracketExample) {
  // i=j=1, M=1, m=2: [1]_q [-1]_q / [2]_q = -1/(q + q^{-1}).
  BigRat Q(3, 5);
  BigRat q = Q * Q;
  EXPECT_EQ(c_coeff(1, 1, 2, Q, 1), -(BigRat(1)) / (q + q.inv()));
}

TEST(CCoeff, Symmetries) {
  BigRat Q(7, 9);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (long m = 1; m <= 4; ++m) {
        EXPECT_EQ(c_coeff(i, j, m, Q, 2), c_coeff(j, i, m, Q, 2));
        EXPECT_EQ(c_coeff(i, j, -m, Q, 2), -c_coeff(i, j, m, Q, 2));
      }
}

TEST(CCoeff, Validation) {
  EXPECT_THROW(c_coeff(1, 1, 1, BigRat(1), 1), std::invalid_argument);
  EXPECT_THROW(c_coeff(1, 1, 1, BigRat(0), 1), std::invalid_argument);
}

TEST(ClassicalLimit, MatchesStructureConstants) {
  for (auto [M, N] : {std::pair{1, 0}, {2, 1}})
    for (int i = 1; i <= 2; ++i)
      for (int j = i; j <= 2; ++j)
        for (long m = 1; m <= 4; ++m) {
          auto rep = check_classical_limit(M, N, i, j, m);
          EXPECT_TRUE(rep.pass) << "A(" << M << "," << N << ") (" << i << "," << j << ") m=" << m
                                << " err=" << rep.relative_error;
        }
}

TEST(ClassicalLimit, TrivialAndZeroTargets) {
  auto rep0 = check_classical_limit(1, 0, 1, 1, 0);
  EXPECT_TRUE(rep0.pass);
  // (i, M+1): the limit target is zero.
  auto repz = check_classical_limit(1, 0, 1, 2, 3);
  EXPECT_TRUE(repz.pass);
  EXPECT_EQ(repz.target, 0);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
