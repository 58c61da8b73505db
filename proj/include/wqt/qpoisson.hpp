#pragma once

#include <wqt/freefield.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wqt {

// q-Poisson structure constant
//   C_{i,j}[m] = [Min(i,j) m/2]_q [(Max(i,j)-M-1) m/2]_q / [(M+1) m/2]_q,
// computed with q = Q^2 so half-integer brackets stay rational.
inline BigRat c_coeff(int i, int j, long m, const BigRat& Q, int M) {
  if (Q.is_zero() || Q == BigRat(1) || Q == BigRat(-1))
    throw std::invalid_argument("c_coeff: need q != 0, +-1");
  if (m == 0) return BigRat(0);
  auto half_bracket = [&](long n) {  // [n/2]_q = (Q^n - Q^{-n})/(Q^2 - Q^{-2})
    BigRat qn = Q.pow(n);
    return (qn - qn.inv()) / (Q.pow(2) - Q.pow(-2));
  };
  long mn = std::min(i, j), mx = std::max(i, j);
  BigRat den = half_bracket((M + 1) * m);
  if (den.is_zero()) throw std::domain_error("c_coeff: vanishing denominator bracket");
  return half_bracket(mn * m) * half_bracket((mx - M - 1) * m) / den;
}

struct ClassicalLimitReport {
  bool pass = true;
  double relative_error = 0;
  double extrapolated = 0;
  double target = 0;
  std::string note;
};

// First-order beta-expansion of the structure functions against the
// q-Poisson coefficients: with beta_n = 1/p_n (r_n = p_n/(p_n-1)) and
// q = x^{2r} held exactly fixed, the m-th coefficient of
// (f_{i,j}-1)/(beta log q (q-q^{-1}) C_{i,j}[m]) tends to 1; three-point
// Richardson extrapolation in beta, 1e-6 relative tolerance. The limit
// leaves every exact exponent lattice, so this one check runs in
// log-domain floating point (well conditioned: all bracket exponents
// are O(log q) with q chosen near 1).
inline ClassicalLimitReport check_classical_limit(int M, int N, int i, int j, long m,
                                                  double tol = 1e-6) {
  if (m == 0) return {true, 0, 0, 0, "m=0: both sides vanish identically"};
  long mm = std::abs(m);
  // beta in {1/64, 1/128, 1/256}: r = p/(p-1), x = q^{1/(2r)} with
  // q = c^{131072}, c = 1 - 2^{-24}; every x_n is an exact power of c,
  // and the residual after killing the beta and beta^2 terms sits far
  // below the tolerance.
  const double ps[3] = {64, 128, 256};
  const double logc = std::log1p(-1.0 / 16777216.0);
  const double logq = 131072.0 * logc;
  const double logQ = logq / 2.0;
  double qd = std::exp(logq);
  int imn = std::min(i, j), imx = std::max(i, j);
  bool B_zero = (imx == M + 1) || imn == 0;
  auto half_bracket = [&](long n) {  // [n/2]_q
    return std::expm1(n * logq) * std::exp(-n * logQ) /
           (std::expm1(2.0 * logq) * std::exp(-logq));
  };
  double Bd = B_zero ? 0.0
                     : half_bracket(imn * mm) * half_bracket((imx - M - 1) * mm) /
                           half_bracket((M + 1) * mm);
  auto bracket = [&](double s_logx, double logx) {  // [e m]_x with e log x = s_logx
    return std::expm1(2.0 * s_logx * mm) * std::exp(-s_logx * mm) /
           (std::expm1(2.0 * logx) * std::exp(-logx));
  };
  double a0 = static_cast<double>(M - N), a1 = static_cast<double>(N + 1);
  std::vector<double> rho;
  for (double p : ps) {
    double r = p / (p - 1.0);
    double logx = logq / (2.0 * r);
    double la = a0 * logx + a1 * r * logx;  // log x^{a}
    double dxi = std::expm1(2.0 * logx) * std::exp(-logx);
    double cm = -(dxi * dxi * bracket((r - 1.0) * logx, logx) * bracket(r * logx, logx) *
                  bracket(imn * logx, logx) * bracket(la - imx * logx, logx)) /
                (bracket(logx, logx) * bracket(la, logx)) / static_cast<double>(mm);
    double beta = 1.0 / p;
    double denom = beta * (qd - 1.0 / qd);
    if (!B_zero) denom *= Bd;
    rho.push_back(cm / denom);
  }
  // Richardson with beta halving: kill the linear and quadratic terms.
  double r10 = 2.0 * rho[1] - rho[0];
  double r11 = 2.0 * rho[2] - rho[1];
  double r2 = (4.0 * r11 - r10) / 3.0;
  ClassicalLimitReport rep;
  rep.extrapolated = r2;
  if (B_zero) {
    rep.target = 0;
    rep.relative_error = std::abs(r2 / logq);
    rep.pass = rep.relative_error < tol;
    rep.note = "zero structure constant";
    return rep;
  }
  rep.target = logq;
  rep.relative_error = std::abs(r2 / logq - 1.0);
  rep.pass = rep.relative_error < tol;
  return rep;
}

}  // namespace wqt
