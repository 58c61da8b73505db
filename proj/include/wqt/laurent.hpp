#pragma once

#include <wqt/bigrat.hpp>
#include <wqt/series.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wqt {

// Laurent polynomial in z over BigRat (sparse).
class LaurentPoly {
public:
  LaurentPoly() = default;
  static LaurentPoly constant(BigRat c) {
    LaurentPoly p;
    p.set(0, std::move(c));
    return p;
  }
  static LaurentPoly monomial(BigRat c, long n) {
    LaurentPoly p;
    p.set(n, std::move(c));
    return p;
  }
  // 1 - c z^k
  static LaurentPoly one_minus(BigRat c, long k = 1) {
    LaurentPoly p;
    p.set(0, BigRat(1));
    p.set(k, -c);
    return p;
  }

  void set(long n, BigRat c) {
    if (c.is_zero())
      terms_.erase(n);
    else
      terms_[n] = std::move(c);
  }
  BigRat coeff(long n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? BigRat(0) : it->second;
  }
  bool is_zero() const { return terms_.empty(); }
  long lowest() const {
    if (is_zero()) throw std::domain_error("LaurentPoly: lowest of zero");
    return terms_.begin()->first;
  }
  long highest() const {
    if (is_zero()) throw std::domain_error("LaurentPoly: highest of zero");
    return terms_.rbegin()->first;
  }
  const std::map<long, BigRat>& terms() const { return terms_; }

  LaurentPoly operator+(const LaurentPoly& o) const {
    LaurentPoly p = *this;
    for (const auto& [n, c] : o.terms_) p.set(n, p.coeff(n) + c);
    return p;
  }
  LaurentPoly operator-(const LaurentPoly& o) const {
    LaurentPoly p = *this;
    for (const auto& [n, c] : o.terms_) p.set(n, p.coeff(n) - c);
    return p;
  }
  LaurentPoly operator*(const LaurentPoly& o) const {
    LaurentPoly p;
    for (const auto& [n1, c1] : terms_)
      for (const auto& [n2, c2] : o.terms_) p.set(n1 + n2, p.coeff(n1 + n2) + c1 * c2);
    return p;
  }
  LaurentPoly operator*(const BigRat& k) const {
    LaurentPoly p;
    if (k.is_zero()) return p;
    for (const auto& [n, c] : terms_) p.terms_[n] = c * k;
    return p;
  }
  bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }

  BigRat eval(const BigRat& z) const {
    BigRat acc(0);
    for (const auto& [n, c] : terms_) acc += c * z.pow(n);
    return acc;
  }

  // Substitute z -> c*z.
  LaurentPoly scale_arg(const BigRat& c) const {
    LaurentPoly p;
    for (const auto& [n, k] : terms_) p.terms_[n] = k * c.pow(n);
    return p;
  }
  // Substitute z -> 1/z.
  LaurentPoly invert_arg() const {
    LaurentPoly p;
    for (const auto& [n, k] : terms_) p.terms_[-n] = k;
    return p;
  }

  LaurentPoly derivative() const {
    LaurentPoly p;
    for (const auto& [n, c] : terms_)
      if (n != 0) p.set(n - 1, c * BigRat(n));
    return p;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (const auto& [n, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += c.str();
      if (n != 0) s += "*z^" + std::to_string(n);
    }
    return s;
  }

private:
  std::map<long, BigRat> terms_;
};

// Taylor coefficients of a Laurent polynomial around a nonzero point:
// P(z) = sum_k taylor[k] (z - z0)^k, computed by repeated synthetic
// division, exactly.
inline std::vector<BigRat> poly_taylor(const LaurentPoly& p, const BigRat& z0, int count) {
  if (z0.is_zero()) throw std::domain_error("poly_taylor: expansion point must be nonzero");
  // Shift to an ordinary polynomial first: multiply by z^{-lowest}.
  long lo = p.is_zero() ? 0 : std::min<long>(p.lowest(), 0);
  std::vector<BigRat> c;  // ordinary coefficients of z^{-lo} * p
  if (!p.is_zero()) {
    c.assign(p.highest() - lo + 1, BigRat(0));
    for (const auto& [n, k] : p.terms()) c[n - lo] = k;
  }
  std::vector<BigRat> shifted(count, BigRat(0));
  std::vector<BigRat> work = c;
  for (int k = 0; k < count; ++k) {
    if (work.empty()) break;
    // Divide work by (z - z0); remainder is the k-th coefficient.
    BigRat rem(0);
    std::vector<BigRat> quot(work.size() > 1 ? work.size() - 1 : 0, BigRat(0));
    BigRat carry(0);
    for (int i = static_cast<int>(work.size()) - 1; i >= 0; --i) {
      BigRat cur = work[i] + carry * z0;
      if (i == 0)
        rem = cur;
      else {
        quot[i - 1] = cur;
        carry = cur;
      }
    }
    shifted[k] = rem;
    work = std::move(quot);
  }
  if (lo == 0) return shifted;
  // p = z^{lo} * (shifted series in (z-z0)); divide by z^{-lo} as a series
  // around z0: z^{-1} = sum_j (-1)^j z0^{-(j+1)} (z-z0)^j.
  std::vector<BigRat> invz(count, BigRat(0));
  for (int j = 0; j < count; ++j) invz[j] = BigRat(j % 2 == 0 ? 1 : -1) * z0.pow(-(j + 1));
  std::vector<BigRat> acc = shifted;
  for (long rep = 0; rep < -lo; ++rep) {
    std::vector<BigRat> next(count, BigRat(0));
    for (int a = 0; a < count; ++a)
      for (int b = 0; a + b < count; ++b) next[a + b] += acc[a] * invz[b];
    acc = std::move(next);
  }
  return acc;
}

// Exact rational function in z: numerator / denominator Laurent
// polynomials, normalized so the denominator has lowest exponent 0 and
// constant term 1 when possible (monic in the "lowest term" sense).
class RationalFn {
public:
  RationalFn() : num_(LaurentPoly::constant(BigRat(0))), den_(LaurentPoly::constant(BigRat(1))) {}
  RationalFn(LaurentPoly n, LaurentPoly d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
  }
  static RationalFn constant(BigRat c) {
    return RationalFn(LaurentPoly::constant(std::move(c)), LaurentPoly::constant(BigRat(1)));
  }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalFn operator*(const RationalFn& o) const {
    return RationalFn(num_ * o.num_, den_ * o.den_);
  }
  RationalFn operator+(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RationalFn operator-(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  RationalFn inverse() const {
    if (is_zero()) throw std::domain_error("RationalFn: inverse of zero");
    return RationalFn(den_, num_);
  }

  BigRat eval(const BigRat& z) const {
    BigRat d = den_.eval(z);
    if (d.is_zero()) throw std::domain_error("RationalFn: pole at z=" + z.str());
    return num_.eval(z) / d;
  }

  RationalFn scale_arg(const BigRat& c) const {
    RationalFn f;
    f.num_ = num_.scale_arg(c);
    f.den_ = den_.scale_arg(c);
    f.normalize();
    return f;
  }
  RationalFn invert_arg() const {
    RationalFn f;
    f.num_ = num_.invert_arg();
    f.den_ = den_.invert_arg();
    f.normalize();
    return f;
  }

  // Equality as rational functions (cross-multiplied).
  bool operator==(const RationalFn& o) const { return num_ * o.den_ == o.num_ * den_; }
  bool operator!=(const RationalFn& o) const { return !(*this == o); }

private:
  static std::vector<BigRat> ordinary(const LaurentPoly& p) {
    std::vector<BigRat> c(p.highest() - p.lowest() + 1, BigRat(0));
    for (const auto& [n, k] : p.terms()) c[n - p.lowest()] = k;
    return c;
  }
  static std::vector<BigRat> poly_rem(std::vector<BigRat> a, const std::vector<BigRat>& b) {
    while (a.size() >= b.size() && !a.empty()) {
      BigRat f = a.back() / b.back();
      for (std::size_t i = 0; i < b.size(); ++i)
        a[a.size() - b.size() + i] -= f * b[i];
      while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
    return a;
  }
  static std::vector<BigRat> poly_gcd(std::vector<BigRat> a, std::vector<BigRat> b) {
    while (!b.empty()) {
      auto r = poly_rem(std::move(a), b);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }
  static std::vector<BigRat> poly_div(const std::vector<BigRat>& a,
                                      const std::vector<BigRat>& b) {
    std::vector<BigRat> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, BigRat(0));
    std::vector<BigRat> r = a;
    while (r.size() >= b.size() && !r.empty()) {
      BigRat f = r.back() / b.back();
      q[r.size() - b.size()] = f;
      for (std::size_t i = 0; i < b.size(); ++i)
        r[r.size() - b.size() + i] -= f * b[i];
      while (!r.empty() && r.back().is_zero()) r.pop_back();
    }
    return q;
  }

  void normalize() {
    if (den_.is_zero()) throw std::domain_error("RationalFn: zero denominator");
    if (num_.is_zero()) {
      den_ = LaurentPoly::constant(BigRat(1));
      return;
    }
    // Cancel the polynomial content.
    auto nc = ordinary(num_), dc = ordinary(den_);
    auto g = poly_gcd(nc, dc);
    if (g.size() > 1) {
      long nlo = num_.lowest(), dlo = den_.lowest();
      auto nq = poly_div(nc, g), dq = poly_div(dc, g);
      num_ = LaurentPoly();
      for (std::size_t k = 0; k < nq.size(); ++k) num_.set(nlo + k, nq[k]);
      den_ = LaurentPoly();
      for (std::size_t k = 0; k < dq.size(); ++k) den_.set(dlo + k, dq[k]);
    }
    // Shift both so the denominator starts at z^0 with unit constant.
    long shift = den_.lowest();
    BigRat lead = den_.coeff(shift);
    LaurentPoly zshift = LaurentPoly::monomial(lead.inv(), -shift);
    num_ = num_ * zshift;
    den_ = den_ * zshift;
  }

  LaurentPoly num_, den_;
};

enum class ExpandDomain { kInside, kOutside };

// Laurent expansion of f valid for |z| smaller (inside) or larger
// (outside) than every finite pole radius, to the given order.
inline TruncSeries rf_expand(const RationalFn& f, ExpandDomain domain, long order) {
  if (f.is_zero()) return TruncSeries::zero(order);
  const LaurentPoly& den = f.den();
  if (den.coeff(0).is_zero() || den.lowest() != 0)
    throw std::domain_error("rf_expand: denominator vanishes at z=0 (pole at the origin)");
  if (domain == ExpandDomain::kInside) {
    // den = c (1 + higher): invert as a power series in z.
    long deg = den.highest();
    long num_lo = f.num().lowest();
    long ord = order - std::min<long>(num_lo, 0) + 1;
    std::vector<BigRat> inv(ord + 1, BigRat(0));
    BigRat c0 = den.coeff(0);
    inv[0] = c0.inv();
    for (long n = 1; n <= ord; ++n) {
      BigRat s(0);
      for (long k = 1; k <= std::min(n, deg); ++k) s += den.coeff(k) * inv[n - k];
      inv[n] = -s * c0.inv();
    }
    TruncSeries ds(0, std::move(inv), ord);
    long ns_ord = std::max<long>(f.num().highest(), order + 1);
    TruncSeries ns =
        TruncSeries::build(num_lo, ns_ord, [&](long n) { return f.num().coeff(n); });
    TruncSeries prod = ns * ds;
    // Re-truncate to the requested order.
    std::vector<BigRat> c;
    long lo = std::min<long>(prod.is_zero() ? 0 : prod.lowest(), order);
    for (long n = lo; n <= order; ++n) c.push_back(n > prod.order() ? BigRat(0) : prod.coeff(n));
    return TruncSeries(lo, std::move(c), order);
  }
  // Outside expansion: substitute z -> 1/z, expand inside in 1/z.
  RationalFn g = f.invert_arg();
  TruncSeries inner = rf_expand(g, ExpandDomain::kInside, order);
  // Coefficient of z^n outside = coefficient of w^{-n} inner, so mirror.
  long lo = -inner.order();
  std::vector<BigRat> c;
  for (long n = lo; n <= order; ++n) {
    long m = -n;
    c.push_back(m > inner.order() ? BigRat(0) : inner.coeff(m));
  }
  return TruncSeries(lo, std::move(c), order);
}

// Residue at a simple pole z0 (0 for regular points, error on higher
// order poles).
inline BigRat rf_residue(const RationalFn& f, const BigRat& z0) {
  if (z0.is_zero()) throw std::domain_error("rf_residue: pole at origin unsupported");
  BigRat d = f.den().eval(z0);
  if (!d.is_zero()) return BigRat(0);
  std::vector<BigRat> dt = poly_taylor(f.den(), z0, 2);
  if (dt[1].is_zero()) throw std::domain_error("rf_residue: pole of order >= 2 at z0=" + z0.str());
  BigRat n = f.num().eval(z0);
  return n / dt[1];
}

}  // namespace wqt
