#pragma once

#include <wqt/bigrat.hpp>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wqt {

// Truncated Laurent series sum_{n=lo}^{K} c_n z^n. Coefficients above the
// truncation order K are undefined, not zero; arithmetic propagates the
// tightest valid K.
class TruncSeries {
public:
  TruncSeries() : lo_(0), order_(-1) {}
  TruncSeries(long lo, std::vector<BigRat> coeffs, long order)
      : lo_(lo), coeffs_(std::move(coeffs)), order_(order) {
    trim();
  }

  static TruncSeries zero(long order) { return TruncSeries(0, {}, order); }
  static TruncSeries constant(BigRat c, long order) {
    return TruncSeries(0, {std::move(c)}, order);
  }
  // Build from a coefficient function on [lo, order].
  static TruncSeries build(long lo, long order, const std::function<BigRat(long)>& coeff) {
    std::vector<BigRat> c;
    c.reserve(order - lo + 1);
    for (long n = lo; n <= order; ++n) c.push_back(coeff(n));
    return TruncSeries(lo, std::move(c), order);
  }

  long order() const { return order_; }
  long lowest() const { return lo_; }

  BigRat coeff(long n) const {
    if (n > order_) throw std::out_of_range("TruncSeries: coefficient beyond truncation order");
    if (n < lo_ || n > hi()) return BigRat(0);
    return coeffs_[n - lo_];
  }

  bool is_zero() const { return coeffs_.empty(); }

  TruncSeries operator+(const TruncSeries& o) const {
    long ord = std::min(order_, o.order_);
    long lo = std::min(lo_, o.lo_);
    std::vector<BigRat> c;
    for (long n = lo; n <= ord; ++n) c.push_back(safe(n) + o.safe(n));
    return TruncSeries(lo, std::move(c), ord);
  }
  TruncSeries operator-(const TruncSeries& o) const {
    long ord = std::min(order_, o.order_);
    long lo = std::min(lo_, o.lo_);
    std::vector<BigRat> c;
    for (long n = lo; n <= ord; ++n) c.push_back(safe(n) - o.safe(n));
    return TruncSeries(lo, std::move(c), ord);
  }
  TruncSeries operator*(const TruncSeries& o) const {
    if (is_zero() || o.is_zero())
      return TruncSeries(0, {}, std::min(order_ + o.lo_, o.order_ + lo_));
    long ord = std::min(order_ + o.lo_, o.order_ + lo_);
    long lo = lo_ + o.lo_;
    std::vector<BigRat> c(ord - lo + 1, BigRat(0));
    for (long i = lo_; i <= hi(); ++i) {
      if (coeffs_[i - lo_].is_zero()) continue;
      for (long j = o.lo_; j <= o.hi() && i + j <= ord; ++j)
        c[i + j - lo] += coeffs_[i - lo_] * o.coeffs_[j - o.lo_];
    }
    return TruncSeries(lo, std::move(c), ord);
  }
  TruncSeries operator*(const BigRat& k) const {
    std::vector<BigRat> c = coeffs_;
    for (auto& x : c) x *= k;
    return TruncSeries(lo_, std::move(c), order_);
  }

  // Multiplicative inverse; requires nonzero lowest coefficient.
  TruncSeries inverse() const {
    if (is_zero()) throw std::domain_error("TruncSeries: inverse of zero");
    long v = lo_;
    BigRat c0 = coeffs_.front();
    long ord = order_ - v;  // order of the inverse around z^{-v}
    std::vector<BigRat> inv(ord + 1, BigRat(0));
    inv[0] = c0.inv();
    for (long n = 1; n <= ord; ++n) {
      BigRat s(0);
      for (long k = 1; k <= n; ++k) {
        long idx = v + k - lo_;
        if (idx >= 0 && idx < static_cast<long>(coeffs_.size()))
          s += coeffs_[idx] * inv[n - k];
      }
      inv[n] = -s * c0.inv();
    }
    return TruncSeries(-v, std::move(inv), ord - v);
  }

  bool operator==(const TruncSeries& o) const {
    long ord = std::min(order_, o.order_);
    long lo = std::min(lo_, o.lo_);
    for (long n = lo; n <= ord; ++n)
      if (safe(n) != o.safe(n)) return false;
    return true;
  }

private:
  long hi() const { return lo_ + static_cast<long>(coeffs_.size()) - 1; }
  BigRat safe(long n) const {
    if (n < lo_ || n > hi()) return BigRat(0);
    return coeffs_[n - lo_];
  }
  void trim() {
    while (!coeffs_.empty() && coeffs_.front().is_zero()) {
      coeffs_.erase(coeffs_.begin());
      ++lo_;
    }
    while (!coeffs_.empty() && hi() > order_) coeffs_.pop_back();
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    if (coeffs_.empty()) lo_ = 0;
  }

  long lo_;
  std::vector<BigRat> coeffs_;
  long order_;
};

// exp of a series with strictly positive lowest exponent; inverse of
// series_log. Computed through f' = s' f, so n f_n = sum k s_k f_{n-k}.
inline TruncSeries series_exp(const TruncSeries& s) {
  if (!s.is_zero() && s.lowest() <= 0)
    throw std::domain_error("series_exp: series must have strictly positive lowest exponent");
  long ord = s.order();
  std::vector<BigRat> f(ord + 1, BigRat(0));
  f[0] = BigRat(1);
  for (long n = 1; n <= ord; ++n) {
    BigRat acc(0);
    for (long k = 1; k <= n; ++k) {
      BigRat sk = s.coeff(k);
      if (!sk.is_zero()) acc += sk * BigRat(k) * f[n - k];
    }
    f[n] = acc / BigRat(n);
  }
  return TruncSeries(0, std::move(f), ord);
}

// log of a series with constant term 1.
inline TruncSeries series_log(const TruncSeries& s) {
  if (s.lowest() != 0 || !s.coeff(0).is_one())
    throw std::domain_error("series_log: series must have constant term 1");
  long ord = s.order();
  TruncSeries u = s - TruncSeries::constant(BigRat(1), ord);
  if (!u.is_zero() && u.lowest() <= 0)
    throw std::domain_error("series_log: argument must be 1 + (positive powers)");
  TruncSeries acc = TruncSeries::zero(ord);
  TruncSeries pw = TruncSeries::constant(BigRat(1), ord);
  long n = 1;
  while (true) {
    pw = pw * u;
    if (pw.is_zero() || pw.lowest() > ord) break;
    BigRat sign((n % 2 == 1) ? 1 : -1);
    acc = acc + pw * (sign / BigRat(n));
    ++n;
  }
  return acc;
}

}  // namespace wqt
