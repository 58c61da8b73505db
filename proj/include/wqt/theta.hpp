#pragma once

#include <wqt/laurent.hpp>
#include <wqt/series.hpp>
#include <wqt/xexponent.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace wqt {

// Coefficient shape of the exponentiated mode sums: every series in this
// construction is exp(-sum_{m>=1} C(m)/m u^m) with
//   C(m) = sum_i sign_i x^{e_i m} / (1 - x^{s m})  +  sum_j sign_j x^{e_j m},
// which corresponds factor-by-factor to q-products (x^{e_i} u; x^s)_inf
// and binomials (1 - x^{e_j} u).
struct QTerm {
  int sign;                       // +1 or -1
  XExponent head;                 // e
  std::optional<XExponent> step;  // modulus s, empty for a bare binomial
};
using QSum = std::vector<QTerm>;

inline BigRat qsum_coeff(const QSum& q, long m, const EvalPoint& pt) {
  BigRat acc(0);
  for (const auto& t : q) {
    BigRat v = xpow_eval(t.head * m, pt);
    if (t.step) {
      BigRat pm = xpow_eval(*t.step * m, pt);
      v = v / (BigRat(1) - pm);
    }
    acc += BigRat(t.sign) * v;
  }
  return acc;
}

// Series exp(-sum C(m)/m u^m) through order K at an evaluation point.
inline TruncSeries qsum_series(const QSum& q, long K, const EvalPoint& pt) {
  TruncSeries s =
      TruncSeries::build(1, K, [&](long m) { return -qsum_coeff(q, m, pt) / BigRat(m); });
  return series_exp(s);
}

// Formal product
//   sign * x^{S} * u^{E} * prod (1 - x^e u^d)^k * prod (x^h u^d; x^s)_inf^k
// with exact lattice exponents; d = 0 factors are scalars. Finite
// binomials are canonicalized to the u^{+1} direction via
// (1 - x^e u^{-1}) = -x^e u^{-1} (1 - x^{-e} u).
class ProductForm {
public:
  ProductForm() = default;

  static ProductForm one() { return {}; }

  void mul_binomial(const XExponent& e, int d, long k = 1) {
    if (k == 0) return;
    if (d == -1) {
      // Flip to the +1 direction.
      if (k % 2 != 0) sign_ = -sign_;
      xscale_ = xscale_ + e * k;
      upow_ = upow_ - XExponent::one_(k);
      raw_mul_binomial(-e, +1, k);
      return;
    }
    raw_mul_binomial(e, d, k);
  }
  void mul_progression(const XExponent& h, const XExponent& s, int d, long k = 1) {
    if (k == 0) return;
    auto key = std::make_tuple(h, s, d);
    progressions_[key] += k;
    if (progressions_[key] == 0) progressions_.erase(key);
  }
  void mul_sign(int s) {
    if (s == -1) sign_ = -sign_;
  }
  void mul_upower(const XExponent& e) { upow_ = upow_ + e; }
  void mul_xpower(const XExponent& e) { xscale_ = xscale_ + e; }

  void mul(const ProductForm& o) {
    for (const auto& [k, v] : o.binomials_) raw_mul_binomial(std::get<0>(k), std::get<1>(k), v);
    for (const auto& [k, v] : o.progressions_)
      mul_progression(std::get<0>(k), std::get<1>(k), std::get<2>(k), v);
    mul_sign(o.sign_);
    mul_upower(o.upow_);
    mul_xpower(o.xscale_);
  }
  ProductForm inverse() const {
    ProductForm p;
    for (const auto& [k, v] : binomials_) p.binomials_[k] = -v;
    for (const auto& [k, v] : progressions_) p.progressions_[k] = -v;
    p.sign_ = sign_;
    p.upow_ = -upow_;
    p.xscale_ = -xscale_;
    return p;
  }
  // u -> 1/u
  ProductForm invert_arg() const {
    ProductForm p;
    p.sign_ = sign_;
    p.upow_ = -upow_;
    p.xscale_ = xscale_;
    for (const auto& [k, v] : binomials_) p.mul_binomial(std::get<0>(k), -std::get<1>(k), v);
    for (const auto& [k, v] : progressions_) {
      auto key = std::make_tuple(std::get<0>(k), std::get<1>(k), -std::get<2>(k));
      p.progressions_[key] += v;
    }
    return p;
  }
  // u -> x^{c} u
  ProductForm scale_arg(const XExponent& c) const {
    ProductForm p;
    p.sign_ = sign_;
    p.upow_ = upow_;
    p.xscale_ = xscale_ + c * upow_big();
    for (const auto& [k, v] : binomials_) {
      auto [e, d] = k;
      p.raw_mul_binomial(e + c * d, d, v);
    }
    for (const auto& [k, v] : progressions_) {
      auto [h, s, d] = k;
      auto key = std::make_tuple(h + c * d, s, d);
      p.progressions_[key] += v;
    }
    return p;
  }

  // Theta_p(x^{c} u^{d}) = (p;p) (x^c u^d; p) (x^{p-c} u^{-d}; p).
  static ProductForm theta(const XExponent& c, const XExponent& p, int d) {
    ProductForm f;
    f.mul_progression(p, p, 0);
    f.mul_progression(c, p, d);
    f.mul_progression(p - c, p, -d);
    return f;
  }

  // exp(-sum C(m)/m u^m) for a QSum coefficient, in direction d.
  static ProductForm from_qsum(const QSum& q, int d = 1) {
    ProductForm f;
    for (const auto& t : q) {
      if (t.step)
        f.mul_progression(t.head, *t.step, d, t.sign);
      else
        f.mul_binomial(t.head, d, t.sign);
    }
    return f;
  }

  bool is_one() const {
    return binomials_.empty() && progressions_.empty() && sign_ == 1 && upow_.is_zero() &&
           xscale_.is_zero();
  }

  // Structural equality: this / o telescopes to 1.
  bool equals(const ProductForm& o, std::string* why = nullptr) const {
    ProductForm d = *this;
    d.mul(o.inverse());
    d.rebase_progressions();
    bool ok = d.is_one();
    if (!ok && why) *why = "leftover: " + d.str();
    return ok;
  }

  // Compare truncated expansions of this/o after splitting into the
  // parts with positive and negative factor powers; factors of t-degree
  // above the threshold only touch orders beyond the truncation.
  bool expansions_match(const ProductForm& o, const EvalPoint& pt, const BigRat& tdeg_threshold,
                        std::string* why = nullptr) const {
    ProductForm d = *this;
    d.mul(o.inverse());
    d.rebase_progressions();
    if (d.sign_ != 1 || !d.upow_.is_zero() || !d.xscale_.is_zero()) {
      if (why) *why = "prefactor mismatch: " + d.str();
      return false;
    }
    ProductForm pos, neg;
    for (const auto& [k, v] : d.binomials_)
      (v > 0 ? pos : neg).raw_mul_binomial(std::get<0>(k), std::get<1>(k), std::abs(v));
    for (const auto& [k, v] : d.progressions_)
      (v > 0 ? pos : neg)
          .mul_progression(std::get<0>(k), std::get<1>(k), std::get<2>(k), std::abs(v));
    LaurentPoly pe = pos.expand(pt, tdeg_threshold);
    LaurentPoly ne = neg.expand(pt, tdeg_threshold);
    if (pe == ne) return true;
    if (why) *why = "expansion mismatch: " + d.str();
    return false;
  }

  // Multiply out all factors (requires nonnegative powers).
  LaurentPoly expand(const EvalPoint& pt, const BigRat& tdeg_threshold) const {
    LaurentPoly acc = LaurentPoly::constant(BigRat(sign_));
    auto mul_factor = [&](const XExponent& e, int d, long k) {
      if (k < 0) throw std::domain_error("ProductForm::expand: negative factor power");
      BigRat deg = pt.t_exponent(e);
      if (deg > tdeg_threshold) return;
      BigRat c = xpow_eval(e, pt);
      LaurentPoly f = d == 0 ? LaurentPoly::constant(BigRat(1) - c) : LaurentPoly::one_minus(c, d);
      for (long i = 0; i < k; ++i) acc = acc * f;
    };
    for (const auto& [key, v] : binomials_) mul_factor(std::get<0>(key), std::get<1>(key), v);
    for (const auto& [key, v] : progressions_) {
      auto [h, s, d] = key;
      if (!(pt.t_exponent(s) > BigRat(0)))
        throw std::domain_error("ProductForm::expand: progression step must have positive degree");
      XExponent head = h;
      while (pt.t_exponent(head) <= tdeg_threshold) {
        mul_factor(head, d, v);
        head = head + s;
      }
    }
    return acc;
  }

  int sign() const { return sign_; }
  const XExponent& upower() const { return upow_; }
  const XExponent& xpower() const { return xscale_; }

  std::string str() const {
    std::string s = sign_ == 1 ? "" : "-";
    if (!xscale_.is_zero()) s += "x^" + xscale_.str() + " ";
    if (!upow_.is_zero()) s += "u^" + upow_.str() + " ";
    for (const auto& [k, v] : binomials_)
      s += "(1-x^" + std::get<0>(k).str() + " u^" + std::to_string(std::get<1>(k)) + ")^" +
           std::to_string(v) + " ";
    for (const auto& [k, v] : progressions_)
      s += "(x^" + std::get<0>(k).str() + " u^" + std::to_string(std::get<2>(k)) + "; x^" +
           std::get<1>(k).str() + ")^" + std::to_string(v) + " ";
    return s.empty() ? "1" : s;
  }

private:
  void raw_mul_binomial(const XExponent& e, int d, long k) {
    if (k == 0) return;
    auto key = std::make_tuple(e, d);
    binomials_[key] += k;
    if (binomials_[key] == 0) binomials_.erase(key);
  }

  BigRat upow_big() const {
    // Only integer u-powers can be rescaled consistently.
    if (!upow_.cr.is_zero() || !upow_.cinv.is_zero() || !upow_.c0.is_integer())
      throw std::domain_error("ProductForm::scale_arg: fractional u-prefactor");
    return upow_.c0;
  }

  // diff == n * s for an integer n?
  static std::optional<long> step_multiple(const XExponent& diff, const XExponent& s) {
    std::optional<BigRat> n;
    const BigRat ds[3] = {diff.c0, diff.cr, diff.cinv};
    const BigRat ss[3] = {s.c0, s.cr, s.cinv};
    for (int i = 0; i < 3; ++i) {
      if (ss[i].is_zero()) {
        if (!ds[i].is_zero()) return std::nullopt;
        continue;
      }
      BigRat r = ds[i] / ss[i];
      if (n && !(*n == r)) return std::nullopt;
      n = r;
    }
    if (!n || !n->is_integer()) return std::nullopt;
    return n->num().convert_to<long>();
  }

  // Rewrite every comparability class of progressions over its minimal
  // head: (h0 + n s; s) = (h0; s) / prod_{j=0}^{n-1} (1 - x^{h0+js} u^d).
  void rebase_progressions() {
    auto items = std::vector<std::pair<std::tuple<XExponent, XExponent, int>, long>>(
        progressions_.begin(), progressions_.end());
    progressions_.clear();
    std::vector<bool> used(items.size(), false);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (used[i]) continue;
      auto [h0, s, d] = items[i].first;
      std::vector<std::pair<long, long>> cls;  // (offset from h0, exponent)
      long nmin = 0;
      for (std::size_t j = i; j < items.size(); ++j) {
        if (used[j]) continue;
        auto [h, s2, d2] = items[j].first;
        if (!(s2 == s) || d2 != d) continue;
        auto n = step_multiple(h - h0, s);
        if (!n) continue;
        used[j] = true;
        cls.push_back({*n, items[j].second});
        nmin = std::min(nmin, *n);
      }
      XExponent hmin = h0 + s * nmin;
      long total = 0;
      for (auto& [n, k] : cls) {
        total += k;
        XExponent e = hmin;
        for (long j = 0; j < n - nmin; ++j) {
          mul_binomial(e, d, -k);
          e = e + s;
        }
      }
      if (total != 0) {
        auto key = std::make_tuple(hmin, s, d);
        progressions_[key] += total;
        if (progressions_[key] == 0) progressions_.erase(key);
      }
    }
  }

  std::map<std::tuple<XExponent, int>, long> binomials_;
  std::map<std::tuple<XExponent, XExponent, int>, long> progressions_;
  int sign_ = 1;
  XExponent upow_;    // formal u^{E}
  XExponent xscale_;  // scalar x^{S}
};

}  // namespace wqt
