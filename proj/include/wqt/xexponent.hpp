#pragma once

#include <wqt/bigrat.hpp>

#include <cstdint>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <stdexcept>
#include <string>

namespace wqt {

// Exponent of x on the lattice c0 + cr*r + cinv/r. Every power of x
// appearing in the parameter tables and kernels has this shape.
struct XExponent {
  BigRat c0, cr, cinv;

  XExponent() = default;
  XExponent(BigRat a, BigRat b, BigRat c)
      : c0(std::move(a)), cr(std::move(b)), cinv(std::move(c)) {}

  static XExponent zero() { return {}; }
  static XExponent one_(long k) { return {BigRat(k), BigRat(0), BigRat(0)}; }   // x^k
  static XExponent r_(long k) { return {BigRat(0), BigRat(k), BigRat(0)}; }     // x^{kr}
  static XExponent rinv_(long k) { return {BigRat(0), BigRat(0), BigRat(k)}; }  // x^{k/r}

  bool is_zero() const { return c0.is_zero() && cr.is_zero() && cinv.is_zero(); }
  bool is_integer() const { return cr.is_zero() && cinv.is_zero() && c0.is_integer(); }

  XExponent operator+(const XExponent& o) const { return {c0 + o.c0, cr + o.cr, cinv + o.cinv}; }
  XExponent operator-(const XExponent& o) const { return {c0 - o.c0, cr - o.cr, cinv - o.cinv}; }
  XExponent operator-() const { return {-c0, -cr, -cinv}; }
  XExponent operator*(long k) const { return {c0 * BigRat(k), cr * BigRat(k), cinv * BigRat(k)}; }
  XExponent operator*(const BigRat& k) const { return {c0 * k, cr * k, cinv * k}; }

  bool operator==(const XExponent& o) const {
    return c0 == o.c0 && cr == o.cr && cinv == o.cinv;
  }
  bool operator!=(const XExponent& o) const { return !(*this == o); }
  bool operator<(const XExponent& o) const {
    if (c0 != o.c0) return c0 < o.c0;
    if (cr != o.cr) return cr < o.cr;
    return cinv < o.cinv;
  }

  std::string str() const {
    return "(" + c0.str() + "," + cr.str() + "," + cinv.str() + ")";
  }
};

// Specialization r = p/q, x = t^{pq}, so that
//   x^{c0 + cr r + cinv/r} = t^{c0 pq + cr p^2 + cinv q^2}
// is an exact rational whenever the combined exponent is an integer.
// Powers of t are memoized per instance; copies carry their own cache,
// so independent tables can still be evaluated in parallel.
struct EvalPoint {
  BigRat t;
  long p = 0, q = 0;

  EvalPoint() = default;
  EvalPoint(BigRat t_, long p_, long q_) : t(std::move(t_)), p(p_), q(q_) {
    if (!(t > BigRat(0) && t < BigRat(1)))
      throw std::invalid_argument("EvalPoint: need 0 < t < 1");
    if (!(p > q && q >= 1)) throw std::invalid_argument("EvalPoint: need p > q >= 1");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("EvalPoint: p, q must be coprime");
  }
  EvalPoint(const EvalPoint& o) : t(o.t), p(o.p), q(o.q) {}
  EvalPoint& operator=(const EvalPoint& o) {
    t = o.t;
    p = o.p;
    q = o.q;
    cache_.clear();
    return *this;
  }

  BigRat r() const { return BigRat(p, q); }

  // Exponent of t carried by x^e; must be an integer.
  BigRat t_exponent(const XExponent& e) const {
    return e.c0 * BigRat(p) * BigRat(q) + e.cr * BigRat(p) * BigRat(p) +
           e.cinv * BigRat(q) * BigRat(q);
  }

  const BigRat& t_power(std::int64_t n) const {
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(n, t.pow(n)).first->second;
  }

  std::string str() const {
    return "t=" + t.str() + ",p=" + std::to_string(p) + ",q=" + std::to_string(q);
  }

private:
  mutable std::unordered_map<std::int64_t, BigRat> cache_;
};

inline BigRat xpow_eval(const XExponent& e, const EvalPoint& pt) {
  BigRat te = pt.t_exponent(e);
  if (!te.is_integer())
    throw std::domain_error("xpow_eval: exponent " + e.str() + " gives non-integral t-power " +
                            te.str() + " at " + pt.str());
  return pt.t_power(te.num().convert_to<std::int64_t>());
}

// q-integer [n]_x = (x^n - x^{-n}) / (x - x^{-1}) with n on the lattice.
inline BigRat qint_eval(const XExponent& n, const EvalPoint& pt) {
  BigRat xn = xpow_eval(n, pt);
  BigRat x = xpow_eval(XExponent::one_(1), pt);
  return (xn - xn.inv()) / (x - x.inv());
}

struct XExponentHash {
  std::size_t operator()(const XExponent& e) const {
    std::hash<std::string> h;
    return h(e.str());
  }
};

}  // namespace wqt
