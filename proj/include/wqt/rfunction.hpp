#pragma once

#include <wqt/bigrat.hpp>
#include <wqt/xexponent.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace wqt {

// Dense polynomial in the formal symbol r with rational coefficients.
class RPoly {
public:
  RPoly() = default;
  explicit RPoly(BigRat c) {
    if (!c.is_zero()) coeffs_.push_back(std::move(c));
  }
  static RPoly r() { return RPoly(std::vector<BigRat>{BigRat(0), BigRat(1)}); }
  static RPoly from_coeffs(std::vector<BigRat> c) { return RPoly(std::move(c)); }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const BigRat& operator[](std::size_t i) const {
    static const BigRat kZero(0);
    return i < coeffs_.size() ? coeffs_[i] : kZero;
  }

  RPoly operator+(const RPoly& o) const {
    std::vector<BigRat> c(std::max(coeffs_.size(), o.coeffs_.size()), BigRat(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (*this)[i] + o[i];
    return RPoly(std::move(c));
  }
  RPoly operator-(const RPoly& o) const {
    std::vector<BigRat> c(std::max(coeffs_.size(), o.coeffs_.size()), BigRat(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (*this)[i] - o[i];
    return RPoly(std::move(c));
  }
  RPoly operator-() const {
    std::vector<BigRat> c = coeffs_;
    for (auto& x : c) x = -x;
    return RPoly(std::move(c));
  }
  RPoly operator*(const RPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigRat> c(coeffs_.size() + o.coeffs_.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    return RPoly(std::move(c));
  }
  RPoly operator*(const BigRat& k) const {
    std::vector<BigRat> c = coeffs_;
    for (auto& x : c) x *= k;
    return RPoly(std::move(c));
  }

  bool operator==(const RPoly& o) const { return coeffs_ == o.coeffs_; }

  // Euclidean division; remainder returned, quotient via out-param.
  RPoly divmod(const RPoly& d, RPoly* quot) const {
    if (d.is_zero()) throw std::domain_error("RPoly: division by zero polynomial");
    RPoly rem = *this;
    std::vector<BigRat> q(std::max<int>(degree() - d.degree() + 1, 0), BigRat(0));
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
      int k = rem.degree() - d.degree();
      BigRat f = rem.coeffs_.back() / d.coeffs_.back();
      q[k] = f;
      std::vector<BigRat> c = rem.coeffs_;
      for (int i = 0; i <= d.degree(); ++i) c[i + k] -= f * d.coeffs_[i];
      rem = RPoly(std::move(c));
    }
    if (quot) *quot = RPoly(std::move(q));
    return rem;
  }

  static RPoly gcd(RPoly a, RPoly b) {
    while (!b.is_zero()) {
      RPoly r = a.divmod(b, nullptr);
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  RPoly monic() const {
    if (is_zero()) return {};
    return *this * coeffs_.back().inv();
  }

  BigRat eval(const BigRat& r) const {
    BigRat acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + *it;
    return acc;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      if ((*this)[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      if (i == 0)
        s += (*this)[i].str();
      else if (i == 1)
        s += (*this)[i].str() + "*r";
      else
        s += (*this)[i].str() + "*r^" + std::to_string(i);
    }
    return s;
  }

private:
  explicit RPoly(std::vector<BigRat> c) : coeffs_(std::move(c)) { trim(); }
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }
  std::vector<BigRat> coeffs_;  // coeffs_[i] multiplies r^i
};

// Element of Q(r): numerator/denominator, denominator monic, coprime.
class RFunction {
public:
  RFunction() : num_(BigRat(0)), den_(BigRat(1)) {}
  RFunction(BigRat c) : num_(std::move(c)), den_(BigRat(1)) {}
  RFunction(RPoly n, RPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
  static RFunction r() { return RFunction(RPoly::r(), RPoly(BigRat(1))); }
  static RFunction from_poly(RPoly p) { return RFunction(std::move(p), RPoly(BigRat(1))); }

  // Lattice element c0 + cr r + cinv / r as a rational function of r.
  static RFunction from_xexponent(const XExponent& e) {
    RPoly n = RPoly(e.cinv) + RPoly::r() * RPoly(e.c0) + RPoly::r() * RPoly::r() * RPoly(e.cr);
    return RFunction(std::move(n), RPoly::r());
  }

  const RPoly& num() const { return num_; }
  const RPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RFunction operator+(const RFunction& o) const {
    return RFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RFunction operator-(const RFunction& o) const {
    return RFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  RFunction operator-() const { return RFunction(-num_, den_); }
  RFunction operator*(const RFunction& o) const {
    return RFunction(num_ * o.num_, den_ * o.den_);
  }
  RFunction operator/(const RFunction& o) const {
    if (o.is_zero()) throw std::domain_error("RFunction: division by zero");
    return RFunction(num_ * o.den_, den_ * o.num_);
  }

  bool operator==(const RFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RFunction& o) const { return !(*this == o); }

  BigRat eval(const BigRat& r) const {
    BigRat d = den_.eval(r);
    if (d.is_zero()) throw std::domain_error("RFunction: pole at r=" + r.str());
    return num_.eval(r) / d;
  }

  std::string str() const {
    if (den_ == RPoly(BigRat(1))) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("RFunction: zero denominator");
    if (num_.is_zero()) {
      den_ = RPoly(BigRat(1));
      return;
    }
    RPoly g = RPoly::gcd(num_, den_);
    if (g.degree() > 0) {
      RPoly qn, qd;
      num_.divmod(g, &qn);
      den_.divmod(g, &qd);
      num_ = qn;
      den_ = qd;
    }
    BigRat lead = den_[den_.degree()];
    num_ = num_ * lead.inv();
    den_ = den_ * lead.inv();
  }

  RPoly num_, den_;
};

}  // namespace wqt
