#pragma once

#include <wqt/freefield.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace wqt {

// Occupation vector (m_1, ..., m_{L+1}) indexing a normal-ordered
// Lambda-monomial of total degree i; slot u (0-based, colors ascending)
// carries the argument shift -i+1+2u.
class WMonomial {
public:
  explicit WMonomial(std::vector<long> occ) : occ_(std::move(occ)) {}

  long degree() const {
    long d = 0;
    for (long m : occ_) d += m;
    return d;
  }
  const std::vector<long>& occ() const { return occ_; }
  long at(int color) const { return occ_.at(color - 1); }
  int colors() const { return static_cast<int>(occ_.size()); }

  int min_support() const {
    for (int k = 1; k <= colors(); ++k)
      if (at(k) > 0) return k;
    return 0;
  }
  int max_support() const {
    for (int k = colors(); k >= 1; --k)
      if (at(k) > 0) return k;
    return 0;
  }

  // (color, shift) per slot, shifts -i+1, -i+3, ..., i-1.
  std::vector<std::pair<int, long>> slots() const {
    std::vector<std::pair<int, long>> v;
    long i = degree();
    long u = 0;
    for (int k = 1; k <= colors(); ++k)
      for (long t = 0; t < at(k); ++t) v.push_back({k, -i + 1 + 2 * u++});
    return v;
  }

  WMonomial operator+(const WMonomial& o) const {
    std::vector<long> s(occ_.size());
    for (std::size_t k = 0; k < occ_.size(); ++k) s[k] = occ_[k] + o.occ_[k];
    return WMonomial(std::move(s));
  }
  bool operator==(const WMonomial& o) const { return occ_ == o.occ_; }
  bool operator<(const WMonomial& o) const { return occ_ < o.occ_; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t k = 0; k < occ_.size(); ++k)
      s += (k ? "," : "") + std::to_string(occ_[k]);
    return s + ")";
  }

private:
  std::vector<long> occ_;
};

// All degree-i occupation vectors obeying the parity caps: at most one
// per eps-class color, unbounded on delta-class colors.
inline std::vector<WMonomial> enumerate_monomials(const ParamTable& t, long i) {
  std::vector<WMonomial> out;
  std::vector<long> occ(t.L() + 1, 0);
  auto rec = [&](auto&& self, int color, long left) -> void {
    if (color > t.L() + 1) {
      if (left == 0) out.push_back(WMonomial(occ));
      return;
    }
    long cap = t.in_eps(color) ? std::min<long>(1, left) : left;
    for (long m = 0; m <= cap; ++m) {
      occ[color - 1] = m;
      self(self, color + 1, left - m);
    }
    occ[color - 1] = 0;
  };
  rec(rec, 1, i);
  std::sort(out.begin(), out.end());
  return out;
}

// c(r,x) = [r]_x [r-1]_x (x - x^{-1}).
inline BigRat c_factor(const ParamTable& t) {
  return t.bracket(XExponent::r_(1), 1) * t.bracket(XExponent(BigRat(-1), BigRat(1), BigRat(0)), 1) *
         t.x_minus_xinv();
}

// d_j(r,x) = prod_{l=1}^{j} [r-l]_x/[l]_x.
inline BigRat d_weight(const ParamTable& t, long j) {
  BigRat acc(1);
  for (long l = 1; l <= j; ++l)
    acc *= t.bracket(XExponent(BigRat(-l), BigRat(1), BigRat(0)), 1) /
           t.bracket(XExponent::one_(l), 1);
  return acc;
}

struct WeightedMonomial {
  WMonomial mono;
  BigRat coeff;
};

// W-current of degree i as a d-weighted monomial table; zero weights
// (integral r specializations) are dropped.
class WCurrent {
public:
  WCurrent(const ParamTable& t, long i, const std::map<WMonomial, BigRat>* tweaks = nullptr)
      : degree_(i) {
    for (const auto& m : enumerate_monomials(t, i)) {
      BigRat w(1);
      for (int k = 1; k <= t.L() + 1; ++k) {
        if (t.in_eps(k)) continue;
        w *= d_weight(t, m.at(k));
      }
      if (tweaks) {
        auto it = tweaks->find(m);
        if (it != tweaks->end()) w += it->second;
      }
      if (!w.is_zero()) entries_.push_back({m, w});
    }
  }

  long degree() const { return degree_; }
  const std::vector<WeightedMonomial>& entries() const { return entries_; }

private:
  long degree_;
  std::vector<WeightedMonomial> entries_;
};

inline WCurrent t_current(const ParamTable& t, long i) { return WCurrent(t, i); }

// ---------------------------------------------------------------------
// Factored rational kernels prod (1 - x^{e} z)^{k} with exact exponents.
// ---------------------------------------------------------------------

class FactoredKernel {
public:
  FactoredKernel() = default;

  void mul_factor(const XExponent& e, long k) {
    if (k == 0) return;
    factors_[e] += k;
    if (factors_[e] == 0) factors_.erase(e);
  }
  // Delta_i(x^{shift} z)^{k}
  void mul_delta(long i, const XExponent& shift, long k = 1) {
    mul_factor(XExponent::r_(2) - XExponent::one_(i) + shift, k);
    mul_factor(XExponent::one_(i) - XExponent::r_(2) + shift, k);
    mul_factor(XExponent::one_(i) + shift, -k);
    mul_factor(XExponent::one_(-i) + shift, -k);
  }
  void mul(const FactoredKernel& o) {
    for (const auto& [e, k] : o.factors_) mul_factor(e, k);
    sign_ *= o.sign_;
    xpow_ = xpow_ + o.xpow_;
    zpow_ += o.zpow_;
  }
  FactoredKernel inverse() const {
    FactoredKernel f;
    for (const auto& [e, k] : factors_) f.factors_[e] = -k;
    f.sign_ = sign_;
    f.xpow_ = -xpow_;
    f.zpow_ = -zpow_;
    return f;
  }
  // z -> 1/z, normalized back to (1 - x^e z) factors.
  FactoredKernel invert_arg() const {
    FactoredKernel f;
    f.sign_ = sign_;
    f.xpow_ = xpow_;
    f.zpow_ = -zpow_;
    for (const auto& [e, k] : factors_) {
      // (1 - x^e / z)^k = (-x^e)^k z^{-k} (1 - x^{-e} z)^k
      if (k % 2 != 0) f.sign_ = -f.sign_;
      f.xpow_ = f.xpow_ + e * k;
      f.zpow_ -= k;
      f.factors_[-e] += k;
    }
    std::erase_if(f.factors_, [](const auto& kv) { return kv.second == 0; });
    return f;
  }

  bool operator==(const FactoredKernel& o) const {
    return factors_ == o.factors_ && sign_ == o.sign_ && xpow_ == o.xpow_ && zpow_ == o.zpow_;
  }

  bool is_one() const {
    return factors_.empty() && sign_ == 1 && xpow_.is_zero() && zpow_ == 0;
  }

  const std::map<XExponent, long>& factors() const { return factors_; }

  // Net factor exponents grouped by the evaluated t-power of x^{e}:
  // specializations with integer r can merge r-dependent zeros onto the
  // integral pole lattice, so all pole analysis is value-based.
  std::map<BigRat, long> merged_factors(const EvalPoint& pt) const {
    std::map<BigRat, long> m;
    for (const auto& [e, k] : factors_) m[pt.t_exponent(e)] += k;
    std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
    return m;
  }

  // Pole points as integer exponents of x (z0 = x^{pe}) with their net
  // orders. Throws if a surviving pole sits off the integer lattice.
  std::vector<std::pair<long, long>> pole_points(const EvalPoint& pt) const {
    std::vector<std::pair<long, long>> v;
    BigRat pq = BigRat(pt.p) * BigRat(pt.q);
    for (const auto& [texp, k] : merged_factors(pt)) {
      if (k >= 0) continue;
      BigRat pe = -texp / pq;
      if (!pe.is_integer())
        throw std::logic_error("FactoredKernel: pole off the x-lattice, t-degree " + texp.str());
      v.push_back({pe.num().convert_to<long>(), -k});
    }
    return v;
  }

  BigRat eval(const EvalPoint& pt, const BigRat& z) const {
    BigRat acc(BigRat(sign_) * xpow_eval(xpow_, pt) * z.pow(zpow_));
    for (const auto& [texp, k] : merged_factors(pt)) {
      if (!texp.is_integer()) throw std::logic_error("FactoredKernel::eval: fractional power");
      BigRat b = BigRat(1) - pt.t_power(texp.num().convert_to<std::int64_t>()) * z;
      if (b.is_zero()) {
        if (k < 0) throw std::domain_error("FactoredKernel::eval: hit a pole");
        return BigRat(0);
      }
      acc *= b.pow(k);
    }
    return acc;
  }

  // Local expansion at the pole z0 = x^{e0}:
  //   G(z) = sum_{s=1..n} c_{-s} / (1 - z/z0)^s + regular,
  // returned as c[s-1] = c_{-s}. Exact, via truncated Taylor products.
  std::vector<BigRat> pole_coefficients(const EvalPoint& pt, long e0) const {
    auto groups = merged_factors(pt);
    BigRat target = pt.t_exponent(XExponent::one_(-e0));
    long n = 0;
    if (auto it = groups.find(target); it != groups.end() && it->second < 0) n = -it->second;
    if (n == 0) return {};
    BigRat z0 = xpow_eval(XExponent::one_(e0), pt);
    // H(z) = G(z) (1 - z/z0)^n: product of the remaining groups.
    // Taylor coefficients of H around z0, orders 0..n-1.
    std::vector<BigRat> h{BigRat(sign_) * xpow_eval(xpow_, pt)};
    h.resize(n, BigRat(0));
    auto mul_taylor = [&](const std::vector<BigRat>& f) {
      std::vector<BigRat> out(n, BigRat(0));
      for (long a = 0; a < n; ++a)
        for (long b = 0; a + b < n; ++b) out[a + b] += h[a] * f[b];
      h = std::move(out);
    };
    if (zpow_ != 0) {
      // z^{zpow} = (z0 + (z-z0))^{zpow}: binomial series.
      std::vector<BigRat> f(n, BigRat(0));
      BigRat binom(1);
      for (long s = 0; s < n; ++s) {
        f[s] = binom * z0.pow(zpow_ - s);
        binom = binom * BigRat(zpow_ - s) / BigRat(s + 1);
      }
      mul_taylor(f);
    }
    for (const auto& [texp, k] : groups) {
      if (texp == target) continue;
      if (!texp.is_integer()) throw std::logic_error("FactoredKernel: fractional power");
      BigRat c = pt.t_power(texp.num().convert_to<std::int64_t>());
      BigRat base = BigRat(1) - c * z0;
      // (base - c (z-z0))^k
      std::vector<BigRat> f(n, BigRat(0));
      BigRat binom(1);
      for (long s = 0; s < n; ++s) {
        f[s] = binom * base.pow(k - s) * (-c).pow(s);
        binom = binom * BigRat(k - s) / BigRat(s + 1);
      }
      mul_taylor(f);
    }
    // c_{-(n-s)} = (-z0)^s h_s.
    std::vector<BigRat> c(n, BigRat(0));
    for (long s = 0; s < n; ++s) c[n - s - 1] = (-z0).pow(s) * h[s];
    return c;
  }

  // Exact rational function at the evaluation point.
  RationalFn to_rational(const EvalPoint& pt) const {
    LaurentPoly num = LaurentPoly::monomial(BigRat(sign_) * xpow_eval(xpow_, pt), zpow_);
    LaurentPoly den = LaurentPoly::constant(BigRat(1));
    for (const auto& [e, k] : factors_) {
      LaurentPoly f = LaurentPoly::one_minus(xpow_eval(e, pt));
      for (long i = 0; i < std::abs(k); ++i) {
        if (k > 0)
          num = num * f;
        else
          den = den * f;
      }
    }
    return RationalFn(num, den);
  }

  std::string str() const {
    std::string s = sign_ == 1 ? "" : "-";
    if (!xpow_.is_zero()) s += "x^" + xpow_.str() + " ";
    if (zpow_ != 0) s += "z^" + std::to_string(zpow_) + " ";
    for (const auto& [e, k] : factors_) s += "(1-x^" + e.str() + "z)^" + std::to_string(k) + " ";
    return s.empty() ? "1" : s;
  }

private:
  std::map<XExponent, long> factors_;
  int sign_ = 1;
  XExponent xpow_;
  long zpow_ = 0;
};

// Delta_i(z) as an exact rational function (in z, at the bound point).
inline FactoredKernel delta_kernel(long i) {
  FactoredKernel f;
  f.mul_delta(i, XExponent::zero());
  return f;
}

inline RationalFn delta_fn(const ParamTable& t, long i) {
  return delta_kernel(i).to_rational(t.pt());
}

// Delta_1 evaluated at the scalar point x^{e}.
inline BigRat delta1_at(const ParamTable& t, long e) {
  FactoredKernel d = delta_kernel(1);
  return d.eval(t.pt(), xpow_eval(XExponent::one_(e), t.pt()));
}

// prod_{l=1}^{n} Delta_1(x^{2l+1})
inline BigRat delta1_ladder(const ParamTable& t, long n) {
  BigRat acc(1);
  for (long l = 1; l <= n; ++l) acc *= delta1_at(t, 2 * l + 1);
  return acc;
}

// f_{1,1} phi_{Lambda_k Lambda_l} closed forms (the four cases).
inline FactoredKernel pair_closed_form(const ParamTable& t, int k, int l) {
  FactoredKernel f;
  if (k < l)
    f.mul_delta(1, XExponent::one_(-1));
  else if (k > l)
    f.mul_delta(1, XExponent::one_(1));
  else if (t.in_delta(k))
    f.mul_delta(2, XExponent::zero());
  return f;
}

// Exact kernel of f_{i,j}(z2/z1) A(z1) B(z2) relative to :A(z1)B(z2):,
// assembled from the f-fusion decomposition and the pairwise closed
// forms; z = z2/z1.
inline FactoredKernel pair_kernel(const ParamTable& t, const WMonomial& A, const WMonomial& B) {
  FactoredKernel G;
  long i = A.degree(), j = B.degree();
  if (i == 0 || j == 0) return G;
  auto aslots = A.slots();
  auto bslots = B.slots();
  // f_{i,j} splits into f_{1,Max} factors over the lower-degree side's
  // slots; each f_{1,1} factor then pairs with one contraction.
  if (i <= j) {
    for (const auto& [ka, sa] : aslots)
      for (long kk = 1; kk <= j - 1; ++kk)
        G.mul_delta(1, XExponent::one_(-j + 2 * kk - sa), -1);
  } else {
    for (const auto& [kb, sb] : bslots)
      for (long kk = 1; kk <= i - 1; ++kk)
        G.mul_delta(1, XExponent::one_(-i + 2 * kk + sb), -1);
  }
  for (const auto& [ka, sa] : aslots)
    for (const auto& [kb, sb] : bslots) {
      FactoredKernel c = pair_closed_form(t, ka, kb);
      FactoredKernel shifted;
      for (const auto& [e, k] : c.factors()) shifted.mul_factor(e + XExponent::one_(sb - sa), k);
      G.mul(shifted);
    }
  // Structural guard: all surviving poles must be integral and lie in
  // the range/parity allowed by the degree data.
  for (const auto& [e, k] : G.factors()) {
    if (k >= 0) continue;
    if (!e.is_integer())
      throw std::logic_error("pair_kernel: r-dependent pole survives: " + e.str());
    long pe = -e.c0.num().convert_to<long>();
    if (std::abs(pe) > i + j || ((pe - (i + j)) % 2) != 0)
      throw std::logic_error("pair_kernel: pole outside the admissible set: z0 = x^" +
                             std::to_string(pe));
  }
  return G;
}

// ---------------------------------------------------------------------
// Monomial fusion (appendix data) and exchange with a single Lambda.
// ---------------------------------------------------------------------

struct FusionResult {
  BigRat coeff;
  WMonomial fused;
  long center_shift;  // fused monomial argument is x^{center_shift} z2
};

inline std::optional<FusionResult> fuse_monomials(const ParamTable& t, const WMonomial& A,
                                                  const WMonomial& B, int sign) {
  long i = A.degree(), j = B.degree();
  if (i < 1 || j < 1) throw std::invalid_argument("fuse_monomials: degrees must be >= 1");
  BigRat ladder = delta1_ladder(t, std::min(i, j) - 1);
  BigRat c = c_factor(t);
  // sign +: z1 -> x^{+(i+j)} z2; the first operand must sit to the right
  // (higher colors) of the second. sign -: mirrored.
  const WMonomial& right = sign > 0 ? A : B;
  const WMonomial& left = sign > 0 ? B : A;
  int lmax = left.max_support(), rmin = right.min_support();
  BigRat coeff;
  if (lmax < rmin) {
    coeff = BigRat(sign > 0 ? -1 : 1) * c * ladder;
  } else if (lmax == rmin && t.in_delta(lmax)) {
    long m = right.at(lmax), n = left.at(lmax);
    BigRat dr = d_weight(t, m + n) / (d_weight(t, m) * d_weight(t, n));
    coeff = BigRat(sign > 0 ? -1 : 1) * c * dr * ladder;
  } else {
    return std::nullopt;
  }
  return FusionResult{coeff, A + B, sign > 0 ? i : -i};
}

// Delta-function terms of
//   f_{1,i}(z2/z1) Lambda_l(z1) M(z2) - f_{i,1}(z1/z2) M(z2) Lambda_l(z1)
// as pairs delta(x^{e} z2/z1) with exact coefficients; e is stored, the
// operator content is Lambda_l at x^{e} z2 against M(z2).
struct DeltaTerm {
  long arg_exp;  // e in delta(x^{e} z2/z1)
  BigRat coeff;
};

inline std::vector<DeltaTerm> exchange_with_lambda(const ParamTable& t, int l,
                                                   const WMonomial& M) {
  long i = M.degree();
  if (i < 1) throw std::invalid_argument("exchange_with_lambda: degree must be >= 1");
  if (M.at(l) != 0 && t.in_eps(l)) return {};  // commuting case
  long P = 0, S = 0;
  for (int k = 1; k < l; ++k) P += M.at(k);
  for (int k = l + 1; k <= M.colors(); ++k) S += M.at(k);
  BigRat c = c_factor(t);
  if (M.at(l) != 0) {
    long m = M.at(l);
    c *= d_weight(t, m + 1) / (d_weight(t, 1) * d_weight(t, m));
  }
  return {{-i - 1 + 2 * P, c}, {i + 1 - 2 * S, -c}};
}

}  // namespace wqt
