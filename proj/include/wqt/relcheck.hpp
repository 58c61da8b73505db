#pragma once

#include <wqt/wcurrents.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace wqt {

// Canonical key for a normal-ordered Lambda-symbol: sorted multiset of
// (color, integer shift of the argument relative to z2).
using Symbol = std::vector<std::pair<int, long>>;

inline Symbol make_symbol(const WMonomial& A, long ashift, const WMonomial& B, long bshift) {
  Symbol s;
  for (auto [c, sh] : A.slots()) s.push_back({c, sh + ashift});
  for (auto [c, sh] : B.slots()) s.push_back({c, sh + bshift});
  std::sort(s.begin(), s.end());
  return s;
}

inline std::string symbol_str(const Symbol& s) {
  std::string out;
  for (auto& [c, sh] : s) out += "L" + std::to_string(c) + "@" + std::to_string(sh) + " ";
  return out.empty() ? "1" : out;
}

struct LedgerRow {
  long pole_exp = 0;  // pole at z2/z1 = x^{pole_exp}
  Symbol symbol;
  BigRat lhs;        // aggregated first-order delta coefficient
  BigRat rhs;        // matching coefficient from the right-hand side
  bool matched = false;
};

struct RelationReport {
  std::string name;
  int i = 0, j = 0;
  bool pass = true;
  long pairs_checked = 0;
  std::vector<LedgerRow> ledger;
  std::vector<std::string> failures;
  double seconds = 0;

  void fail(const std::string& what) {
    pass = false;
    if (failures.size() < 64) failures.push_back(what);
  }
  std::string summary() const {
    std::ostringstream os;
    os << name << "(" << i << "," << j << "): " << (pass ? "pass" : "FAIL") << " ["
       << pairs_checked << " pairs, " << ledger.size() << " ledger rows]";
    for (const auto& f : failures) os << "\n  " << f;
    return os.str();
  }
};

namespace detail {

struct PoleData {
  std::vector<BigRat> coeffs;  // c_{-1}, c_{-2}, ...
};

// Aggregate the delta data of all monomial-pair kernels of T_i T_j.
inline std::map<std::pair<long, Symbol>, PoleData> lhs_ledger(const ParamTable& t,
                                                              const WCurrent& Ti,
                                                              const WCurrent& Tj,
                                                              RelationReport* rep) {
  std::map<std::pair<long, Symbol>, PoleData> acc;
  for (const auto& ea : Ti.entries())
    for (const auto& eb : Tj.entries()) {
      ++rep->pairs_checked;
      FactoredKernel G = pair_kernel(t, ea.mono, eb.mono);
      for (auto [pe, order] : G.pole_points(t.pt())) {
        auto cs = G.pole_coefficients(t.pt(), pe);
        Symbol sym = make_symbol(ea.mono, -pe, eb.mono, 0);
        auto& slot = acc[{pe, sym}];
        if (slot.coeffs.size() < cs.size()) slot.coeffs.resize(cs.size(), BigRat(0));
        for (std::size_t s = 0; s < cs.size(); ++s)
          slot.coeffs[s] += ea.coeff * eb.coeff * cs[s];
      }
    }
  return acc;
}

}  // namespace detail

// Exchange relation: per-pair kernel equality between the two orders,
// plus the aggregated pole-support statement.
inline RelationReport check_exchange(const ParamTable& t, int i, int j) {
  RelationReport rep{"exchange"};
  rep.i = i;
  rep.j = j;
  WCurrent Ti(t, i), Tj(t, j);
  for (const auto& ea : Ti.entries())
    for (const auto& eb : Tj.entries()) {
      FactoredKernel gab = pair_kernel(t, ea.mono, eb.mono);
      FactoredKernel gba = pair_kernel(t, eb.mono, ea.mono).invert_arg();
      if (!(gab == gba))
        rep.fail("kernel mismatch between orders at " + ea.mono.str() + " x " + eb.mono.str());
    }
  // Aggregated poles confined to x^{+-(|j-i|+2k)}, 1 <= k <= Min(i,j).
  auto lhs = detail::lhs_ledger(t, Ti, Tj, &rep);
  for (auto& [key, data] : lhs) {
    long pe = key.first;
    long absent = std::abs(pe);
    bool candidate = absent >= std::abs(j - i) + 2 && absent <= i + j &&
                     (absent - std::abs(j - i)) % 2 == 0;
    if (candidate) continue;
    for (const auto& c : data.coeffs)
      if (!c.is_zero())
        rep.fail("aggregated pole outside the candidate set at x^" + std::to_string(pe) +
                 " symbol " + symbol_str(key.second));
  }
  return rep;
}

// Fusion relation: residues at the outermost poles assemble the
// (i+j)-current with the c(r,x) Delta-ladder coefficient.
inline RelationReport check_fusion(const ParamTable& t, int i, int j) {
  RelationReport rep{"fusion"};
  rep.i = i;
  rep.j = j;
  WCurrent Ti(t, i), Tj(t, j), Tij(t, i + j);
  BigRat ladder = delta1_ladder(t, std::min(i, j) - 1);
  BigRat c = c_factor(t);
  for (int sign : {+1, -1}) {
    long pe = sign > 0 ? -(i + j) : (i + j);
    std::map<Symbol, BigRat> lhs, rhs;
    for (const auto& ea : Ti.entries())
      for (const auto& eb : Tj.entries()) {
        ++rep.pairs_checked;
        FactoredKernel G = pair_kernel(t, ea.mono, eb.mono);
        auto cs = G.pole_coefficients(t.pt(), pe);
        if (cs.size() > 1) {
          rep.fail("higher-order pole at the fusion point");
          continue;
        }
        if (!cs.empty() && !cs[0].is_zero())
          lhs[make_symbol(ea.mono, -pe, eb.mono, 0)] += ea.coeff * eb.coeff * cs[0];
        // Cross-check the per-pair limit against the appendix data.
        auto fr = fuse_monomials(t, ea.mono, eb.mono, sign);
        BigRat expect = fr ? fr->coeff : BigRat(0);
        BigRat got = cs.empty() ? BigRat(0) : cs[0];
        if (got != expect)
          rep.fail("per-pair fusion coefficient mismatch at " + ea.mono.str() + " x " +
                   eb.mono.str());
      }
    for (const auto& e : Tij.entries()) {
      Symbol sym;
      long center = sign > 0 ? i : -i;
      for (auto [col, sh] : e.mono.slots()) sym.push_back({col, sh + center});
      std::sort(sym.begin(), sym.end());
      rhs[sym] += BigRat(sign > 0 ? -1 : 1) * c * ladder * e.coeff;
    }
    for (const auto& [sym, v] : rhs) {
      auto it = lhs.find(sym);
      BigRat got = it == lhs.end() ? BigRat(0) : it->second;
      rep.ledger.push_back({pe, sym, got, v, got == v});
      if (got != v) rep.fail("fusion ledger mismatch at symbol " + symbol_str(sym));
    }
    for (const auto& [sym, v] : lhs)
      if (!rhs.count(sym) && !v.is_zero())
        rep.fail("fusion produces an unexpected symbol " + symbol_str(sym));
  }
  rep.pairs_checked /= 2;
  return rep;
}

// The full quadratic relation: every aggregated first-order delta
// coefficient of the left side matches the k-sum of the right side, all
// higher-order aggregates vanish, and nothing survives off-support.
inline RelationReport check_quadratic(const ParamTable& t, int i, int j) {
  RelationReport rep{"quadratic"};
  rep.i = i;
  rep.j = j;
  if (i > j) throw std::invalid_argument("check_quadratic: need i <= j");
  WCurrent Ti(t, i), Tj(t, j);
  auto lhs = detail::lhs_ledger(t, Ti, Tj, &rep);
  BigRat c = c_factor(t);

  // The right side pairs the delta at x^{+-(j-i+2k)} with the exact
  // rational kernel of T_{i-k} T_{j+k} at the pinned ratio x^{+-(j-i)}.
  // Individual pair kernels can be singular there; the per-symbol sums
  // are regular, so sum as rational functions before evaluating.
  std::map<std::pair<long, Symbol>, BigRat> rhs;
  for (int k = 1; k <= i; ++k) {
    BigRat ladder = delta1_ladder(t, k - 1);
    WCurrent Tc(t, i - k), Td(t, j + k);
    for (int sign : {+1, -1}) {
      long pe = sign > 0 ? (j - i + 2 * k) : -(j - i + 2 * k);
      long cshift = sign > 0 ? (i - j - k) : (j - i + k);
      long dshift = sign > 0 ? -k : k;
      BigRat weval = xpow_eval(XExponent::one_(sign > 0 ? j - i : i - j), t.pt());
      std::map<Symbol, RationalFn> sums;
      for (const auto& ec : Tc.entries())
        for (const auto& ed : Td.entries()) {
          FactoredKernel G = pair_kernel(t, ec.mono, ed.mono);
          RationalFn f = G.to_rational(t.pt());
          LaurentPoly w = LaurentPoly::constant(ec.coeff * ed.coeff);
          f = f * RationalFn(w, LaurentPoly::constant(BigRat(1)));
          Symbol sym = make_symbol(ec.mono, cshift, ed.mono, dshift);
          auto it = sums.find(sym);
          if (it == sums.end())
            sums.emplace(sym, f);
          else
            it->second = it->second + f;
        }
      for (auto& [sym, f] : sums) {
        BigRat coeff = BigRat(sign) * c * ladder * f.eval(weval);
        if (coeff.is_zero()) continue;
        rhs[{pe, sym}] += coeff;
      }
    }
  }

  // Compare.
  std::map<std::pair<long, Symbol>, bool> keys;
  for (auto& [k, v] : lhs) keys[k] = true;
  for (auto& [k, v] : rhs) keys[k] = true;
  for (auto& [key, unused] : keys) {
    BigRat l(0), r(0);
    bool higher_ok = true;
    if (auto it = lhs.find(key); it != lhs.end()) {
      l = it->second.coeffs.empty() ? BigRat(0) : it->second.coeffs[0];
      for (std::size_t s = 1; s < it->second.coeffs.size(); ++s)
        if (!it->second.coeffs[s].is_zero()) higher_ok = false;
    }
    if (auto it = rhs.find(key); it != rhs.end()) r = it->second;
    bool ok = (l == r) && higher_ok;
    rep.ledger.push_back({key.first, key.second, l, r, ok});
    if (!ok)
      rep.fail("ledger row at x^" + std::to_string(key.first) + " " + symbol_str(key.second) +
               ": lhs " + l.str() + " vs rhs " + r.str() +
               (higher_ok ? "" : " (higher-order delta survives)"));
  }
  return rep;
}

struct DiagramIndependenceReport {
  bool pass = true;
  int systems = 0;
  XExponent common_a;
  std::vector<std::string> failures;
};

// The quadratic relations hold with the same structure data for every
// fundamental system of A(M,N).
inline DiagramIndependenceReport check_diagram_independence(int M, int N, const EvalPoint& pt,
                                                            const std::vector<std::pair<int, int>>& ijs) {
  DiagramIndependenceReport rep;
  auto systems = enumerate_systems(M, N);
  rep.systems = static_cast<int>(systems.size());
  rep.common_a = D_exponent(systems.front(), 0, systems.front().L());
  for (const auto& d : systems) {
    if (D_exponent(d, 0, d.L()) != rep.common_a) {
      rep.pass = false;
      rep.failures.push_back("a differs for system " + d.canonical_word());
      continue;
    }
    ParamTable t(d, pt);
    for (auto [i, j] : ijs) {
      RelationReport r = check_quadratic(t, i, j);
      if (!r.pass) {
        rep.pass = false;
        rep.failures.push_back("system " + d.canonical_word() + ": " + r.summary());
      }
    }
  }
  return rep;
}

}  // namespace wqt
