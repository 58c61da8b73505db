#pragma once

#include <wqt/freefield.hpp>
#include <wqt/wcurrents.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace wqt {

// Basis state of the charge-zero Fock space: multiset of excitations
// (color, mode), mode > 0, total degree bounded by the cutoff.
using FockState = std::vector<std::pair<int, long>>;  // sorted

inline long fock_degree(const FockState& s) {
  long d = 0;
  for (auto& [c, m] : s) d += m;
  return d;
}

class FockSpace {
public:
  FockSpace(int L, long cutoff) : L_(L), cutoff_(cutoff) {
    FockState cur;
    gen(cur, 1, 1, cutoff);
    std::sort(basis_.begin(), basis_.end());
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = static_cast<int>(i);
  }

  int L() const { return L_; }
  long cutoff() const { return cutoff_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const FockState& state(int i) const { return basis_[i]; }
  int index(const FockState& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
  }

private:
  void gen(FockState& cur, int color, long mode, long left) {
    basis_.push_back(cur);
    // Emit states in nondecreasing (color, mode) order to avoid dupes.
    for (int c = color; c <= L_; ++c)
      for (long m = (c == color ? mode : 1); m <= left; ++m) {
        cur.push_back({c, m});
        FockState saved = cur;
        std::sort(cur.begin(), cur.end());
        gen(cur, c, m, left - m);
        cur = saved;
        cur.pop_back();
      }
  }

  int L_;
  long cutoff_;
  std::vector<FockState> basis_;
  std::map<FockState, int> index_;
};

using Matrix = std::vector<std::vector<BigRat>>;

inline Matrix zero_matrix(int n) { return Matrix(n, std::vector<BigRat>(n, BigRat(0))); }

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  int n = static_cast<int>(a.size());
  Matrix c = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (int j = 0; j < n; ++j)
        if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

// Creation/annihilation matrices. a_c(-m) appends an excitation;
// a_c(+m) contracts against each matching excitation with
// [a_c(m), a_{c'}(-m)] = (1/m) A_{c,c'}(m).
class FockOperators {
public:
  FockOperators(const ParamTable& t, const FockSpace& space) : t_(t), space_(space) {}

  const FockSpace& space() const { return space_; }

  // Apply a_c(m) (m != 0) to a state vector keyed by basis index.
  void apply_mode(int c, long m, std::map<int, BigRat>& vec) const {
    std::map<int, BigRat> out;
    for (auto& [idx, coeff] : vec) {
      const FockState& s = space_.state(idx);
      if (m < 0) {
        if (fock_degree(s) + (-m) > space_.cutoff()) continue;  // truncated away
        FockState ns = s;
        ns.push_back({c, -m});
        std::sort(ns.begin(), ns.end());
        out[space_.index(ns)] += coeff;
      } else {
        // Contract against each excitation of mode m.
        for (std::size_t p = 0; p < s.size(); ++p) {
          if (s[p].second != m) continue;
          BigRat amp = t_.A(c, s[p].first, m) / BigRat(m);
          if (amp.is_zero()) continue;
          FockState ns = s;
          ns.erase(ns.begin() + p);
          out[space_.index(ns)] += coeff * amp;
        }
      }
    }
    vec = std::move(out);
  }

  // Mode matrices V[n] (coefficient of z^{-n}) of the vertex operator
  //   V(z) = :exp(sum_{j,m != 0} mu(j,m) a_j(m) z^{-m}):,
  // zero-mode factor acting as 1 on the charge-zero sector. Columns are
  // exact; rows above the cutoff are truncated.
  std::map<long, Matrix> vertex_modes(const std::function<BigRat(int, long)>& mu) const {
    int n = space_.dim();
    long d = space_.cutoff();
    std::map<long, Matrix> out;
    for (int col = 0; col < n; ++col) {
      // (state, z-power) amplitudes; annihilators first.
      std::map<std::pair<int, long>, BigRat> amps{{{col, 0}, BigRat(1)}};
      auto apply_exp = [&](int j, long m) {
        // exp(mu a_j(m) z^{-m}), applied to every amplitude.
        BigRat cmu = mu(j, m);
        std::map<std::pair<int, long>, BigRat> acc;
        for (auto& [key, coeff] : amps) {
          std::map<int, BigRat> vec{{key.first, coeff}};
          BigRat fact(1);
          long power = 0;
          acc[{key.first, key.second}] += coeff;
          for (long k = 1; !vec.empty(); ++k) {
            if (cmu.is_zero()) break;
            apply_mode(j, m, vec);
            if (vec.empty()) break;
            fact *= BigRat(k);
            power += m;
            for (auto& [idx, v] : vec)
              acc[{idx, key.second - power}] += v * cmu.pow(k) / fact;
            // Scale for the next application: we reuse vec unscaled.
          }
        }
        amps = std::move(acc);
      };
      for (int j = 1; j <= t_.L(); ++j)
        for (long m = 1; m <= d; ++m) apply_exp(j, m);
      for (int j = 1; j <= t_.L(); ++j)
        for (long m = 1; m <= d; ++m) apply_exp(j, -m);
      for (auto& [key, v] : amps) {
        if (v.is_zero()) continue;
        long zpow = key.second;  // z^{zpow}; V[n] = coeff of z^{-n}
        Matrix& M = out.try_emplace(-zpow, zero_matrix(n)).first->second;
        M[key.first][col] += v;
      }
    }
    return out;
  }

  // Mode matrices of a normal-ordered Lambda-monomial at x^{shift} z
  // offsets (single Lambda: the one-slot monomial).
  std::map<long, Matrix> monomial_modes(const WMonomial& mono) const {
    auto slots = mono.slots();
    return vertex_modes([&](int j, long m) {
      BigRat acc(0);
      for (auto& [color, shift] : slots)
        acc += t_.lam(color, j, m) * xpow_eval(XExponent::one_(-shift * m), t_.pt());
      return acc;
    });
  }

private:
  const ParamTable& t_;
  const FockSpace& space_;
};

struct OracleReport {
  bool pass = true;
  long elements_compared = 0;
  std::vector<std::string> failures;
  void fail(const std::string& s) {
    pass = false;
    if (failures.size() < 32) failures.push_back(s);
  }
};

// Heisenberg commutators on interior states.
inline OracleReport oracle_check_heisenberg(const ParamTable& t, const FockSpace& space) {
  OracleReport rep;
  FockOperators ops(t, space);
  for (long m = 1; m <= space.cutoff(); ++m)
    for (int c1 = 1; c1 <= t.L(); ++c1)
      for (int c2 = 1; c2 <= t.L(); ++c2)
        for (int idx = 0; idx < space.dim(); ++idx) {
          if (fock_degree(space.state(idx)) + m > space.cutoff()) continue;  // clipped
          std::map<int, BigRat> v1{{idx, BigRat(1)}}, v2{{idx, BigRat(1)}};
          ops.apply_mode(c2, -m, v1);
          ops.apply_mode(c1, m, v1);
          ops.apply_mode(c1, m, v2);
          ops.apply_mode(c2, -m, v2);
          // [a_{c1}(m), a_{c2}(-m)] = (1/m) A_{c1,c2}(m) on the state.
          BigRat expect = t.A(c1, c2, m) / BigRat(m);
          std::map<int, BigRat> comm = v1;
          for (auto& [i2, c] : v2) comm[i2] -= c;
          for (auto& [i2, c] : comm) {
            BigRat want = i2 == idx ? expect : BigRat(0);
            ++rep.elements_compared;
            if (c != want) rep.fail("commutator mismatch");
          }
          if (!comm.count(idx) && !expect.is_zero()) rep.fail("missing diagonal commutator");
        }
  return rep;
}

// <vac| Lambda_k(z) Lambda_l(w) |vac> against the contraction series.
inline OracleReport oracle_check_contraction(const ParamTable& t, const FockSpace& space) {
  OracleReport rep;
  FockOperators ops(t, space);
  long d = space.cutoff();
  for (int k = 1; k <= t.L() + 1; ++k)
    for (int l = 1; l <= t.L() + 1; ++l) {
      std::vector<long> okk(t.L() + 1, 0);
      okk[k - 1] = 1;
      std::vector<long> oll(t.L() + 1, 0);
      oll[l - 1] = 1;
      auto mk = ops.monomial_modes(WMonomial(okk));
      auto ml = ops.monomial_modes(WMonomial(oll));
      TruncSeries phi = phi_lambda_pair(t, k, l, d);
      int vac = space.index(FockState{});
      for (long n = 0; n <= d; ++n) {
        BigRat got(0);
        if (mk.count(n) && ml.count(-n)) {
          // <0| Lk[n] Ll[-n] |0>
          const Matrix& a = mk[n];
          const Matrix& b = ml[-n];
          for (int mid = 0; mid < space.dim(); ++mid) got += a[vac][mid] * b[mid][vac];
        }
        ++rep.elements_compared;
        if (got != phi.coeff(n))
          rep.fail("contraction coefficient n=" + std::to_string(n) + " at (k,l)=(" +
                   std::to_string(k) + "," + std::to_string(l) + ")");
      }
    }
  return rep;
}

// Base quadratic relation (i = 1) as truncated matrices on the safe
// window: every intermediate degree must stay below the cutoff.
inline OracleReport oracle_check_base_quadratic(const ParamTable& t, const FockSpace& space,
                                                int j, long window) {
  OracleReport rep;
  FockOperators ops(t, space);
  long d = space.cutoff();
  if (window > d) throw std::invalid_argument("oracle: window too large for the cutoff");
  // Assemble T_1 and T_j mode matrices.
  auto current_modes = [&](long deg) {
    std::map<long, Matrix> acc;
    WCurrent Tc(t, deg);
    for (const auto& e : Tc.entries()) {
      auto mm = ops.monomial_modes(e.mono);
      for (auto& [n, M] : mm) {
        Matrix& A = acc.try_emplace(n, zero_matrix(space.dim())).first->second;
        for (int a = 0; a < space.dim(); ++a)
          for (int b = 0; b < space.dim(); ++b)
            if (!M[a][b].is_zero()) A[a][b] += e.coeff * M[a][b];
      }
    }
    return acc;
  };
  auto t1 = current_modes(1);
  auto tj = current_modes(j);
  auto tj1 = current_modes(j + 1);
  TruncSeries f1j = struct_fn_series(t, 1, j, 3 * d + 2);
  BigRat c = c_factor(t);
  auto modeat = [&](std::map<long, Matrix>& m, long n) -> const Matrix* {
    auto it = m.find(n);
    return it == m.end() ? nullptr : &it->second;
  };
  for (long n1 = -window; n1 <= window; ++n1)
    for (long n2 = -window; n2 <= window; ++n2) {
      Matrix lhs = zero_matrix(space.dim());
      for (long m = 0; m <= 3 * d; ++m) {
        BigRat fm = f1j.coeff(m);
        if (!fm.is_zero()) {
          const Matrix* a = modeat(t1, n1 - m);
          const Matrix* b = modeat(tj, n2 + m);
          if (a && b) {
            Matrix p = matmul(*a, *b);
            for (int r = 0; r < space.dim(); ++r)
              for (int cc = 0; cc < space.dim(); ++cc)
                if (!p[r][cc].is_zero()) lhs[r][cc] += fm * p[r][cc];
          }
          const Matrix* b2 = modeat(tj, n2 - m);
          const Matrix* a2 = modeat(t1, n1 + m);
          if (a2 && b2) {
            Matrix p = matmul(*b2, *a2);
            for (int r = 0; r < space.dim(); ++r)
              for (int cc = 0; cc < space.dim(); ++cc)
                if (!p[r][cc].is_zero()) lhs[r][cc] -= fm * p[r][cc];
          }
        }
      }
      // RHS: c(r,x) (x^{n2 - j n1} - x^{-(n2 - j n1)}) T_{j+1}[n1+n2].
      Matrix rhs = zero_matrix(space.dim());
      if (const Matrix* m3 = modeat(tj1, n1 + n2)) {
        BigRat xe = xpow_eval(XExponent::one_(n2 - j * n1), t.pt());
        BigRat coef = c * (xe - xe.inv());
        for (int r = 0; r < space.dim(); ++r)
          for (int cc = 0; cc < space.dim(); ++cc)
            if (!(*m3)[r][cc].is_zero()) rhs[r][cc] = coef * (*m3)[r][cc];
      }
      // Compare on the safe window.
      for (int row = 0; row < space.dim(); ++row)
        for (int col = 0; col < space.dim(); ++col) {
          long dpsi = fock_degree(space.state(col));
          if (dpsi - n1 > d || dpsi - n2 > d) continue;  // unsafe: truncation clips
          ++rep.elements_compared;
          if (lhs[row][col] != rhs[row][col])
            rep.fail("matrix element mismatch at (n1,n2)=(" + std::to_string(n1) + "," +
                     std::to_string(n2) + ") row " + std::to_string(row) + " col " +
                     std::to_string(col));
        }
    }
  return rep;
}

}  // namespace wqt
