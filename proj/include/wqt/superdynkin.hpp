#pragma once

#include <wqt/rfunction.hpp>
#include <wqt/xexponent.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wqt {

// Basis vector of the weight space: eps (norm +1) or delta (norm -1),
// with a 1-based index within its family.
struct BasisVec {
  bool is_eps;
  int index;
  bool operator==(const BasisVec& o) const { return is_eps == o.is_eps && index == o.index; }
};

enum class Parity { kEven, kOdd };

// Edge classes of the (affinized) diagram. An eps-type edge carries the
// label (1-r)/r, a delta-type edge carries -1/r; the class of edge j is
// the type of the j-th arrangement vector.
enum class EdgeLabel { kEps, kDelta };

inline XExponent edge_label_exponent(EdgeLabel l) {
  // (1-r)/r = 1/r - 1, and -1/r, both on the x-exponent lattice.
  return l == EdgeLabel::kEps ? XExponent(BigRat(-1), BigRat(0), BigRat(1))
                              : XExponent(BigRat(0), BigRat(0), BigRat(-1));
}

inline RFunction edge_label_rfunction(EdgeLabel l) {
  RPoly r = RPoly::r();
  if (l == EdgeLabel::kEps) return RFunction(RPoly(BigRat(1)) - r, r);  // (1-r)/r
  return RFunction(RPoly(BigRat(-1)), r);                               // -1/r
}

// Fundamental system of A(M,N) as an arrangement (v_1, ..., v_{L+1}) of
// the M+1 eps and N+1 delta basis vectors; the simple roots are
// alpha_i = v_i - v_{i+1}. Odd reflections swap adjacent opposite-type
// vectors, so every system reachable from the standard one is such a
// shuffle.
class SuperDiagram {
public:
  SuperDiagram(int M, int N, std::vector<BasisVec> arrangement)
      : M_(M), N_(N), arr_(std::move(arrangement)) {
    if (M < 0 || N < 0 || M + N < 1) throw std::invalid_argument("SuperDiagram: need M+N >= 1");
    if (static_cast<int>(arr_.size()) != M + N + 2)
      throw std::invalid_argument("SuperDiagram: arrangement size must be M+N+2");
  }

  static SuperDiagram standard(int M, int N) {
    if (M < 0 || N < 0 || M + N < 1)
      throw std::invalid_argument("standard_diagram: need M, N >= 0 and M+N >= 1");
    std::vector<BasisVec> a;
    for (int i = 1; i <= M + 1; ++i) a.push_back({true, i});
    for (int i = 1; i <= N + 1; ++i) a.push_back({false, i});
    return SuperDiagram(M, N, std::move(a));
  }

  int M() const { return M_; }
  int N() const { return N_; }
  int L() const { return M_ + N_ + 1; }

  const std::vector<BasisVec>& arrangement() const { return arr_; }

  // Parity of node i (1..L): odd iff v_i and v_{i+1} have opposite type.
  Parity parity(int i) const {
    check_node(i);
    return arr_[i - 1].is_eps != arr_[i].is_eps ? Parity::kOdd : Parity::kEven;
  }

  // Parity of the affine node (index 0 = L+1).
  Parity affine_parity() const {
    return arr_[L()].is_eps != arr_[0].is_eps ? Parity::kOdd : Parity::kEven;
  }

  // Class of edge j (1..L+1): edge j joins nodes j-1 and j (mod L+1) and
  // carries the type of v_j.
  EdgeLabel edge(int j) const {
    if (j < 1 || j > L() + 1) throw std::out_of_range("SuperDiagram: edge index");
    return arr_[j - 1].is_eps ? EdgeLabel::kEps : EdgeLabel::kDelta;
  }

  std::vector<int> odd_nodes() const {
    std::vector<int> v;
    for (int i = 1; i <= L(); ++i)
      if (parity(i) == Parity::kOdd) v.push_back(i);
    return v;
  }

  // Simple root alpha_i as the pair (v_i, -v_{i+1}); exposed for tests.
  std::pair<BasisVec, BasisVec> root(int i) const {
    check_node(i);
    return {arr_[i - 1], arr_[i]};
  }

  // Squared length of alpha_i under the (+1,..,-1,..) form: 2, 0 or -2.
  int root_norm2(int i) const {
    check_node(i);
    int a = arr_[i - 1].is_eps ? 1 : -1;
    int b = arr_[i].is_eps ? 1 : -1;
    return a + b;
  }

  // Odd reflection at node i; the reflected system is the arrangement
  // with v_i and v_{i+1} swapped.
  SuperDiagram odd_reflection(int i) const {
    check_node(i);
    if (parity(i) != Parity::kOdd)
      throw std::invalid_argument("odd_reflection: node " + std::to_string(i) +
                                  " is even (real reflections leave the diagram unchanged)");
    std::vector<BasisVec> a = arr_;
    std::swap(a[i - 1], a[i]);
    return SuperDiagram(M_, N_, std::move(a));
  }

  // Canonical key: the left-to-right edge-label word. Index relabeling
  // within the eps and delta families is a gauge freedom, so the word
  // determines the diagram.
  std::string canonical_word() const {
    std::string w;
    for (const auto& v : arr_) w += v.is_eps ? 'e' : 'd';
    return w;
  }

  std::string serialize() const {
    std::ostringstream os;
    os << "M " << M_ << "\n";
    os << "N " << N_ << "\n";
    os << "nodes";
    for (int i = 1; i <= L(); ++i) os << ' ' << (parity(i) == Parity::kOdd ? "odd" : "even");
    os << "\n";
    os << "edges";
    for (int j = 1; j <= L() + 1; ++j)
      os << ' ' << (edge(j) == EdgeLabel::kEps ? "(1-r)/r" : "-1/r");
    os << "\n";
    return os.str();
  }

private:
  void check_node(int i) const {
    if (i < 1 || i > L()) throw std::out_of_range("SuperDiagram: node index");
  }

  int M_, N_;
  std::vector<BasisVec> arr_;
};

inline SuperDiagram standard_diagram(int M, int N) { return SuperDiagram::standard(M, N); }

// All fundamental systems reachable from the standard one by odd
// reflections, deduplicated by canonical word. Adjacent opposite-type
// swaps reach every shuffle of the two families.
inline std::vector<SuperDiagram> enumerate_systems(int M, int N) {
  std::vector<SuperDiagram> out;
  std::set<std::string> seen;
  std::vector<SuperDiagram> work{SuperDiagram::standard(M, N)};
  seen.insert(work.front().canonical_word());
  while (!work.empty()) {
    SuperDiagram cur = work.back();
    work.pop_back();
    out.push_back(cur);
    for (int i = 1; i <= cur.L(); ++i) {
      if (cur.parity(i) != Parity::kOdd) continue;
      SuperDiagram next = cur.odd_reflection(i);
      if (seen.insert(next.canonical_word()).second) work.push_back(next);
    }
  }
  std::sort(out.begin(), out.end(), [](const SuperDiagram& a, const SuperDiagram& b) {
    return a.canonical_word() < b.canonical_word();
  });
  return out;
}

// Extended (L+1) x (L+1) matrix A_{i,j}(0), i,j = 0..L, plus the index
// sets read off the affinized diagram.
class ExtendedMatrix {
public:
  explicit ExtendedMatrix(const SuperDiagram& d) : diagram_(d) {
    int L = d.L();
    for (int j = 1; j <= L + 1; ++j) {
      if (d.edge(j) == EdgeLabel::kEps)
        i_eps_.push_back(j);
      else
        i_delta_.push_back(j);
    }
    for (int i = 1; i <= L; ++i)
      if (d.parity(i) == Parity::kOdd) jhat_.push_back(i);
    if (jhat_.size() % 2 == 1) jhat_.push_back(L + 1);
  }

  const SuperDiagram& diagram() const { return diagram_; }
  // Indices j in 1..L+1 with A_{j-1,j}(0) = (1-r)/r.
  const std::vector<int>& I_eps() const { return i_eps_; }
  // Indices j in 1..L+1 with A_{j-1,j}(0) = -1/r.
  const std::vector<int>& I_delta() const { return i_delta_; }
  // Fermionic index set, affinized to even cardinality.
  const std::vector<int>& Jhat() const { return jhat_; }

  bool in_jhat(int i) const {
    int n = norm(i);
    if (n == 0) n = diagram_.L() + 1;
    return std::find(jhat_.begin(), jhat_.end(), n) != jhat_.end();
  }
  bool in_I_eps(int j) const { return diagram_.edge(norm_edge(j)) == EdgeLabel::kEps; }
  bool in_I_delta(int j) const { return diagram_.edge(norm_edge(j)) == EdgeLabel::kDelta; }

  // A_{i,j}(0) as an element of Q(r); indices mod L+1.
  RFunction entry(int i, int j) const {
    int L = diagram_.L();
    int a = norm(i), b = norm(j);
    if (a == b) return diagonal(a);
    int lo = std::min(a, b), hi = std::max(a, b);
    if (hi - lo == 1) return edge_label_rfunction(diagram_.edge(edge_of(lo + 1)));
    if (lo == 0 && hi == L) return edge_label_rfunction(diagram_.edge(L + 1));
    return RFunction(BigRat(0));
  }

  int size() const { return diagram_.L() + 1; }

private:
  int norm(int i) const {
    int m = diagram_.L() + 1;
    return ((i % m) + m) % m;
  }
  // Edge j as stored on the diagram for node pair (j-1, j), j in 1..L+1.
  static int edge_of(int j) { return j; }
  int norm_edge(int j) const {
    int m = diagram_.L() + 1;
    int e = ((j - 1) % m + m) % m + 1;
    return e;
  }

  RFunction diagonal(int node) const {
    // Node parity: odd -> 1. Even: -2 * (left edge label).
    int L = diagram_.L();
    Parity p = node == 0 ? diagram_.affine_parity() : diagram_.parity(node);
    if (p == Parity::kOdd) return RFunction(BigRat(1));
    int left_edge = node == 0 ? L + 1 : node;
    return edge_label_rfunction(diagram_.edge(left_edge)) * RFunction(BigRat(-2));
  }

  SuperDiagram diagram_;
  std::vector<int> i_eps_, i_delta_, jhat_;
};

inline ExtendedMatrix extend_matrix(const SuperDiagram& d) { return ExtendedMatrix(d); }

// Overload taking an explicit fermionic index choice; it must match the
// parities of the diagram (the affine index L+1 is appended when the
// count is odd, so it may be supplied or omitted).
inline ExtendedMatrix extend_matrix(const SuperDiagram& d, std::vector<int> jhat) {
  std::vector<int> odd = d.odd_nodes();
  std::vector<int> given;
  for (int j : jhat)
    if (j >= 1 && j <= d.L()) given.push_back(j);
  std::sort(given.begin(), given.end());
  if (given != odd)
    throw std::invalid_argument("extend_matrix: Jhat does not match the odd nodes of the diagram");
  return ExtendedMatrix(d);
}

// Diagram with prescribed node parities: word determined up to the
// global eps<->delta swap, resolved toward M >= N.
inline SuperDiagram diagram_from_parities(int L, const std::vector<int>& odd_nodes) {
  std::vector<bool> eps(L + 1, true);
  auto is_odd = [&](int i) {
    return std::find(odd_nodes.begin(), odd_nodes.end(), i) != odd_nodes.end();
  };
  for (int i = 1; i <= L; ++i) eps[i] = is_odd(i) ? !eps[i - 1] : eps[i - 1];
  int n_eps = static_cast<int>(std::count(eps.begin(), eps.end(), true));
  if (2 * n_eps < L + 1) {
    for (int i = 0; i <= L; ++i) eps[i] = !eps[i];
    n_eps = L + 1 - n_eps;
  }
  std::vector<BasisVec> arr;
  int ei = 0, di = 0;
  for (int i = 0; i <= L; ++i)
    arr.push_back(eps[i] ? BasisVec{true, ++ei} : BasisVec{false, ++di});
  return SuperDiagram(n_eps - 1, L - n_eps, std::move(arr));
}

// D(k,l;Phi) = (r-1)|I(k+1,l+1;-1/r)| + |I(k+1,l+1;(1-r)/r)| for k <= l,
// else 0; exponents stay on the lattice with cinv = 0.
inline XExponent D_exponent(const SuperDiagram& d, int k, int l) {
  if (k < 0 || l < 0 || k > d.L() || l > d.L())
    throw std::out_of_range("D(k,l): indices must lie in [0, L]");
  if (l < k) return XExponent::zero();
  long n_delta = 0, n_eps = 0;
  for (int j = k + 1; j <= l + 1; ++j) {
    if (d.edge(j) == EdgeLabel::kDelta)
      ++n_delta;
    else
      ++n_eps;
  }
  // (r-1)*n_delta + n_eps
  return XExponent(BigRat(n_eps - n_delta), BigRat(n_delta), BigRat(0));
}

struct DInvarianceReport {
  bool pass = false;
  int systems_checked = 0;
  XExponent common_value;
  std::string failure;
};

// Lemma: D(0,L;Phi) is the same for every fundamental system of A(M,N).
inline DInvarianceReport check_D_invariance(int M, int N) {
  DInvarianceReport rep;
  auto systems = enumerate_systems(M, N);
  rep.systems_checked = static_cast<int>(systems.size());
  rep.common_value = D_exponent(systems.front(), 0, systems.front().L());
  rep.pass = true;
  for (const auto& s : systems) {
    XExponent v = D_exponent(s, 0, s.L());
    if (v != rep.common_value) {
      rep.pass = false;
      rep.failure = "D(0,L) mismatch: " + systems.front().canonical_word() + " gives " +
                    rep.common_value.str() + " but " + s.canonical_word() + " gives " + v.str();
      return rep;
    }
  }
  return rep;
}

}  // namespace wqt
