#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cayley/cayley_gate.hpp"

namespace cayley {

// Gate placement blueprint: which qubits each of the m gates touches, in
// application order. Gate values live elsewhere.
struct Architecture {
  int n = 0;
  std::vector<std::vector<int>> placements;

  int m() const { return static_cast<int>(placements.size()); }

  void validate() const {
    if (n < 1) throw DimensionMismatch("architecture: need at least one qubit");
    for (const auto& p : placements) {
      if (p.size() != 1 && p.size() != 2)
        throw DimensionMismatch("architecture: placements must touch 1 or 2 qubits");
      for (int q : p)
        if (q < 0 || q >= n) throw DimensionMismatch("architecture: qubit index out of range");
      if (p.size() == 2 && p[0] == p[1])
        throw DimensionMismatch("architecture: 2-qubit placement must use distinct qubits");
    }
  }
};

template <class T>
struct Circuit {
  Architecture arch;
  std::vector<CayleyGate<T>> gates;

  int n() const { return arch.n; }
  int m() const { return arch.m(); }

  void validate() const {
    arch.validate();
    if (gates.size() != arch.placements.size())
      throw DimensionMismatch("circuit: one gate per placement required");
    for (size_t k = 0; k < gates.size(); ++k)
      if (gates[k].dim() != (1 << arch.placements[k].size()))
        throw DimensionMismatch("circuit: gate dim must be 2^(placement arity)");
  }

  // total local dimension-degree sum_k N_k; the amplitude numerator
  // polynomial has degree at most this, p0 twice this
  int degree_sum() const {
    int s = 0;
    for (const auto& g : gates) s += g.dim();
    return s;
  }
};

// Bit convention, fixed for file I/O: bitstring character j is qubit j, and
// qubit 0 is the most significant bit of the amplitude index.
inline uint64_t index_of_bitstring(const std::string& bits) {
  uint64_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw DimensionMismatch("bitstring: only 0/1 allowed");
    idx = (idx << 1) | static_cast<uint64_t>(c - '0');
  }
  return idx;
}

inline std::string bitstring_of_index(uint64_t idx, int n) {
  std::string s(n, '0');
  for (int j = 0; j < n; ++j)
    if (idx & (uint64_t(1) << (n - 1 - j))) s[j] = '1';
  return s;
}

template <class T>
struct StateVector {
  int n = 0;
  std::vector<Cx<T>> amp;

  static StateVector zero_state(int n) {
    StateVector st;
    st.n = n;
    st.amp.assign(uint64_t(1) << n, Cx<T>{});
    st.amp[0] = Cx<T>(ScalarTraits<T>::from_int(1));
    return st;
  }

  T norm2() const {
    T s = ScalarTraits<T>::from_int(0);
    for (const auto& a : amp) s += abs2(a);
    return s;
  }
};

namespace detail {
inline uint64_t insert_zero_bit(uint64_t v, int pos) {
  uint64_t high = (v >> pos) << (pos + 1);
  uint64_t low = v & ((uint64_t(1) << pos) - 1);
  return high | low;
}
}  // namespace detail

// Serial reference kernel: builds the output vector index-by-index from an
// explicit matrix-row contraction. Kept deliberately naive; the tests pin
// the parallel kernel against it.
template <class T>
void apply_gate_serial(StateVector<T>& st, const Matrix<T>& gate,
                       const std::vector<int>& qubits) {
  int arity = static_cast<int>(qubits.size());
  if (gate.dim() != (1 << arity))
    throw DimensionMismatch("apply_gate: gate dim must be 2^(#qubits)");
  for (size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= st.n)
      throw DimensionMismatch("apply_gate: qubit index out of range");
    for (size_t j = i + 1; j < qubits.size(); ++j)
      if (qubits[i] == qubits[j])
        throw DimensionMismatch("apply_gate: duplicate qubit index");
  }
  std::vector<int> pos(arity);
  for (int i = 0; i < arity; ++i) pos[i] = st.n - 1 - qubits[i];
  uint64_t dim = uint64_t(1) << st.n;
  std::vector<Cx<T>> out(dim);
  for (uint64_t idx = 0; idx < dim; ++idx) {
    int row = 0;
    for (int i = 0; i < arity; ++i)
      row = (row << 1) | static_cast<int>((idx >> pos[i]) & 1);
    Cx<T> acc{};
    for (int col = 0; col < (1 << arity); ++col) {
      uint64_t src = idx;
      for (int i = 0; i < arity; ++i) {
        uint64_t bit = uint64_t((col >> (arity - 1 - i)) & 1);
        src = (src & ~(uint64_t(1) << pos[i])) | (bit << pos[i]);
      }
      acc += gate(row, col) * st.amp[src];
    }
    out[idx] = acc;
  }
  st.amp = std::move(out);
}

// In-place grouped kernel, OpenMP-parallel over independent amplitude
// groups. Identical arithmetic per group regardless of thread count.
template <class T>
void apply_gate(StateVector<T>& st, const Matrix<T>& gate,
                const std::vector<int>& qubits) {
  int arity = static_cast<int>(qubits.size());
  if (gate.dim() != (1 << arity))
    throw DimensionMismatch("apply_gate: gate dim must be 2^(#qubits)");
  for (size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= st.n)
      throw DimensionMismatch("apply_gate: qubit index out of range");
    for (size_t j = i + 1; j < qubits.size(); ++j)
      if (qubits[i] == qubits[j])
        throw DimensionMismatch("apply_gate: duplicate qubit index");
  }
  if (arity == 1) {
    int p = st.n - 1 - qubits[0];
    int64_t groups = int64_t(1) << (st.n - 1);
    Cx<T> g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    auto* amp = st.amp.data();
#pragma omp parallel for schedule(static) if (groups >= 4096)
    for (int64_t i = 0; i < groups; ++i) {
      uint64_t i0 = detail::insert_zero_bit(uint64_t(i), p);
      uint64_t i1 = i0 | (uint64_t(1) << p);
      Cx<T> a0 = amp[i0], a1 = amp[i1];
      amp[i0] = g00 * a0 + g01 * a1;
      amp[i1] = g10 * a0 + g11 * a1;
    }
    return;
  }
  if (arity != 2) throw DimensionMismatch("apply_gate: only 1- and 2-qubit gates");
  int pa = st.n - 1 - qubits[0];
  int pb = st.n - 1 - qubits[1];
  int plow = std::min(pa, pb), phigh = std::max(pa, pb);
  int64_t groups = int64_t(1) << (st.n - 2);
  auto* amp = st.amp.data();
#pragma omp parallel for schedule(static) if (groups >= 4096)
  for (int64_t i = 0; i < groups; ++i) {
    uint64_t base = detail::insert_zero_bit(detail::insert_zero_bit(uint64_t(i), plow), phigh);
    std::array<uint64_t, 4> idx;
    for (int local = 0; local < 4; ++local) {
      uint64_t ba = uint64_t((local >> 1) & 1), bb = uint64_t(local & 1);
      idx[local] = base | (ba << pa) | (bb << pb);
    }
    std::array<Cx<T>, 4> in;
    for (int local = 0; local < 4; ++local) in[local] = amp[idx[local]];
    for (int row = 0; row < 4; ++row) {
      Cx<T> acc{};
      for (int col = 0; col < 4; ++col) acc += gate(row, col) * in[col];
      amp[idx[row]] = acc;
    }
  }
}

// <y| C(theta) |0^n> by sequential gate application; O(m 2^n)
template <class T>
Cx<T> amplitude(const Circuit<T>& c, const T& theta, const std::string& y) {
  if (static_cast<int>(y.size()) != c.n())
    throw DimensionMismatch("amplitude: bitstring length must equal qubit count");
  StateVector<T> st = StateVector<T>::zero_state(c.n());
  for (int k = 0; k < c.m(); ++k)
    apply_gate(st, gate_at(c.gates[k], theta), c.arch.placements[k]);
  return st.amp[index_of_bitstring(y)];
}

// p0(theta) = |<0^n| C(theta) |0^n>|^2
template <class T>
T p0(const Circuit<T>& c, const T& theta) {
  return abs2(amplitude(c, theta, std::string(c.n(), '0')));
}

// Q(theta) = prod_k q_k(theta), polynomial of degree at most sum_k N_k
template <class T>
Cx<T> q_product(const Circuit<T>& c, const T& theta) {
  Cx<T> q(ScalarTraits<T>::from_int(1));
  for (const auto& g : c.gates) q *= local_q(g, theta);
  return q;
}

// z-form product with the eigenvalue moduli cancelled; |Q_z(z)|^2 stays
// within O(sum_k N_k |z|) of one.
template <class T>
Cx<T> q_product_z(const Circuit<T>& c, const T& z) {
  Cx<T> q(ScalarTraits<T>::from_int(1));
  for (const auto& g : c.gates) q *= local_q_z(g, z);
  return q;
}

// <0^n| P(theta) |0^n> = Q(theta) <0^n| C(theta) |0^n>, a polynomial in
// theta of degree at most sum_k N_k.
template <class T>
Cx<T> polynomial_amplitude(const Circuit<T>& c, const T& theta) {
  return q_product(c, theta) * amplitude(c, theta, std::string(c.n(), '0'));
}

// Brute-force path-sum oracle: the explicit sum over intermediate basis
// strings y_1 ... y_{m-1} of prod_k <y_k| Gate_k |y_{k-1}>. Exponential by
// construction; guarded to n <= 6, m <= 6. This is the independent check
// for amplitude(), not an alternative implementation of it.
template <class T>
Cx<T> feynman_amplitude(const Circuit<T>& c, const T& theta, const std::string& y0,
                        const std::string& ym) {
  int n = c.n(), m = c.m();
  if (n > 6 || m > 6)
    throw TooLarge("feynman_amplitude: guarded to n <= 6 and m <= 6");
  if (static_cast<int>(y0.size()) != n || static_cast<int>(ym.size()) != n)
    throw DimensionMismatch("feynman_amplitude: bitstring length must equal qubit count");

  std::vector<Matrix<T>> mats(m);
  for (int k = 0; k < m; ++k) mats[k] = gate_at(c.gates[k], theta);

  // <y| C_k (x) I |x>: local element when x and y agree off the placement
  auto element = [&](int k, uint64_t y, uint64_t x) -> Cx<T> {
    const auto& qs = c.arch.placements[k];
    uint64_t mask = 0;
    for (int q : qs) mask |= uint64_t(1) << (n - 1 - q);
    if ((y & ~mask) != (x & ~mask)) return Cx<T>{};
    int row = 0, col = 0;
    for (int q : qs) {
      row = (row << 1) | static_cast<int>((y >> (n - 1 - q)) & 1);
      col = (col << 1) | static_cast<int>((x >> (n - 1 - q)) & 1);
    }
    return mats[k](row, col);
  };

  uint64_t dim = uint64_t(1) << n;
  uint64_t start = index_of_bitstring(y0);
  uint64_t target = index_of_bitstring(ym);
  if (m == 0) return (start == target) ? Cx<T>(ScalarTraits<T>::from_int(1)) : Cx<T>{};

  // iterate over all (m-1)-tuples of intermediate strings
  std::vector<uint64_t> mid(std::max(m - 1, 0), 0);
  Cx<T> total{};
  for (;;) {
    Cx<T> term(ScalarTraits<T>::from_int(1));
    uint64_t prev = start;
    for (int k = 0; k < m; ++k) {
      uint64_t next = (k == m - 1) ? target : mid[k];
      term *= element(k, next, prev);
      prev = next;
    }
    total += term;
    int pos = 0;
    while (pos < m - 1 && ++mid[pos] == dim) {
      mid[pos] = 0;
      ++pos;
    }
    if (pos >= m - 1) break;
  }
  return total;
}

// Circuit whose gates and generators are entrywise conjugated (worst gates
// conjugated; generator eigenvalues negated, eigenvectors conjugated). Its
// amplitudes are the complex conjugates of the original's at the same theta.
template <class T>
Circuit<T> conjugate_circuit(const Circuit<T>& c) {
  Circuit<T> r;
  r.arch = c.arch;
  for (const auto& g : c.gates) {
    CayleyGate<T> cg;
    cg.worst = Matrix<T>(g.dim());
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) cg.worst(i, j) = conj(g.worst(i, j));
    cg.generator.eigenvalues.resize(g.dim());
    cg.generator.eigenvectors = Matrix<T>(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
      cg.generator.eigenvalues[a] = -g.generator.eigenvalues[a];
      for (int i = 0; i < g.dim(); ++i)
        cg.generator.eigenvectors(i, a) = conj(g.generator.eigenvectors(i, a));
    }
    r.gates.push_back(std::move(cg));
  }
  return r;
}

// Circuit with independently Haar-drawn gates at every placement; gate k
// uses the child stream split(k) so instances replay bit-identically.
template <class T>
Circuit<T> sample_haar_circuit(const Architecture& arch, const SplitRng& rng) {
  arch.validate();
  Circuit<T> c;
  c.arch = arch;
  for (int k = 0; k < arch.m(); ++k) {
    SplitRng gate_rng = rng.split(static_cast<uint64_t>(k));
    c.gates.push_back(sample_cayley_gate<T>(1 << arch.placements[k].size(), gate_rng));
  }
  return c;
}

// Mean of p0 at theta=1 over `count` independent Haar instances of the
// architecture. Trials own split seeds, accumulate into per-trial slots and
// reduce serially, so the result is identical at any thread count.
template <class T>
struct MeanEstimate {
  T mean;
  T std_error;
  long samples;
};

template <class T>
MeanEstimate<T> mean_p0_haar(const Architecture& arch, long count, const SplitRng& rng) {
  using std::sqrt;
  std::vector<T> vals(count);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    SplitRng trial = rng.split(static_cast<uint64_t>(i));
    Circuit<T> c = sample_haar_circuit<T>(arch, trial);
    vals[i] = p0(c, ScalarTraits<T>::from_int(1));
  }
  T sum = ScalarTraits<T>::from_int(0);
  for (const T& v : vals) sum += v;
  T mean = sum / ScalarTraits<T>::from_int(count);
  T var = ScalarTraits<T>::from_int(0);
  for (const T& v : vals) var += (v - mean) * (v - mean);
  var = var / ScalarTraits<T>::from_int(count > 1 ? count - 1 : 1);
  T se = sqrt(var / ScalarTraits<T>::from_int(count));
  return {mean, se, count};
}

// Serial twin of mean_p0_haar, kept as the benchmark/test reference.
template <class T>
MeanEstimate<T> mean_p0_haar_serial(const Architecture& arch, long count,
                                    const SplitRng& rng) {
  using std::sqrt;
  std::vector<T> vals(count);
  for (long i = 0; i < count; ++i) {
    SplitRng trial = rng.split(static_cast<uint64_t>(i));
    Circuit<T> c = sample_haar_circuit<T>(arch, trial);
    vals[i] = p0(c, ScalarTraits<T>::from_int(1));
  }
  T sum = ScalarTraits<T>::from_int(0);
  for (const T& v : vals) sum += v;
  T mean = sum / ScalarTraits<T>::from_int(count);
  T var = ScalarTraits<T>::from_int(0);
  for (const T& v : vals) var += (v - mean) * (v - mean);
  var = var / ScalarTraits<T>::from_int(count > 1 ? count - 1 : 1);
  T se = sqrt(var / ScalarTraits<T>::from_int(count));
  return {mean, se, count};
}

}  // namespace cayley
