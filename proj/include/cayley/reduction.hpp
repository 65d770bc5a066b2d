#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "cayley/circuit.hpp"
#include "cayley/rational.hpp"

namespace cayley {

// ---------------------------------------------------------------------------
// Oracle models

enum class OracleKind { exact, corrupt, additive_noise, corrupt_and_noise };

inline const char* oracle_kind_name(OracleKind k) {
  switch (k) {
    case OracleKind::exact: return "exact";
    case OracleKind::corrupt: return "corrupt";
    case OracleKind::additive_noise: return "additive_noise";
    case OracleKind::corrupt_and_noise: return "corrupt_and_noise";
  }
  return "?";
}

template <class T>
struct OracleModel {
  OracleKind kind = OracleKind::exact;
  double fraction = 0.0;  // corrupted fraction of grid nodes, in [0, 1)
  T eps{};                // additive noise half-width
  uint64_t seed = 0;

  void validate() const {
    if (fraction < 0 || fraction >= 1)
      throw std::invalid_argument("oracle model: fraction must lie in [0,1)");
    if (eps < ScalarTraits<T>::from_int(0))
      throw std::invalid_argument("oracle model: eps must be >= 0");
  }
};

// Oracle over a fixed circuit. Corrupted grid indices and their garbage
// values are drawn once in prepare(); noise is keyed by node index. Replay
// is bit-identical for a given seed, independent of evaluation order.
template <class T>
class Oracle {
 public:
  Oracle(const Circuit<T>& circuit, const OracleModel<T>& model)
      : circuit_(&circuit), model_(model) {
    model_.validate();
  }

  void prepare(int grid_size) {
    corrupted_.clear();
    garbage_.clear();
    bool corrupts = model_.kind == OracleKind::corrupt ||
                    model_.kind == OracleKind::corrupt_and_noise;
    if (!corrupts) return;
    int count = static_cast<int>(model_.fraction * grid_size);
    SplitRng pick = SplitRng(model_.seed).split(0x11);
    std::vector<int> idx(grid_size);
    for (int i = 0; i < grid_size; ++i) idx[i] = i;
    for (int i = 0; i < count; ++i) {
      int j = i + static_cast<int>(pick.below(grid_size - i));
      std::swap(idx[i], idx[j]);
    }
    corrupted_.assign(idx.begin(), idx.begin() + count);
    std::sort(corrupted_.begin(), corrupted_.end());
    for (int i : corrupted_) {
      SplitRng g = SplitRng(model_.seed).split(0x22).split(static_cast<uint64_t>(i));
      garbage_.push_back(ScalarTraits<T>::from_double(g.uniform01()));
    }
  }

  const std::vector<int>& corrupted_indices() const { return corrupted_; }

  T value(int index, const T& theta) const {
    for (size_t k = 0; k < corrupted_.size(); ++k)
      if (corrupted_[k] == index) return garbage_[k];
    T v = p0(*circuit_, theta);
    if (model_.kind == OracleKind::additive_noise ||
        model_.kind == OracleKind::corrupt_and_noise) {
      SplitRng g = SplitRng(model_.seed).split(0x33).split(static_cast<uint64_t>(index));
      double u = g.uniform(-1.0, 1.0);
      v += model_.eps * ScalarTraits<T>::from_double(u);
    }
    return v;
  }

 private:
  const Circuit<T>* circuit_;
  OracleModel<T> model_;
  std::vector<int> corrupted_;
  std::vector<T> garbage_;
};

template <class T>
Oracle<T> make_oracle(const Circuit<T>& circuit, const OracleModel<T>& model) {
  return Oracle<T>(circuit, model);
}

// ---------------------------------------------------------------------------
// Reduction configuration and report

enum class GridKind { uniform_spaced, uniform_random };
enum class DegreeMode { polynomial, rational };

template <class T>
struct ReductionConfig {
  T delta{};              // half-width of I = [1-delta, 1+delta]
  int L = 0;              // grid size
  int t = 0;              // error budget for the decoder
  GridKind grid_kind = GridKind::uniform_spaced;
  unsigned precision_bits = 53;  // echoed into reports; the backend is T
  DegreeMode degree_mode = DegreeMode::polynomial;
  uint64_t seed = 0;      // grid randomness (uniform_random)
  // validation tolerance, relative to the grid data scale
  T residual_tol = ScalarTraits<T>::from_double(1e-6);
};

// Fitted object degree: the polynomial |<0|P|0>|^2 has degree 2 sum_k N_k;
// p0 itself is rational of that degree over that degree.
template <class T>
int reduction_poly_degree(const Circuit<T>& c) {
  return 2 * c.degree_sum();
}

// strict lower bound on the grid size for the configured decode
template <class T>
int min_grid_size_exclusive(const Circuit<T>& c, const ReductionConfig<T>& cfg) {
  int d = reduction_poly_degree(c);
  return cfg.degree_mode == DegreeMode::polynomial ? d + 2 * cfg.t : 2 * d + 2 * cfg.t;
}

template <class T>
void validate_config(const Circuit<T>& c, const ReductionConfig<T>& cfg) {
  if (!(cfg.delta > ScalarTraits<T>::from_int(0)))
    throw std::invalid_argument("reduction config: delta must be > 0");
  if (cfg.t < 0) throw std::invalid_argument("reduction config: t must be >= 0");
  if (cfg.L < 2) throw std::invalid_argument("reduction config: need at least 2 grid points");
  int bound = min_grid_size_exclusive(c, cfg);
  if (cfg.L <= bound)
    throw std::invalid_argument(
        "reduction config: the decoder needs strictly more than k1+k2+2t = " +
        std::to_string(bound) + " grid points; got L = " + std::to_string(cfg.L));
}

template <class T>
struct ReductionReport {
  T estimated_p0_at_0{};
  T true_p0_at_0{};
  T abs_error{};
  std::string decode_status;           // decoded | decode_failed | precision_insufficient
  std::string failure_detail;
  std::vector<int> corrupted_indices;  // planted by the oracle model
  std::vector<int> flagged_indices;    // grid nodes disagreeing with the decoded fit

  // condition diagnostics
  T max_node_residual{};               // over non-flagged nodes, fit vs data
  T grid_scale{};                      // max |y_i| of the fitted object
  double extrapolation_amplification = 0;  // Chebyshev T_D growth at u* = -1/delta
  // residual times amplification: the scale of extrapolation error the node
  // data can support; an estimate is only as good as this number is small
  T predicted_extrapolation_error{};
  T paturi_bound_at_minus_1{};         // bound with eps = max_node_residual
  double log2_paturi_bound = 0;
  int fit_degree_num = 0;
  int fit_degree_den = 0;
  int agreement_count = 0;

  std::vector<T> grid_thetas;
  std::vector<T> grid_values;   // oracle outputs v_i
  std::vector<T> fitted_values; // decoded object at the nodes

  bool decoded() const { return decode_status == "decoded"; }
};

// ---------------------------------------------------------------------------
// Paturi / robustness bounds (log-space)

template <class T>
struct BoundValue {
  T value{};
  double log2_value = 0;  // -inf encoded as the most negative double
};

// eps * exp(2 d (1 + 1/delta)): growth cap at -1 for a degree-d polynomial
// bounded by eps on |z| <= delta (after rescaling the interval to unit size).
template <class T>
BoundValue<T> paturi_bound(int d, const T& delta, const T& eps) {
  using std::exp;
  using std::log2;
  if (d < 0) throw std::invalid_argument("paturi_bound: d must be >= 0");
  if (!(delta > ScalarTraits<T>::from_int(0)))
    throw std::invalid_argument("paturi_bound: delta must be > 0");
  if (eps < ScalarTraits<T>::from_int(0))
    throw std::invalid_argument("paturi_bound: eps must be >= 0");
  T one = ScalarTraits<T>::from_int(1);
  T exponent = ScalarTraits<T>::from_int(2 * d) * (one + one / delta);
  BoundValue<T> b;
  if (eps == ScalarTraits<T>::from_int(0)) {
    b.value = ScalarTraits<T>::from_int(0);
    b.log2_value = -std::numeric_limits<double>::infinity();
    return b;
  }
  // log2 of the bound never overflows; the value itself may
  double log2e = 1.4426950408889634;
  b.log2_value = ScalarTraits<T>::to_double(T(log2(eps) + exponent * ScalarTraits<T>::from_double(log2e)));
  b.value = eps * exp(exponent);
  return b;
}

// eps * exp(32 m (1 + 1/delta)), the amplification cap for the degree-16m
// polynomial object of an all-two-qubit circuit (the 1+o(1) factor taken
// as 1)
template <class T>
BoundValue<T> robustness_bound(int m, const T& delta, const T& eps) {
  if (m < 1) throw std::invalid_argument("robustness_bound: m must be >= 1");
  return paturi_bound(16 * m, delta, eps);
}

// Companion threshold: the largest oracle error keeping the extrapolated
// value within 2^-n, i.e. 2^-n exp(-32 m (1 + 1/delta)). Our convention for
// the unstated constants; reported, never claimed universal.
template <class T>
BoundValue<T> robustness_threshold(int m, const T& delta, int n) {
  using std::exp;
  using std::ldexp;
  if (m < 1) throw std::invalid_argument("robustness_threshold: m must be >= 1");
  if (!(delta > ScalarTraits<T>::from_int(0)))
    throw std::invalid_argument("robustness_threshold: delta must be > 0");
  T one = ScalarTraits<T>::from_int(1);
  T exponent = ScalarTraits<T>::from_int(32 * m) * (one + one / delta);
  double log2e = 1.4426950408889634;
  BoundValue<T> b;
  b.log2_value = -static_cast<double>(n) - ScalarTraits<T>::to_double(exponent) * log2e;
  b.value = exp(-exponent) * ldexp(ScalarTraits<T>::from_int(1), -n);
  return b;
}

// ---------------------------------------------------------------------------
// The reduction itself

namespace detail {

// |T_d(x)| growth proxy for |x| > 1: cosh(d acosh |x|)
inline double chebyshev_growth(int d, double x) {
  double a = std::abs(x);
  if (a <= 1) return 1.0;
  return std::cosh(d * std::acosh(a));
}

template <class T>
std::vector<T> reduction_grid_u(const ReductionConfig<T>& cfg) {
  std::vector<T> u(cfg.L);
  if (cfg.grid_kind == GridKind::uniform_spaced) {
    T two = ScalarTraits<T>::from_int(2);
    for (int i = 0; i < cfg.L; ++i)
      u[i] = ScalarTraits<T>::from_int(-1) +
             two * ScalarTraits<T>::from_int(i) / ScalarTraits<T>::from_int(cfg.L - 1);
  } else {
    SplitRng rng = SplitRng(cfg.seed).split(0x44);
    std::vector<double> raw(cfg.L);
    for (int i = 0; i < cfg.L; ++i) raw[i] = rng.uniform(-1.0, 1.0);
    std::sort(raw.begin(), raw.end());
    for (int i = 0; i < cfg.L; ++i) u[i] = ScalarTraits<T>::from_double(raw[i]);
  }
  return u;
}

}  // namespace detail

// One end-to-end reduction run: sample the oracle on a grid of theta_i in
// [1-delta, 1+delta], rescale nodes to u = (theta-1)/delta in [-1,1], decode
// the polynomial |Q|^2 p0 (or p0 itself in rational mode), and extrapolate
// to the image u* = -1/delta of the worst-case point theta = 0. Never
// throws for decode/validation failures; the report carries the status.
template <class T>
ReductionReport<T> try_run_reduction(const Circuit<T>& circuit,
                                     const ReductionConfig<T>& cfg,
                                     const OracleModel<T>& model) {
  static_assert(!ScalarTraits<T>::exact,
                "run_reduction needs a floating backend (gates are not rational)");
  circuit.validate();
  validate_config(circuit, cfg);

  ReductionReport<T> rep;
  int degree = reduction_poly_degree(circuit);
  T one = ScalarTraits<T>::from_int(1);

  std::vector<T> u = detail::reduction_grid_u(cfg);
  std::vector<T> thetas(cfg.L);
  for (int i = 0; i < cfg.L; ++i) thetas[i] = one + cfg.delta * u[i];
  rep.grid_thetas = thetas;

  Oracle<T> oracle(circuit, model);
  oracle.prepare(cfg.L);
  rep.corrupted_indices = oracle.corrupted_indices();

  // oracle samples across grid nodes are independent; values land in their
  // own slots so threading cannot change the result
  std::vector<T> values(cfg.L);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < cfg.L; ++i) values[i] = oracle.value(i, thetas[i]);
  rep.grid_values = values;

  bool poly_mode = cfg.degree_mode == DegreeMode::polynomial;
  std::vector<SamplePoint<T>> pts(cfg.L);
  if (poly_mode) {
    // multiply through by |Q(theta_i)|^2, classically computable gate by gate
    for (int i = 0; i < cfg.L; ++i)
      pts[i] = {u[i], Cx<T>(values[i] * abs2(q_product(circuit, thetas[i])))};
  } else {
    for (int i = 0; i < cfg.L; ++i) pts[i] = {u[i], Cx<T>(values[i])};
  }

  int k1 = degree, k2 = poly_mode ? 0 : degree;
  rep.fit_degree_num = k1 + cfg.t;
  rep.fit_degree_den = k2 + cfg.t;

  FitOptions<T> fit_opts;
  fit_opts.residual_tol = cfg.residual_tol;

  RationalFunction<T> fit;
  try {
    if (cfg.t == 0)
      fit = fit_rational(pts, k1, k2, fit_opts);
    else
      fit = bw_decode(pts, k1, k2, cfg.t, fit_opts);
  } catch (const TooManyErrors& e) {
    rep.decode_status = "decode_failed";
    rep.failure_detail = e.what();
    return rep;
  } catch (const DegenerateSystem& e) {
    // the fit itself reports a residual above tolerance: the backend cannot
    // represent the decode, as opposed to an error budget being exceeded
    rep.decode_status = "precision_insufficient";
    rep.failure_detail = e.what();
    return rep;
  }

  // held-out validation: the decoded object against every grid node
  T scale = ScalarTraits<T>::from_int(0);
  for (const auto& p : pts) scale = std::max(scale, abs_c(p.value));
  if (scale == ScalarTraits<T>::from_int(0)) scale = one;
  rep.grid_scale = scale;
  T tol = cfg.residual_tol * scale;
  rep.fitted_values.resize(cfg.L);
  for (int i = 0; i < cfg.L; ++i) {
    bool bad = false;
    T resid{};
    try {
      Cx<T> v = evaluate(fit, u[i]);
      rep.fitted_values[i] = v.re;
      resid = abs_c(Cx<T>(v - pts[i].value));
      bad = resid > tol;
    } catch (const PoleProximity&) {
      bad = true;
    }
    if (bad)
      rep.flagged_indices.push_back(i);
    else
      rep.max_node_residual = std::max(rep.max_node_residual, resid);
  }
  rep.agreement_count = cfg.L - static_cast<int>(rep.flagged_indices.size());
  if (static_cast<int>(rep.flagged_indices.size()) > cfg.t) {
    rep.decode_status = "precision_insufficient";
    rep.failure_detail = "decoded object disagrees with more than t grid nodes";
    return rep;
  }

  // extrapolate to the image of theta = 0
  T u_star = -one / cfg.delta;
  T estimate;
  try {
    estimate = evaluate(fit, u_star).re;
  } catch (const PoleProximity&) {
    rep.decode_status = "precision_insufficient";
    rep.failure_detail = "decoded denominator vanishes at the extrapolation point";
    return rep;
  }
  rep.estimated_p0_at_0 = estimate;  // Q(0) = 1: same number in both modes
  rep.true_p0_at_0 = p0(circuit, ScalarTraits<T>::from_int(0));
  T diff = rep.estimated_p0_at_0 - rep.true_p0_at_0;
  rep.abs_error = diff < ScalarTraits<T>::from_int(0) ? T(-diff) : diff;
  rep.decode_status = "decoded";

  rep.extrapolation_amplification =
      detail::chebyshev_growth(degree, ScalarTraits<T>::to_double(T(one / cfg.delta)));
  T meas_eps = std::max(rep.max_node_residual, ScalarTraits<T>::epsilon() * scale);
  rep.predicted_extrapolation_error =
      meas_eps * ScalarTraits<T>::from_double(rep.extrapolation_amplification);
  BoundValue<T> pb = paturi_bound(degree, cfg.delta, meas_eps);
  rep.paturi_bound_at_minus_1 = pb.value;
  rep.log2_paturi_bound = pb.log2_value;
  return rep;
}

template <class T>
ReductionReport<T> run_reduction(const Circuit<T>& circuit, const ReductionConfig<T>& cfg,
                                 const OracleModel<T>& model) {
  ReductionReport<T> rep = try_run_reduction(circuit, cfg, model);
  if (rep.decode_status == "decode_failed")
    throw DecodeFailed("run_reduction: " + rep.failure_detail);
  if (rep.decode_status == "precision_insufficient")
    throw PrecisionInsufficient("run_reduction: " + rep.failure_detail);
  return rep;
}

// Repetition over independent Haar companion draws for the same worst-case
// gates, aggregated by the median estimate. Useful under corruption models;
// a single repeat reduces to run_reduction.
template <class T>
ReductionReport<T> run_reduction_repeated(const std::vector<Matrix<T>>& worst_gates,
                                          const Architecture& arch,
                                          const ReductionConfig<T>& cfg,
                                          const OracleModel<T>& model, int repeats,
                                          uint64_t haar_seed) {
  if (repeats < 1) throw std::invalid_argument("run_reduction_repeated: repeats >= 1");
  if (worst_gates.size() != arch.placements.size())
    throw DimensionMismatch("run_reduction_repeated: one worst gate per placement");
  std::vector<ReductionReport<T>> reps;
  SplitRng rng(haar_seed);
  for (int r = 0; r < repeats; ++r) {
    Circuit<T> c;
    c.arch = arch;
    SplitRng draw = rng.split(static_cast<uint64_t>(r));
    for (size_t k = 0; k < worst_gates.size(); ++k) {
      SplitRng gate_rng = draw.split(static_cast<uint64_t>(k));
      c.gates.push_back(cayley_gate_for_worst(worst_gates[k], gate_rng));
    }
    OracleModel<T> m = model;
    m.seed = SplitRng(model.seed).split(static_cast<uint64_t>(r)).seed();
    reps.push_back(try_run_reduction(c, cfg, m));
  }
  std::vector<size_t> ok;
  for (size_t i = 0; i < reps.size(); ++i)
    if (reps[i].decoded()) ok.push_back(i);
  if (ok.empty()) {
    ReductionReport<T> rep = reps.front();
    for (const auto& r : reps)
      if (r.decode_status == "decode_failed") return r;
    return rep;
  }
  std::sort(ok.begin(), ok.end(), [&](size_t a, size_t b) {
    return reps[a].estimated_p0_at_0 < reps[b].estimated_p0_at_0;
  });
  return reps[ok[ok.size() / 2]];
}

// ---------------------------------------------------------------------------
// Error amplification experiment

template <class T>
struct AmplificationReport {
  T max_abs_error{};
  T median_abs_error{};
  T baseline_abs_error{};    // exact-oracle run of the same config
  T paturi_bound_value{};    // bound with the model eps and the fit degree
  double log2_paturi_bound = 0;
  double ratio = 0;          // max_abs_error / bound
  int trials = 0;
  int degree = 0;
  std::vector<T> per_trial_abs_error;
};

// Repeats the reduction under additive noise eps with fresh noise seeds and
// compares the worst observed extrapolation error against the growth bound
// for the fitted degree.
template <class T>
AmplificationReport<T> empirical_amplification(const Circuit<T>& circuit,
                                               const ReductionConfig<T>& cfg,
                                               const T& eps, int trials) {
  if (cfg.degree_mode != DegreeMode::polynomial)
    throw std::invalid_argument("empirical_amplification: polynomial degree mode required");
  if (trials < 1) throw std::invalid_argument("empirical_amplification: trials >= 1");

  AmplificationReport<T> out;
  out.trials = trials;
  out.degree = reduction_poly_degree(circuit);

  OracleModel<T> exact_model;
  exact_model.kind = OracleKind::exact;
  out.baseline_abs_error = run_reduction(circuit, cfg, exact_model).abs_error;

  out.per_trial_abs_error.resize(trials);
  for (int tr = 0; tr < trials; ++tr) {
    OracleModel<T> m;
    m.kind = OracleKind::additive_noise;
    m.eps = eps;
    m.seed = SplitRng(cfg.seed).split(0x55).split(static_cast<uint64_t>(tr)).seed();
    out.per_trial_abs_error[tr] = run_reduction(circuit, cfg, m).abs_error;
  }
  std::vector<T> sorted = out.per_trial_abs_error;
  std::sort(sorted.begin(), sorted.end());
  out.max_abs_error = sorted.back();
  out.median_abs_error = sorted[sorted.size() / 2];

  if (eps == ScalarTraits<T>::from_int(0)) {
    // a zero-noise oracle has nothing to amplify: the bound degenerates and
    // the baseline field carries the arithmetic floor
    out.paturi_bound_value = ScalarTraits<T>::from_int(0);
    out.log2_paturi_bound = -std::numeric_limits<double>::infinity();
    out.ratio = out.max_abs_error == ScalarTraits<T>::from_int(0)
                    ? 0.0
                    : std::numeric_limits<double>::infinity();
    return out;
  }
  BoundValue<T> pb = paturi_bound(out.degree, cfg.delta, eps);
  out.paturi_bound_value = pb.value;
  out.log2_paturi_bound = pb.log2_value;
  out.ratio = ScalarTraits<T>::to_double(T(out.max_abs_error / pb.value));
  return out;
}

// ---------------------------------------------------------------------------
// Truncated-series comparison

// Companion pair for the geodesic parametrization: exp(-i h) = H^dag with h
// the principal logarithm generator, eigenvalues r_a in (-pi, pi), same
// eigenvectors as the Cayley generator.
template <class T>
struct GeodesicGatePair {
  Matrix<T> worst;                  // C
  Matrix<T> haar;                   // H
  EigenDecomposition<T> log_gen;    // eigenpairs (r_a, psi_a)
};

template <class T>
GeodesicGatePair<T> geodesic_pair(const CayleyGate<T>& g) {
  using std::atan;
  GeodesicGatePair<T> p;
  p.worst = g.worst;
  p.haar = haar_companion(g);
  p.log_gen = g.generator;
  for (auto& v : p.log_gen.eigenvalues) v = 2 * atan(v);
  return p;
}

// C H sum_{k<=K} (-i h theta)^k / k!  -- the series truncation of the
// geodesic gate C H e^{-i h theta}; non-unitary for finite K >= 1.
template <class T>
Matrix<T> truncated_gate(const GeodesicGatePair<T>& pair, const T& theta, int K) {
  if (K < 0) throw std::invalid_argument("truncated_gate: K must be >= 0");
  Matrix<T> series = assemble_from_eigen(pair.log_gen, [&](int a) {
    Cx<T> w(T{}, -theta * pair.log_gen.eigenvalues[a]);
    Cx<T> term(ScalarTraits<T>::from_int(1));
    Cx<T> acc = term;
    for (int k = 1; k <= K; ++k) {
      term *= w;
      term *= Cx<T>(ScalarTraits<T>::from_int(1) / ScalarTraits<T>::from_int(k));
      acc += term;
    }
    return acc;
  });
  return pair.worst * pair.haar * series;
}

template <class T>
struct TruncationRow {
  T theta{};
  T max_gate_residual{};       // worst unitarity residual among truncated gates
  T p0_truncated{};            // |<0|Ctrunc(theta)|0>|^2
  T p0_cayley_matched{};       // exact path at the matched endpoint 1-theta
  T deviation{};               // |p0_truncated - p0_cayley_matched|
};

template <class T>
struct TruncationReport {
  int K = 0;
  int degree_truncated = 0;  // 2 m K
  int degree_cayley = 0;     // 2 sum_k N_k
  std::vector<TruncationRow<T>> rows;
};

// Runs the truncated-series circuit across the requested thetas and reports
// per-gate unitarity loss, the amplitude deviation against the exact path at
// the matched endpoint (truncated theta <-> exact 1-theta; the endpoints
// coincide, interior points also separate the two paths), and the degree
// bookkeeping 2mK versus 2 sum_k N_k.
template <class T>
TruncationReport<T> truncation_experiment(const Circuit<T>& circuit,
                                          const std::vector<T>& thetas, int K) {
  circuit.validate();
  if (circuit.n() > 6 || circuit.m() > 6)
    throw TooLarge("truncation_experiment: guarded to n <= 6 and m <= 6");
  TruncationReport<T> rep;
  rep.K = K;
  rep.degree_truncated = 2 * circuit.m() * K;
  rep.degree_cayley = 2 * circuit.degree_sum();

  std::vector<GeodesicGatePair<T>> pairs;
  for (const auto& g : circuit.gates) pairs.push_back(geodesic_pair(g));

  for (const T& theta : thetas) {
    TruncationRow<T> row;
    row.theta = theta;
    StateVector<T> st = StateVector<T>::zero_state(circuit.n());
    for (int k = 0; k < circuit.m(); ++k) {
      Matrix<T> g = truncated_gate(pairs[k], theta, K);
      row.max_gate_residual = std::max(row.max_gate_residual, unitarity_residual(g));
      apply_gate(st, g, circuit.arch.placements[k]);
    }
    row.p0_truncated = abs2(st.amp[0]);
    row.p0_cayley_matched = p0(circuit, T(ScalarTraits<T>::from_int(1) - theta));
    T diff = row.p0_truncated - row.p0_cayley_matched;
    row.deviation = diff < ScalarTraits<T>::from_int(0) ? T(-diff) : diff;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace cayley
