// Green-matrix blocks G_jk(lambda) = P_j (J - lambda)^{-1} P_k of a truncation,
// eigenpairs below the essential-spectrum edge, and decay verification reports.
#pragma once

#include <random>

#include "bjb/block_tridiag.hpp"
#include "bjb/bounds.hpp"

namespace bjb {

struct GreenBlockSet {
  Complex lambda;
  std::size_t source = 1;           // k
  std::vector<BlockMatrix> blocks;  // blocks[j-1] = G_{j,k}(lambda)

  std::size_t nblocks() const noexcept { return blocks.size(); }
  const BlockMatrix& block(std::size_t j) const { return blocks.at(j - 1); }
};

namespace detail {

inline CMatrix block_unit_columns(std::size_t nblocks, std::size_t dim, std::size_t k) {
  CMatrix e(nblocks * dim, dim);
  for (std::size_t i = 0; i < dim; ++i) e((k - 1) * dim + i, i) = 1.0;
  return e;
}

inline std::vector<BlockMatrix> split_rows(const CMatrix& x, std::size_t dim) {
  const std::size_t n = x.rows() / dim, m = x.cols();
  std::vector<BlockMatrix> out(n, BlockMatrix(dim, m));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t c = 0; c < m; ++c) out[k](i, c) = x(k * dim + i, c);
  return out;
}

}  // namespace detail

/// Column k of the truncated resolvent, block by block.
inline GreenBlockSet green_column(const Truncation& trunc, Complex lambda, std::size_t k) {
  if (k == 0 || k > trunc.nblocks())
    throw DomainError("green_column: source index k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(trunc.nblocks()) + "]");
  const CMatrix x =
      block_tridiag_solve(trunc, lambda, detail::block_unit_columns(trunc.nblocks(), trunc.dim(), k));
  return {lambda, k, detail::split_rows(x, trunc.dim())};
}

// ---------------------------------------------------------------------------
// Eigenpairs.

struct EigenPair {
  double value = 0.0;
  CVector vector;  // length N d, unit norm
  double last_block_norm = 0.0;
  bool boundary_suspect = false;  // ||u_N|| > 1e-6

  /// ||u_m||, 1-based block index.
  double block_norm(std::size_t m, std::size_t dim) const {
    return vector_norm(std::span<const Complex>(vector).subspan((m - 1) * dim, dim));
  }
};

namespace detail {

inline void orthonormalize_columns(CMatrix& x) {
  const std::size_t n = x.rows(), m = x.cols();
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t p = 0; p < c; ++p) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(x(i, p)) * x(i, c);
        for (std::size_t i = 0; i < n; ++i) x(i, c) -= dot * x(i, p);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm += std::norm(x(i, c));
      norm = std::sqrt(norm);
      if (norm == 0.0) throw ConvergenceError("inverse iteration: basis collapsed", 0.0);
      for (std::size_t i = 0; i < n; ++i) x(i, c) /= norm;
    }
}

/// Rotates v so its largest-magnitude entry is real and positive.
inline void fix_phase(CVector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-12)) best = i;
  if (std::abs(v[best]) == 0.0) return;
  const Complex phase = std::conj(v[best]) / std::abs(v[best]);
  for (auto& x : v) x *= phase;
}

/// Subspace inverse iteration for an eigenvalue cluster [lo_value, ...] of size m.
/// The shift sits just below the cluster; start vectors are the block-1 unit
/// directions plus a small deterministic full-support component. The solve
/// preserves the relative accuracy of exponentially small tail entries, which a
/// dense eigensolver cannot resolve.
inline CMatrix cluster_vectors(const Truncation& trunc, double lo_value, std::size_t m,
                               std::uint64_t seed) {
  const std::size_t nd = trunc.dense_dim(), d = trunc.dim();
  double eta = 1e-9 * std::max(1.0, std::abs(lo_value));
  std::optional<BlockTridiagLU> lu;
  for (int attempt = 0; attempt < 8 && !lu; ++attempt, eta *= 7.0) {
    try {
      lu.emplace(trunc, Complex(lo_value - eta));
    } catch (const SingularShiftError&) {
    }
  }
  if (!lu) throw ConvergenceError("inverse iteration: no admissible shift near eigenvalue", 0.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CMatrix x(nd, m);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = 0; i < nd; ++i) x(i, c) = 1e-3 * uni(rng);
    if (c < d) x(c, c) += 1.0;
  }
  orthonormalize_columns(x);
  constexpr int iterations = 40;
  for (int it = 0; it < iterations; ++it) {
    x = lu->solve(x);
    orthonormalize_columns(x);
  }
  if (m > 1) {
    // Rayleigh-Ritz inside the converged cluster subspace.
    CMatrix tx(nd, m);
    for (std::size_t c = 0; c < m; ++c) {
      CVector col(nd);
      for (std::size_t i = 0; i < nd; ++i) col[i] = x(i, c);
      const CVector y = trunc.apply(col);
      for (std::size_t i = 0; i < nd; ++i) tx(i, c) = y[i];
    }
    const CMatrix small = hermitian_part(x.adjoint() * tx);
    x = x * hermitian_eig(small).vectors;
  }
  return x;
}

}  // namespace detail

/// Eigenpairs of the truncation with eigenvalue < b, ascending. Eigenvalues come
/// from inertia bisection; vectors from inverse iteration on the block LU.
inline std::vector<EigenPair> eigenpairs_below(const Truncation& trunc, double b) {
  const std::size_t count = count_eigenvalues_below(trunc, b);
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = eigenvalue_by_index(trunc, i);

  const std::size_t d = trunc.dim(), n = trunc.nblocks();
  std::vector<EigenPair> out;
  out.reserve(count);
  std::size_t i = 0;
  while (i < count) {
    std::size_t j = i + 1;
    while (j < count && values[j] - values[j - 1] <= 1e-9 * std::max(1.0, std::abs(values[j])))
      ++j;
    const CMatrix vecs = detail::cluster_vectors(trunc, values[i], j - i, 0x5eed + i);
    for (std::size_t c = 0; c < j - i; ++c) {
      EigenPair pair;
      pair.value = values[i + c];
      pair.vector.resize(trunc.dense_dim());
      for (std::size_t r = 0; r < trunc.dense_dim(); ++r) pair.vector[r] = vecs(r, c);
      detail::fix_phase(pair.vector);
      pair.last_block_norm = pair.block_norm(n, d);
      pair.boundary_suspect = pair.last_block_norm > 1e-6;
      out.push_back(std::move(pair));
    }
    i = j;
  }
  return out;
}

/// Chooses one eigenpair: by position from below, or nearest to a target value.
/// Ties go to the lower index.
struct EigenSelector {
  enum class Kind { index_from_below, nearest_to } kind = Kind::index_from_below;
  std::size_t index = 0;
  double target = 0.0;

  static EigenSelector lowest(std::size_t i = 0) { return {Kind::index_from_below, i, 0.0}; }
  static EigenSelector nearest(double x) { return {Kind::nearest_to, 0, x}; }

  std::size_t pick(const std::vector<EigenPair>& pairs) const {
    if (pairs.empty()) throw EmptySpectrumError("no eigenvalue below the edge b");
    if (kind == Kind::index_from_below) {
      if (index >= pairs.size())
        throw DomainError("eigen selector: index " + std::to_string(index) + " but only " +
                          std::to_string(pairs.size()) + " eigenvalues below b");
      return index;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < pairs.size(); ++i)
      if (std::abs(pairs[i].value - target) < std::abs(pairs[best].value - target)) best = i;
    return best;
  }
};

/// J(tau) = J + tau P_1 L*L P_1: copy of the truncation with B_1 + tau L*L.
/// Requires ||L|| = 1 and ker L = {0}.
inline Truncation perturbed_truncation(const Truncation& trunc, double tau, const BlockMatrix& l) {
  if (!(tau >= 0.0)) throw DomainError("perturbed_truncation: tau must be >= 0");
  if (l.rows() != trunc.dim() || l.cols() != trunc.dim())
    throw DomainError("perturbed_truncation: L must be d x d");
  const auto sv = singular_values(l);
  if (std::abs(sv.back() - 1.0) > 1e-10)
    throw DomainError("perturbed_truncation: ||L|| must be 1, got " + std::to_string(sv.back()));
  if (!(sv.front() > 1e-12)) throw DomainError("perturbed_truncation: L has a nontrivial kernel");
  BlockMatrix b1 = hermitian_part(trunc.diag(1) + l.adjoint() * l * Complex(tau));
  return trunc.with_first_diag(std::move(b1), trunc.label() + "+tau(" + std::to_string(tau) + ")");
}

inline Truncation perturbed_truncation(const Truncation& trunc, double tau) {
  return perturbed_truncation(trunc, tau, BlockMatrix::identity(trunc.dim()));
}

// ---------------------------------------------------------------------------
// Decay reports.

enum class ReportMode { green, eigenvector, commuting };

inline const char* to_string(ReportMode m) {
  switch (m) {
    case ReportMode::green: return "green";
    case ReportMode::eigenvector: return "eigenvector";
    case ReportMode::commuting: return "commuting";
  }
  return "?";
}

/// Inclusive 1-based index range.
struct IndexRange {
  std::size_t first = 1;
  std::size_t last = 1;
};

struct DecayReport {
  ReportMode mode = ReportMode::green;
  std::string label;
  BoundParams params;  // lambda is the eigenvalue in eigenvector mode
  double gamma = 0.0;
  std::size_t nblocks = 0;
  std::size_t source = 1;  // k (1 in eigenvector mode)
  IndexRange calibration;
  std::vector<std::size_t> indices;
  std::vector<double> measured;
  std::vector<double> envelope;
  std::vector<bool> verdict;
  double fitted_C = 0.0;
  std::optional<double> qualified_C;
  bool boundary_suspect = false;  // eigenvector mode only

  double ratio(std::size_t i) const { return measured[i] / envelope[i]; }

  std::size_t pass_count() const {
    return static_cast<std::size_t>(std::count(verdict.begin(), verdict.end(), true));
  }
  double pass_fraction() const {
    return verdict.empty() ? 0.0 : static_cast<double>(pass_count()) / verdict.size();
  }
  bool all_pass() const { return !verdict.empty() && pass_count() == verdict.size(); }

  /// True when every index in [first, last] passes.
  bool all_pass_in(IndexRange r) const {
    bool any = false;
    for (std::size_t i = 0; i < indices.size(); ++i)
      if (indices[i] >= r.first && indices[i] <= r.last) {
        any = true;
        if (!verdict[i]) return false;
      }
    return any;
  }
};

/// Last index kept for verdicts: the final 10% of blocks sit too close to the
/// artificial boundary of the finite section.
inline std::size_t verdict_limit(std::size_t nblocks) {
  const std::size_t margin = (nblocks + 9) / 10;
  return nblocks > margin ? nblocks - margin : 1;
}

namespace detail {

inline void finish_report(DecayReport& r) {
  const std::size_t first = std::max<std::size_t>(r.calibration.first, 1);
  const std::size_t last = std::min(r.calibration.last, r.indices.empty() ? 0 : r.indices.back());
  if (first > last) throw DomainError("calibration range is empty after clipping");
  r.calibration = {first, last};
  r.fitted_C = 0.0;
  for (std::size_t i = 0; i < r.indices.size(); ++i)
    if (r.indices[i] >= first && r.indices[i] <= last) r.fitted_C = std::max(r.fitted_C, r.ratio(i));
  r.verdict.resize(r.indices.size());
  for (std::size_t i = 0; i < r.indices.size(); ++i)
    r.verdict[i] = r.measured[i] <= r.fitted_C * r.envelope[i] * (1.0 + 1e-9);
}

/// Qualified constant with dist(lambda, sigma) and |b - min sigma_p| taken from
/// the truncation; empty if the inputs are degenerate.
inline std::optional<double> truncation_qualified_constant(const Truncation& trunc,
                                                           const BoundParams& p, std::size_t M) {
  const double dist = distance_to_spectrum(trunc, p.lambda);
  if (!(dist > 0.0)) return std::nullopt;
  const double lowest = min_eigenvalue(trunc);
  const double edge_gap = lowest < p.b ? p.b - lowest : 0.0;
  return qualified_constant(p, M, dist, edge_gap);
}

/// Below this distance from the spectrum of the truncation the finite-section
/// resolvent is a poor stand-in for the half-line one.
inline constexpr double lambda_proximity_guard = 1e-6;

inline void check_lambda_proximity(const Truncation& trunc, Complex lambda) {
  const double dist = distance_to_spectrum(trunc, lambda);
  if (dist < lambda_proximity_guard)
    throw DomainError("lambda is within " + std::to_string(dist) +
                      " of an eigenvalue of the truncation (guard 1e-6); move lambda");
}

}  // namespace detail

struct VerifyOptions {
  std::optional<IndexRange> calibration;  // default: [k, k+10] (green), [1, 10] (eigenvector)
  std::size_t qualified_M = 10;
};

inline DecayReport verify_green_decay(const OperatorFamily& family, const BoundParams& p,
                                      std::size_t nblocks, std::size_t k,
                                      const VerifyOptions& opt = {}) {
  p.validate();
  const Truncation trunc = assemble_truncation(family, nblocks);
  detail::check_lambda_proximity(trunc, p.lambda);
  const GreenBlockSet g = green_column(trunc, p.lambda, k);
  const DecayEnvelope env = scalar_envelope(family, p, nblocks);

  DecayReport r;
  r.mode = ReportMode::green;
  r.label = family.label;
  r.params = p;
  r.gamma = env.gamma;
  r.nblocks = nblocks;
  r.source = k;
  r.calibration = opt.calibration.value_or(IndexRange{k, k + 10});
  for (std::size_t j = 1; j <= verdict_limit(nblocks); ++j) {
    r.indices.push_back(j);
    r.measured.push_back(spectral_norm(g.block(j)));
    r.envelope.push_back(env.bound(j, k));
  }
  detail::finish_report(r);
  r.qualified_C = detail::truncation_qualified_constant(trunc, p, opt.qualified_M);
  return r;
}

/// Eigenvector decay: ||u_m|| against exp(-gamma(lambda_0) S_m), anchored at m = 1.
inline DecayReport verify_eigenvector_decay(const OperatorFamily& family, const BoundParams& p,
                                            std::size_t nblocks, const EigenSelector& which,
                                            const VerifyOptions& opt = {}) {
  const Truncation trunc = assemble_truncation(family, nblocks);
  const auto pairs = eigenpairs_below(trunc, p.b);
  if (pairs.empty())
    throw EmptySpectrumError("verify_eigenvector_decay: no eigenvalue of the truncation below b=" +
                             std::to_string(p.b));
  const EigenPair& pair = pairs[which.pick(pairs)];

  BoundParams q = p;
  q.lambda = pair.value;
  q.validate();
  const DecayEnvelope env = scalar_envelope(family, q, nblocks);

  DecayReport r;
  r.mode = ReportMode::eigenvector;
  r.label = family.label;
  r.params = q;
  r.gamma = env.gamma;
  r.nblocks = nblocks;
  r.source = 1;
  r.calibration = opt.calibration.value_or(IndexRange{1, 10});
  r.boundary_suspect = pair.boundary_suspect;
  for (std::size_t m = 1; m <= verdict_limit(nblocks); ++m) {
    r.indices.push_back(m);
    r.measured.push_back(pair.block_norm(m, trunc.dim()));
    r.envelope.push_back(env.bound(m, 1));
  }
  detail::finish_report(r);
  return r;
}

/// Commuting case: ||exp(gamma sum phi_delta(|A_i|)) G_mk|| must stay bounded.
/// The envelope column is identically 1.
inline DecayReport verify_commuting_decay(const OperatorFamily& family, const BoundParams& p,
                                          std::size_t nblocks, std::size_t k,
                                          const VerifyOptions& opt = {}) {
  p.validate();
  const OperatorEnvelope env = operator_envelope(family, p, nblocks);
  const Truncation trunc = assemble_truncation(family, nblocks);
  detail::check_lambda_proximity(trunc, p.lambda);
  const GreenBlockSet g = green_column(trunc, p.lambda, k);

  DecayReport r;
  r.mode = ReportMode::commuting;
  r.label = family.label;
  r.params = p;
  r.gamma = env.gamma;
  r.nblocks = nblocks;
  r.source = k;
  r.calibration = opt.calibration.value_or(IndexRange{k, k + 10});
  for (std::size_t m = 1; m <= verdict_limit(nblocks); ++m) {
    r.indices.push_back(m);
    r.measured.push_back(spectral_norm(env.weight_between(m, k) * g.block(m)));
    r.envelope.push_back(1.0);
  }
  detail::finish_report(r);
  r.qualified_C = detail::truncation_qualified_constant(trunc, p, opt.qualified_M);
  return r;
}

}  // namespace bjb
