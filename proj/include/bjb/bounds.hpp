// Exponential decay envelopes for Green-matrix blocks and eigenvectors of a
// semi-bounded block Jacobi operator below the essential spectrum.
//
//   psi(x)       = x^2 e^x
//   phi_delta(x) = 1/sqrt(delta) for x < delta, 1/sqrt(x) otherwise
//   gamma        = sqrt(delta) psi^{-1}((b - Re lambda)(1 - eps) / delta)
//
// ||G_jk(lambda)|| <= C exp(-gamma sum_{m=min(j,k)}^{max(j,k)-1} phi_delta(||A_m||)).
#pragma once

#include "bjb/operator_model.hpp"

namespace bjb {

inline double psi(double x) {
  if (!(x >= 0.0)) throw DomainError("psi: argument must be >= 0");
  return x * x * std::exp(x);
}

namespace detail {
inline double psi_prime(double x) { return (2.0 * x + x * x) * std::exp(x); }
}  // namespace detail

/// Inverse of psi on [0, inf): bracketed bisection to width 1e-8, then
/// Newton steps kept inside the bracket until the step is a few ulp.
inline double psi_inv(double t) {
  if (!(t >= 0.0)) throw DomainError("psi_inv: argument must be >= 0");
  if (t == 0.0) return 0.0;
  if (!std::isfinite(t)) throw DomainError("psi_inv: argument must be finite");

  double lo = 0.0, hi = 1.0;
  while (psi(hi) < t) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (psi(mid) < t) lo = mid;
    else hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 20; ++i) {
    const double dp = detail::psi_prime(x);
    if (dp <= 0.0) break;
    double next = x - (psi(x) - t) / dp;
    if (next < lo || next > hi) next = 0.5 * (lo + hi);
    if (psi(next) < t) lo = next;
    else hi = next;
    const bool done = std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * next;
    x = next;
    if (done) break;
  }
  return x;
}

inline double phi_delta(double x, double delta) {
  if (!(x >= 0.0)) throw DomainError("phi_delta: argument must be >= 0");
  if (!(delta > 0.0)) throw DomainError("phi_delta: delta must be > 0");
  return x < delta ? 1.0 / std::sqrt(delta) : 1.0 / std::sqrt(x);
}

/// Parameters (lambda, b, delta, epsilon) shared by every envelope.
struct BoundParams {
  Complex lambda;
  double b = 0.0;
  double delta = 1.0;
  double epsilon = 0.1;

  /// b - Re lambda, the gap between the spectral parameter and the edge.
  double gap() const noexcept { return b - lambda.real(); }

  void validate() const {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || !std::isfinite(b))
      throw DomainError("BoundParams: lambda and b must be finite");
    if (!(lambda.real() < b))
      throw DomainError("BoundParams: need Re(lambda) < b, got Re(lambda)=" +
                        std::to_string(lambda.real()) + ", b=" + std::to_string(b));
    if (!(delta > 0.0)) throw DomainError("BoundParams: delta must be > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("BoundParams: epsilon must lie in (0,1)");
  }
};

inline double gamma_rate(const BoundParams& p) {
  p.validate();
  return std::sqrt(p.delta) * psi_inv(p.gap() * (1.0 - p.epsilon) / p.delta);
}

/// (1 - eps) sqrt(b - Re lambda): the rate once ||A_k|| -> infinity.
inline double simplified_rate(const BoundParams& p) {
  p.validate();
  return (1.0 - p.epsilon) * std::sqrt(p.gap());
}

/// delta enlarged so that (b - Re lambda)(1 - eps)/delta <= 0.01, the regime in
/// which gamma is within a few percent of sqrt((b - Re lambda)(1 - eps)).
inline double corollary_delta(const BoundParams& p) {
  p.validate();
  return std::max(p.delta, 100.0 * p.gap() * (1.0 - p.epsilon));
}

enum class EnvelopeMode { scalar_norm, operator_commuting };

struct DecayEnvelope {
  double gamma = 0.0;
  BoundParams params;
  std::vector<double> cumulative;  // cumulative[m-1] = S_m = sum_{k<m} phi_delta(||A_k||)
  EnvelopeMode mode = EnvelopeMode::scalar_norm;

  std::size_t size() const noexcept { return cumulative.size(); }

  /// S_m, 1-based.
  double partial_sum(std::size_t m) const { return cumulative.at(m - 1); }

  /// exp(-gamma (S_max(j,k) - S_min(j,k))).
  double bound(std::size_t j, std::size_t k) const {
    const double sj = partial_sum(j), sk = partial_sum(k);
    return std::exp(-gamma * std::abs(sj - sk));
  }
};

inline DecayEnvelope scalar_envelope(const OperatorFamily& family, const BoundParams& p,
                                     std::size_t nblocks) {
  if (nblocks == 0) throw DomainError("scalar_envelope: N must be >= 1");
  DecayEnvelope env;
  env.gamma = gamma_rate(p);
  env.params = p;
  env.cumulative.resize(nblocks);
  env.cumulative[0] = 0.0;
  for (std::size_t m = 2; m <= nblocks; ++m) {
    const double norm = spectral_norm(block_entries(family, m - 1).first);
    env.cumulative[m - 1] = env.cumulative[m - 2] + phi_delta(norm, p.delta);
  }
  return env;
}

/// Weight exp(gamma sum_{k<m} phi_delta(|A_k|)) evaluated as a matrix function.
/// Meaningful only when {A_m, B_m, A_m*} commute pairwise.
struct OperatorEnvelope {
  double gamma = 0.0;
  BoundParams params;
  std::vector<CMatrix> phi_sums;  // phi_sums[m-1] = sum_{k<m} phi_delta(|A_k|)
  std::vector<CMatrix> weights;   // weights[m-1] = exp(gamma phi_sums[m-1])

  /// exp(gamma sum_{i=min(m,j)}^{max(m,j)-1} phi_delta(|A_i|)).
  CMatrix weight_between(std::size_t m, std::size_t j) const {
    const std::size_t lo = std::min(m, j), hi = std::max(m, j);
    const CMatrix diff = hermitian_part(phi_sums.at(hi - 1) - phi_sums.at(lo - 1));
    const double g = gamma;
    return psd_matfunc(diff, [g](double x) { return std::exp(g * x); });
  }
};

/// Checks that {A_m, B_m, A_m*}_{m<=N} commute pairwise:
/// ||XY - YX||_F <= tol ||X||_F ||Y||_F. Throws CommutationError naming the pair.
inline void check_pairwise_commutation(const OperatorFamily& family, std::size_t nblocks,
                                       double tol = 1e-10) {
  struct Item {
    CMatrix m;
    std::string name;
    double norm;
  };
  std::vector<Item> items;
  items.reserve(3 * nblocks);
  for (std::size_t n = 1; n <= nblocks; ++n) {
    auto [a, b] = block_entries(family, n);
    const std::string idx = std::to_string(n);
    CMatrix as = a.adjoint();
    const double na = a.frobenius(), nb = b.frobenius();
    items.push_back({std::move(a), "A_" + idx, na});
    items.push_back({std::move(b), "B_" + idx, nb});
    items.push_back({std::move(as), "A_" + idx + "*", na});
  }
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      const double scale = items[i].norm * items[j].norm;
      if (scale == 0.0) continue;
      const double c = (items[i].m * items[j].m - items[j].m * items[i].m).frobenius();
      if (c > tol * scale)
        throw CommutationError("family does not commute: [" + items[i].name + ", " +
                               items[j].name + "] has relative norm " +
                               std::to_string(c / scale));
    }
}

inline OperatorEnvelope operator_envelope(const OperatorFamily& family, const BoundParams& p,
                                          std::size_t nblocks) {
  if (nblocks == 0) throw DomainError("operator_envelope: N must be >= 1");
  check_pairwise_commutation(family, nblocks);
  OperatorEnvelope env;
  env.gamma = gamma_rate(p);
  env.params = p;
  const std::size_t d = family.dim;
  const double delta = p.delta;
  env.phi_sums.reserve(nblocks);
  env.weights.reserve(nblocks);
  env.phi_sums.push_back(CMatrix(d, d));
  env.weights.push_back(CMatrix::identity(d));
  for (std::size_t m = 2; m <= nblocks; ++m) {
    const CMatrix absa = abs_matrix(block_entries(family, m - 1).first);
    const CMatrix phi = psd_matfunc(absa, [delta](double x) { return phi_delta(x, delta); });
    env.phi_sums.push_back(hermitian_part(env.phi_sums.back() + phi));
    const double g = env.gamma;
    env.weights.push_back(psd_matfunc(env.phi_sums.back(), [g](double x) { return std::exp(g * x); }));
  }
  return env;
}

/// Closed-form estimate of the constant C:
///   2 (1 + |b - min sigma_p(J)| / dist(lambda, sigma(J)) e^{gamma M / sqrt(delta)}) / (eps (b - Re lambda)).
/// edge_gap is |b - min sigma_p(J)| (0 when no eigenvalue lies below b).
inline double qualified_constant(const BoundParams& p, std::size_t M, double dist_sigma,
                                 double edge_gap) {
  p.validate();
  if (!(dist_sigma > 0.0)) throw DomainError("qualified_constant: dist(lambda, sigma) must be > 0");
  if (!(edge_gap >= 0.0)) throw DomainError("qualified_constant: |b - min sigma_p| must be >= 0");
  const double g = gamma_rate(p);
  const double growth = std::exp(g * static_cast<double>(M) / std::sqrt(p.delta));
  return 2.0 * (1.0 + edge_gap / dist_sigma * growth) / (p.epsilon * p.gap());
}

}  // namespace bjb
