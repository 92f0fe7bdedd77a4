// The noncommuting 2x2 family
//
//   A_n = r_n [[0, 1], [1, 0]],  B_n = diag(s, t) r_n,  r_n = n^alpha,
//
// its transfer matrices, the Levinson-type decay profile of the decreasing
// solution, the lower bound of the constant-coefficient model J_c and the
// st <=> 4 classification of the essential spectrum.
#pragma once

#include <array>

#include "bjb/block_tridiag.hpp"

namespace bjb {

struct StParams {
  double s = 2.0;
  double t = 2.0;
  double alpha = 0.5;

  void validate() const {
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("StParams: s and t must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("StParams: alpha must lie in (0,1)");
  }
  double r(double n) const { return std::pow(n, alpha); }
  bool critical() const { return std::abs(s * t - 4.0) <= 1e-9; }
};

inline OperatorFamily st_family(const StParams& p) {
  p.validate();
  OperatorFamily f;
  f.dim = 2;
  f.offdiag = [p](std::size_t n) {
    const double r = p.r(static_cast<double>(n));
    return BlockMatrix{{0.0, r}, {r, 0.0}};
  };
  f.diag = [p](std::size_t n) {
    const double r = p.r(static_cast<double>(n));
    return BlockMatrix{{p.s * r, 0.0}, {0.0, p.t * r}};
  };
  if (p.critical()) f.edge_b = 0.0;
  f.label = "st(s=" + std::to_string(p.s) + ",t=" + std::to_string(p.t) +
            ",alpha=" + std::to_string(p.alpha) + ")";
  return f;
}

/// Constant-coefficient model: A = [[0,1],[1,0]], B = diag(s, t).
inline OperatorFamily jc_family(double s, double t) {
  return constant_family(BlockMatrix{{0.0, 1.0}, {1.0, 0.0}}, BlockMatrix{{s, 0.0}, {0.0, t}},
                         "jc(s=" + std::to_string(s) + ",t=" + std::to_string(t) + ")");
}

struct TransferMatrix {
  std::size_t n = 2;
  double lambda = 0.0;
  Matrix<double> entries;  // 4x4

  double determinant() const {
    CMatrix c(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) c(i, j) = entries(i, j);
    return bjb::determinant(c).real();
  }
};

/// [[0, I], [-A_n^{-1} A_{n-1}, A_n^{-1}(lambda I - B_n)]], mapping (u_{n-1}, u_n)
/// to (u_n, u_{n+1}) along solutions of the formal eigen-equation.
inline TransferMatrix transfer_matrix(const StParams& p, double lambda, std::size_t n) {
  p.validate();
  if (n < 2) throw DomainError("transfer_matrix: n must be >= 2");
  const OperatorFamily f = st_family(p);
  const CMatrix an = f.offdiag(n), an1 = f.offdiag(n - 1), bn = f.diag(n);
  const CMatrix an_inv = DenseLU(an).inverse();
  const CMatrix lower_left = an_inv * an1 * Complex(-1.0);
  const CMatrix lower_right = an_inv * (CMatrix::identity(2) * Complex(lambda) - bn);

  TransferMatrix tm{n, lambda, Matrix<double>(4, 4)};
  tm.entries(0, 2) = 1.0;
  tm.entries(1, 3) = 1.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      tm.entries(2 + i, j) = lower_left(i, j).real();
      tm.entries(2 + i, 2 + j) = lower_right(i, j).real();
    }
  return tm;
}

/// Characteristic polynomial det(B_n - mu I), ascending coefficients.
///
/// With rho = r_{n-1}/r_n, A_n^{-1}A_{n-1} = rho I and
/// A_n^{-1}(lambda - B_n) = [[0, p], [q, 0]], p = (lambda - t_n)/r_n,
/// q = (lambda - s_n)/r_n. The Schur complement of the upper-left -mu I block gives
///   det = det(mu^2 + rho - mu [[0,p],[q,0]]) = (mu^2 + rho)^2 - mu^2 p q.
inline std::array<double, 5> transfer_char_poly(const StParams& p, double lambda, std::size_t n) {
  p.validate();
  if (n < 2) throw DomainError("transfer_char_poly: n must be >= 2");
  const double nn = static_cast<double>(n);
  const double r = p.r(nn);
  const double rho = p.r(nn - 1.0) / r;
  const double pp = (lambda - p.t * r) / r;
  const double qq = (lambda - p.s * r) / r;
  return {rho * rho, 0.0, 2.0 * rho - pp * qq, 0.0, 1.0};
}

/// The four eigenvalues of the transfer matrix, as roots of its characteristic
/// polynomial, sorted by (real, imag).
inline std::array<Complex, 4> transfer_eigenvalues(const StParams& p, double lambda, std::size_t n) {
  const auto c = transfer_char_poly(p, lambda, n);
  const std::array<Complex, 5> cc{c[0], c[1], c[2], c[3], c[4]};
  auto roots = poly_roots(std::span<const Complex>(cc));
  // real roots come back with ~1e-17 imaginary noise
  for (auto& z : roots)
    if (std::abs(z.imag()) <= 1e-12 * std::abs(z)) z = z.real();
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return {roots[0], roots[1], roots[2], roots[3]};
}

/// Leading-order eigenvalues of B_n in the critical case st = 4, lambda < 0:
///   mu = -/+ [1 -/+ h + y],  h = sqrt(-lambda (s+t))/2 n^{-alpha/2},
///                            y = -(s+t) lambda / (8 n^alpha),
/// with the O(n^{alpha/2-1}) remainder dropped. Returned as
/// {-(1+h+y), -(1-h+y), 1-h+y, 1+h+y}; entries 1 and 2 are the decaying branches.
inline std::array<Complex, 4> mu_asymptotic(const StParams& p, double lambda, std::size_t n) {
  p.validate();
  if (!(std::abs(p.s * p.t - 4.0) <= 1e-12))
    throw DomainError("mu_asymptotic: requires s t = 4");
  if (!(p.alpha > 0.5 && p.alpha < 1.0)) throw DomainError("mu_asymptotic: requires alpha in (1/2, 1)");
  if (!(lambda < 0.0)) throw DomainError("mu_asymptotic: requires lambda < 0");
  if (n < 2) throw DomainError("mu_asymptotic: n must be >= 2");
  const double nn = static_cast<double>(n);
  const double h = 0.5 * std::sqrt(-lambda * (p.s + p.t)) * std::pow(nn, -0.5 * p.alpha);
  const double y = -(p.s + p.t) * lambda / (8.0 * std::pow(nn, p.alpha));
  return {Complex(-(1.0 + h + y)), Complex(-(1.0 - h + y)), Complex(1.0 - h + y),
          Complex(1.0 + h + y)};
}

/// Root of smallest magnitude; `tie` is set when two roots share that magnitude
/// to 1e-12 (e.g. the +/- pair of a biquadratic) and they are not negatives of each other.
struct DecayingRoot {
  Complex value;
  bool tie = false;
};

inline DecayingRoot decaying_root(const std::array<Complex, 4>& roots) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (std::abs(roots[i]) < std::abs(roots[best])) best = i;
  DecayingRoot out{roots[best], false};
  for (std::size_t i = 0; i < 4; ++i) {
    if (i == best) continue;
    const bool same_mag = std::abs(std::abs(roots[i]) - std::abs(roots[best])) <=
                          1e-12 * std::abs(roots[best]);
    const bool mirror = std::abs(roots[i] + roots[best]) <= 1e-12 * std::abs(roots[best]);
    if (same_mag && !mirror) out.tie = true;
  }
  return out;
}

struct LevinsonProfile {
  double log_product = 0.0;  // sum_{k=n0}^{n} log |mu_dec(k)|
  double product = 0.0;      // exp(log_product)
  double closed_form = 0.0;  // exp(-(sqrt(-lambda (s+t))/2) n^{1-alpha/2} / (1 - alpha/2))
  bool tie_flagged = false;
};

/// prod_{k=n0}^{n} |mu_dec(k)| with mu_dec the exact decaying root of B_k.
inline LevinsonProfile levinson_profile(const StParams& p, double lambda, std::size_t n0,
                                        std::size_t n) {
  p.validate();
  if (!p.critical()) throw DomainError("levinson_profile: requires s t = 4");
  if (!(lambda < 0.0)) throw DomainError("levinson_profile: requires lambda < 0");
  if (n0 < 2 || n < n0) throw DomainError("levinson_profile: need n >= n0 >= 2");
  LevinsonProfile out;
  for (std::size_t k = n0; k <= n; ++k) {
    const DecayingRoot root = decaying_root(transfer_eigenvalues(p, lambda, k));
    const double mag = std::abs(root.value);
    if (!(mag < 1.0))
      throw DomainError("levinson_profile: no root with |mu| < 1 at k=" + std::to_string(k));
    out.tie_flagged = out.tie_flagged || root.tie;
    out.log_product += std::log(mag);
  }
  out.product = std::exp(out.log_product);
  const double expo = 1.0 - 0.5 * p.alpha;
  out.closed_form = std::exp(-0.5 * std::sqrt(-lambda * (p.s + p.t)) *
                             std::pow(static_cast<double>(n), expo) / expo);
  return out;
}

/// J_c >= (st - 4) / ((t+s)/2 + sqrt(((t-s)/2)^2 + 4)).
inline double jc_lower_bound(double s, double t) {
  if (!(s > 0.0) || !(t > 0.0)) throw DomainError("jc_lower_bound: s and t must be > 0");
  const double half_diff = 0.5 * (t - s);
  return (s * t - 4.0) / (0.5 * (t + s) + std::sqrt(half_diff * half_diff + 4.0));
}

enum class PhaseClass { gap_unbounded, ess_empty, ess_full_line };

inline const char* to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::gap_unbounded: return "gap_unbounded";
    case PhaseClass::ess_empty: return "ess_empty";
    case PhaseClass::ess_full_line: return "ess_full_line";
  }
  return "?";
}

/// st = 4: sigma_ess = [0, inf) (unbounded gap below); st > 4: empty; st < 4: all of R.
inline PhaseClass phase_class(double s, double t) {
  if (!(s > 0.0) || !(t > 0.0)) throw DomainError("phase_class: s and t must be > 0");
  const double st = s * t;
  if (std::abs(st - 4.0) <= 1e-9) return PhaseClass::gap_unbounded;
  return st > 4.0 ? PhaseClass::ess_empty : PhaseClass::ess_full_line;
}

}  // namespace bjb
