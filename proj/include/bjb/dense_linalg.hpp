// Dense kernels: Hermitian eigendecomposition (cyclic Jacobi), |A|, spectral
// norm, functions of PSD matrices, small LU solves and polynomial roots.
#pragma once

#include <array>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "bjb/core.hpp"

namespace bjb {

struct EigDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column i belongs to values[i]
};

namespace detail {

inline double off_diagonal_mass(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi
/// rotations (row-by-row sweep order, so results are reproducible).
inline EigDecomposition hermitian_eig(const CMatrix& h) {
  if (!h.square()) throw DomainError("hermitian_eig: matrix is not square");
  if (!is_hermitian(h, 1e-10)) throw DomainError("hermitian_eig: matrix is not Hermitian");

  const std::size_t n = h.rows();
  CMatrix a = hermitian_part(h);
  CMatrix v = CMatrix::identity(n);
  const double scale = a.frobenius();
  const double target = 1e-14 * scale;
  constexpr int max_sweeps = 100;

  int sweep = 0;
  for (; sweep < max_sweeps && detail::off_diagonal_mass(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Complex phase = apq / mag;
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        const Complex s_ph = s * phase;             // G_pq
        const Complex s_phc = s * std::conj(phase); // -G_qp

        // A <- A G
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s_phc * akq;
          a(k, q) = s_ph * akp + c * akq;
        }
        // A <- G* A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s_ph * aqk;
          a(q, k) = s_phc * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s_phc * vkq;
          v(k, q) = s_ph * vkp + c * vkq;
        }
      }
    }
  }
  if (detail::off_diagonal_mass(a) > target)
    throw ConvergenceError("hermitian_eig: Jacobi sweeps did not converge",
                           detail::off_diagonal_mass(a));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigDecomposition out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

/// V diag(f(w)) V* for a Hermitian matrix whose spectrum lies in the domain of f.
inline CMatrix spectral_function(const EigDecomposition& eig,
                                 const std::function<double(double)>& f) {
  const std::size_t n = eig.values.size();
  std::vector<double> fw(n);
  for (std::size_t i = 0; i < n; ++i) {
    fw[i] = f(eig.values[i]);
    if (!std::isfinite(fw[i]))
      throw DomainError("matrix function undefined at eigenvalue " + std::to_string(eig.values[i]));
  }
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += eig.vectors(i, k) * fw[k] * std::conj(eig.vectors(j, k));
      out(i, j) = acc;
    }
  return out;
}

/// f(H) for Hermitian PSD H. Eigenvalues in [-1e-12 ||H||, 0) are clamped to 0;
/// anything more negative is rejected.
inline CMatrix psd_matfunc(const CMatrix& h, const std::function<double(double)>& f) {
  EigDecomposition eig = hermitian_eig(h);
  double norm = 0.0;
  for (double w : eig.values) norm = std::max(norm, std::abs(w));
  for (double& w : eig.values) {
    if (w < -1e-12 * norm) throw DomainError("psd_matfunc: matrix is not positive semidefinite");
    if (w < 0.0) w = 0.0;
  }
  return spectral_function(eig, f);
}

/// |A| = (A*A)^{1/2}.
inline CMatrix abs_matrix(const CMatrix& a) {
  if (!a.square()) throw DomainError("abs_matrix: block is not square");
  return psd_matfunc(a.adjoint() * a, [](double x) { return std::sqrt(x); });
}

/// Singular values of a square block, ascending.
inline std::vector<double> singular_values(const CMatrix& a) {
  auto w = hermitian_eig(a.adjoint() * a).values;
  for (double& x : w) x = std::sqrt(std::max(x, 0.0));
  return w;
}

/// Largest singular value.
inline double spectral_norm(const CMatrix& a) {
  if (a.empty()) return 0.0;
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  if (a.square()) return singular_values(a).back();
  const CMatrix gram = a.cols() <= a.rows() ? a.adjoint() * a : a * a.adjoint();
  return std::sqrt(std::max(hermitian_eig(gram).values.back(), 0.0));
}

inline double min_singular_value(const CMatrix& a) { return singular_values(a).front(); }

/// Smallest singular value above 1e-12 ||A||: the numerical form of ker(A) = {0}.
inline bool kernel_trivial(const CMatrix& a) {
  const auto sv = singular_values(a);
  return sv.front() > 1e-12 * sv.back();
}

/// LU factorization with partial pivoting of a small dense block.
class DenseLU {
public:
  explicit DenseLU(CMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (!lu_.square()) throw DomainError("DenseLU: matrix is not square");
    norm1_ = one_norm(lu_);
    const std::size_t n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > best) best = std::abs(lu_(i, k)), piv = i;
      if (best == 0.0) {
        singular_ = true;
        continue;
      }
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
        sign_ = -sign_;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        const Complex m = lu_(i, k) / lu_(k, k);
        lu_(i, k) = m;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  bool singular() const noexcept { return singular_; }

  Complex determinant() const {
    Complex d = static_cast<double>(sign_);
    for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
    return d;
  }

  CMatrix solve(const CMatrix& rhs) const {
    const std::size_t n = lu_.rows();
    if (rhs.rows() != n) throw DomainError("DenseLU: rhs row mismatch");
    if (singular_) throw DomainError("DenseLU: matrix is singular");
    const std::size_t m = rhs.cols();
    CMatrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < m; ++c) x(i, c) = rhs(perm_[i], c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) {
        const Complex l = lu_(i, k);
        for (std::size_t c = 0; c < m; ++c) x(i, c) -= l * x(k, c);
      }
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t k = ii + 1; k < n; ++k) {
        const Complex u = lu_(ii, k);
        for (std::size_t c = 0; c < m; ++c) x(ii, c) -= u * x(k, c);
      }
      for (std::size_t c = 0; c < m; ++c) x(ii, c) /= lu_(ii, ii);
    }
    return x;
  }

  CMatrix inverse() const { return solve(CMatrix::identity(lu_.rows())); }

  /// ||A||_1 ||A^{-1}||_1, infinite when singular.
  double condition() const {
    if (singular_) return std::numeric_limits<double>::infinity();
    const double c = norm1_ * one_norm(inverse());
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
  }

  static double one_norm(const CMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
      best = std::max(best, s);
    }
    return best;
  }

private:
  CMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
  double norm1_ = 0.0;
};

inline Complex determinant(const CMatrix& a) { return DenseLU(a).determinant(); }

// ---------------------------------------------------------------------------
// Polynomials. Coefficients are stored by ascending power: c[i] multiplies x^i.

inline Complex poly_eval(std::span<const Complex> c, Complex x) {
  Complex acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

/// All roots of a polynomial of degree <= 8 by Aberth-Ehrlich simultaneous
/// iteration. Start points sit on the circle of radius 1 + max|c_i / c_lead|.
inline std::vector<Complex> poly_roots(std::span<const Complex> coeffs) {
  if (coeffs.size() < 2) throw DomainError("poly_roots: degree must be at least 1");
  const std::size_t deg = coeffs.size() - 1;
  if (deg > 8) throw DomainError("poly_roots: degree above 8");
  const Complex lead = coeffs[deg];
  if (lead == Complex{}) throw DomainError("poly_roots: leading coefficient is zero");

  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  for (auto& x : c) x /= lead;
  std::vector<Complex> dc(deg);
  for (std::size_t i = 1; i <= deg; ++i) dc[i - 1] = c[i] * static_cast<double>(i);

  double radius = 0.0;
  for (std::size_t i = 0; i < deg; ++i) radius = std::max(radius, std::abs(c[i]));
  radius += 1.0;

  std::vector<Complex> z(deg);
  for (std::size_t k = 0; k < deg; ++k)
    z[k] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(deg) + 0.4);

  auto scale_at = [&](Complex x) {
    double s = 0.0, ax = std::abs(x), p = 1.0;
    for (std::size_t i = 0; i <= deg; ++i, p *= ax) s += std::abs(c[i]) * p;
    return s;
  };

  constexpr int max_iter = 500;
  std::vector<bool> done(deg, false);
  for (int it = 0; it < max_iter; ++it) {
    bool all = true;
    for (std::size_t k = 0; k < deg; ++k) {
      if (done[k]) continue;
      const Complex p = poly_eval(c, z[k]);
      if (std::abs(p) <= 1e-15 * scale_at(z[k])) {
        done[k] = true;
        continue;
      }
      const Complex ratio = p / poly_eval(dc, z[k]);
      Complex sum = 0.0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * sum);
      z[k] -= step;
      if (std::abs(step) <= 1e-16 * std::abs(z[k])) done[k] = true;
      all = false;
    }
    if (all) break;
  }

  // Newton polish against the original coefficients, then acceptance check.
  for (auto& zk : z) {
    for (int it = 0; it < 3; ++it) {
      const Complex d = poly_eval(dc, zk);
      if (d == Complex{}) break;
      const Complex cand = zk - poly_eval(c, zk) / d;
      if (!(std::abs(poly_eval(c, cand)) < std::abs(poly_eval(c, zk)))) break;
      zk = cand;
    }
  }
  double worst = 0.0;
  for (const auto& zk : z) worst = std::max(worst, std::abs(poly_eval(c, zk)) / scale_at(zk));
  if (!(worst <= 1e-10))
    throw ConvergenceError("poly_roots: no convergence", worst);
  return z;
}

inline std::vector<Complex> poly_roots(std::initializer_list<Complex> coeffs) {
  return poly_roots(std::span<const Complex>(coeffs.begin(), coeffs.size()));
}

}  // namespace bjb
