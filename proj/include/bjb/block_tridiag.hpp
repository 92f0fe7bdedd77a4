// Structure-preserving block LU of T - lambda I for a truncation T, and the
// Sylvester-inertia count of eigenvalues below a real shift.
#pragma once

#include "bjb/operator_model.hpp"

namespace bjb {

/// Block LU without inter-block pivoting:
///   D_1 = B_1 - lambda I,
///   D_k = B_k - lambda I - A_{k-1}* D_{k-1}^{-1} A_{k-1}.
/// The lower factor has unit diagonal and sub-blocks L_k = A_{k-1}* D_{k-1}^{-1};
/// the upper factor has diagonal D_k and super-blocks A_k.
class BlockTridiagLU {
public:
  static constexpr double max_pivot_condition = 1e12;

  BlockTridiagLU(const Truncation& trunc, Complex shift) : trunc_(&trunc), shift_(shift) {
    const std::size_t n = trunc.nblocks(), d = trunc.dim();
    const CMatrix shift_block = CMatrix::identity(d) * shift;
    pivots_.reserve(n);
    pivot_inverses_.reserve(n);
    transforms_.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t k = 1; k <= n; ++k) {
      CMatrix dk = trunc.diag(k) - shift_block;
      if (k > 1) {
        const CMatrix& a = trunc.offdiag(k - 1);
        CMatrix l = a.adjoint() * pivot_inverses_.back();
        dk -= l * a;
        transforms_.push_back(std::move(l));
      }
      DenseLU lu(dk);
      const double cond = lu.condition();
      if (!(cond < max_pivot_condition)) throw SingularShiftError(k, cond);
      pivot_inverses_.push_back(lu.inverse());
      pivots_.push_back(std::move(dk));
    }
  }

  Complex shift() const noexcept { return shift_; }
  const std::vector<CMatrix>& pivot_blocks() const noexcept { return pivots_; }
  const std::vector<CMatrix>& transform_blocks() const noexcept { return transforms_; }

  /// X with (T - lambda I) X = rhs; rhs is (N d) x m.
  CMatrix solve(const CMatrix& rhs) const {
    const Truncation& t = *trunc_;
    const std::size_t n = t.nblocks(), d = t.dim(), m = rhs.cols();
    if (rhs.rows() != n * d) throw DomainError("BlockTridiagLU::solve: rhs has wrong row count");

    auto block = [&](const CMatrix& x, std::size_t k) {  // rows of block k (0-based)
      CMatrix b(d, m);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t c = 0; c < m; ++c) b(i, c) = x(k * d + i, c);
      return b;
    };
    std::vector<CMatrix> z(n);
    z[0] = block(rhs, 0);
    for (std::size_t k = 1; k < n; ++k) z[k] = block(rhs, k) - transforms_[k - 1] * z[k - 1];

    std::vector<CMatrix> x(n);
    x[n - 1] = pivot_inverses_[n - 1] * z[n - 1];
    for (std::size_t k = n - 1; k-- > 0;)
      x[k] = pivot_inverses_[k] * (z[k] - t.offdiag(k + 1) * x[k + 1]);

    CMatrix out(n * d, m);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t c = 0; c < m; ++c) out(k * d + i, c) = x[k](i, c);
    return out;
  }

private:
  const Truncation* trunc_;
  Complex shift_;
  std::vector<CMatrix> pivots_;
  std::vector<CMatrix> pivot_inverses_;
  std::vector<CMatrix> transforms_;
};

inline CMatrix block_tridiag_solve(const Truncation& trunc, Complex shift, const CMatrix& rhs) {
  return BlockTridiagLU(trunc, shift).solve(rhs);
}

// ---------------------------------------------------------------------------
// Spectrum of a truncation via inertia.

/// Number of eigenvalues of the truncation strictly below sigma. Uses the
/// Haynsworth additivity of inertia over the block LDL* pivots of T - sigma I.
/// An exactly singular pivot direction is counted as nonnegative.
inline std::size_t count_eigenvalues_below(const Truncation& trunc, double sigma) {
  const std::size_t n = trunc.nblocks(), d = trunc.dim();
  std::size_t count = 0;
  CMatrix prev_inv;
  for (std::size_t k = 1; k <= n; ++k) {
    CMatrix dk = trunc.diag(k);
    for (std::size_t i = 0; i < d; ++i) dk(i, i) -= sigma;
    if (k > 1) {
      const CMatrix& a = trunc.offdiag(k - 1);
      dk -= a.adjoint() * prev_inv * a;
    }
    dk = hermitian_part(dk);
    if (d == 1) {
      double w = dk(0, 0).real();
      const double floor = 1e-300;
      if (w < 0.0) ++count;
      if (std::abs(w) < floor) w = floor;
      prev_inv = CMatrix{{1.0 / w}};
      continue;
    }
    EigDecomposition eig = hermitian_eig(dk);
    double scale = 0.0;
    for (double w : eig.values) scale = std::max(scale, std::abs(w));
    const double floor = std::max(scale * 1e-300, 1e-300);
    for (double& w : eig.values) {
      if (w < 0.0) ++count;
      if (std::abs(w) < floor) w = (w < 0.0 ? -floor : floor);
    }
    prev_inv = spectral_function(eig, [](double w) { return 1.0 / w; });
  }
  return count;
}

/// Interval [lo, hi] containing the spectrum (block Gershgorin with spectral norms).
inline std::pair<double, double> spectrum_bounds(const Truncation& trunc) {
  const std::size_t n = trunc.nblocks();
  std::vector<double> anorm(n + 1, 0.0);  // anorm[k] = ||A_k||, anorm[0] = anorm[n] = 0
  for (std::size_t k = 1; k < n; ++k) anorm[k] = spectral_norm(trunc.offdiag(k));
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto w = hermitian_eig(trunc.diag(k)).values;
    const double r = anorm[k - 1] + anorm[k];
    lo = std::min(lo, w.front() - r);
    hi = std::max(hi, w.back() + r);
  }
  const double pad = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1.0});
  return {lo - pad, hi + pad};
}

/// The index-th smallest eigenvalue (0-based) of the truncation by bisection on
/// the inertia count.
inline double eigenvalue_by_index(const Truncation& trunc, std::size_t index) {
  if (index >= trunc.dense_dim()) throw DomainError("eigenvalue_by_index: index out of range");
  auto [lo, hi] = spectrum_bounds(trunc);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_eigenvalues_below(trunc, mid) > index) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline double min_eigenvalue(const Truncation& trunc) { return eigenvalue_by_index(trunc, 0); }

/// All eigenvalues in [lo, hi), ascending, each repeated by multiplicity.
inline std::vector<double> eigenvalues_in(const Truncation& trunc, double lo, double hi) {
  const std::size_t first = count_eigenvalues_below(trunc, lo);
  const std::size_t last = count_eigenvalues_below(trunc, hi);
  std::vector<double> out;
  out.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) out.push_back(eigenvalue_by_index(trunc, i));
  return out;
}

/// Distance from x to the nearest eigenvalue of the truncation.
inline double distance_to_spectrum(const Truncation& trunc, Complex x) {
  const std::size_t below = count_eigenvalues_below(trunc, x.real());
  double best = INFINITY;
  if (below > 0) best = std::abs(x - Complex(eigenvalue_by_index(trunc, below - 1)));
  if (below < trunc.dense_dim())
    best = std::min(best, std::abs(x - Complex(eigenvalue_by_index(trunc, below))));
  return best;
}

}  // namespace bjb
