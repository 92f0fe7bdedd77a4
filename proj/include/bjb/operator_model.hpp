// Block Jacobi operator families and their finite truncations.
//
// A family supplies the entry sequences n -> A_n (off-diagonal) and
// n -> B_n (diagonal, Hermitian) of the semi-infinite block matrix
//
//   | B_1   A_1              |
//   | A_1*  B_2   A_2        |
//   |       A_2*  B_3   ...  |
//
// Indices are 1-based throughout the public API.
#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "bjb/dense_linalg.hpp"

namespace bjb {

struct OperatorFamily {
  using Rule = std::function<BlockMatrix(std::size_t)>;

  std::size_t dim = 1;
  Rule offdiag;                  // n -> A_n
  Rule diag;                     // n -> B_n, Hermitian
  std::optional<double> edge_b;  // claimed inf of the essential spectrum
  std::string label;
};

/// (A_n, B_n) with shape and Hermitian checks.
inline std::pair<BlockMatrix, BlockMatrix> block_entries(const OperatorFamily& family,
                                                         std::size_t n) {
  if (n == 0) throw DomainError("block_entries: index n must be >= 1");
  if (family.dim == 0) throw DomainError("block_entries: block dimension must be >= 1");
  BlockMatrix a = family.offdiag(n);
  BlockMatrix b = family.diag(n);
  const std::size_t d = family.dim;
  if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
    throw DomainError("block_entries: block at n=" + std::to_string(n) + " is not " +
                      std::to_string(d) + "x" + std::to_string(d));
  if (!is_hermitian(b, 1e-12))
    throw DomainError("block_entries: diagonal block B_" + std::to_string(n) +
                      " is not Hermitian");
  return {std::move(a), std::move(b)};
}

/// The N-block finite section. Immutable after construction.
class Truncation {
public:
  Truncation(std::string label, std::size_t dim, std::vector<BlockMatrix> diag_blocks,
             std::vector<BlockMatrix> offdiag_blocks)
      : label_(std::move(label)), dim_(dim), diag_(std::move(diag_blocks)),
        offdiag_(std::move(offdiag_blocks)) {
    if (diag_.empty()) throw DomainError("Truncation: needs at least one block");
    if (offdiag_.size() + 1 != diag_.size())
      throw DomainError("Truncation: expected N-1 off-diagonal blocks");
  }

  const std::string& label() const noexcept { return label_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t nblocks() const noexcept { return diag_.size(); }
  std::size_t dense_dim() const noexcept { return diag_.size() * dim_; }

  /// B_n, 1-based.
  const BlockMatrix& diag(std::size_t n) const { return diag_.at(n - 1); }
  /// A_n for 1 <= n <= N-1.
  const BlockMatrix& offdiag(std::size_t n) const { return offdiag_.at(n - 1); }

  const std::vector<BlockMatrix>& diag_blocks() const noexcept { return diag_; }
  const std::vector<BlockMatrix>& offdiag_blocks() const noexcept { return offdiag_; }

  CMatrix dense() const {
    const std::size_t d = dim_, nd = dense_dim();
    CMatrix m(nd, nd);
    for (std::size_t k = 0; k < diag_.size(); ++k) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          m(k * d + i, k * d + j) = diag_[k](i, j);
          if (k + 1 < diag_.size()) {
            m(k * d + i, (k + 1) * d + j) = offdiag_[k](i, j);
            m((k + 1) * d + j, k * d + i) = std::conj(offdiag_[k](i, j));
          }
        }
    }
    return m;
  }

  /// y = T x for a stacked vector of length N d.
  CVector apply(std::span<const Complex> x) const {
    const std::size_t d = dim_, n = nblocks();
    if (x.size() != n * d) throw DomainError("Truncation::apply: length mismatch");
    CVector y(n * d);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < d; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          acc += diag_[k](i, j) * x[k * d + j];
          if (k + 1 < n) acc += offdiag_[k](i, j) * x[(k + 1) * d + j];
          if (k > 0) acc += std::conj(offdiag_[k - 1](j, i)) * x[(k - 1) * d + j];
        }
        y[k * d + i] = acc;
      }
    return y;
  }

  /// Copy with B_1 replaced.
  Truncation with_first_diag(BlockMatrix b1, std::string label) const {
    auto diag = diag_;
    diag.front() = std::move(b1);
    return Truncation(std::move(label), dim_, std::move(diag), offdiag_);
  }

private:
  std::string label_;
  std::size_t dim_;
  std::vector<BlockMatrix> diag_;
  std::vector<BlockMatrix> offdiag_;
};

inline Truncation assemble_truncation(const OperatorFamily& family, std::size_t nblocks) {
  if (nblocks == 0) throw DomainError("assemble_truncation: N must be >= 1");
  std::vector<BlockMatrix> diag, off;
  diag.reserve(nblocks);
  off.reserve(nblocks - 1);
  for (std::size_t n = 1; n <= nblocks; ++n) {
    auto [a, b] = block_entries(family, n);
    diag.push_back(std::move(b));
    if (n < nblocks) off.push_back(std::move(a));
  }
  return Truncation(family.label, family.dim, std::move(diag), std::move(off));
}

/// The second-order difference expression applied to u_1..u_M, with u_{M+1} = 0:
///   (Yu)_1 = B_1 u_1 + A_1 u_2,
///   (Yu)_k = A_{k-1}* u_{k-1} + B_k u_k + A_k u_{k+1}.
inline std::vector<CVector> apply_upsilon(const OperatorFamily& family,
                                          std::span<const CVector> u) {
  const std::size_t m = u.size(), d = family.dim;
  if (m < 2) throw DomainError("apply_upsilon: need at least two sites");
  for (std::size_t k = 0; k < m; ++k)
    if (u[k].size() != d)
      throw DomainError("apply_upsilon: u_" + std::to_string(k + 1) + " has length " +
                        std::to_string(u[k].size()) + ", expected " + std::to_string(d));

  std::vector<BlockMatrix> a(m), b(m);
  for (std::size_t n = 1; n <= m; ++n) std::tie(a[n - 1], b[n - 1]) = block_entries(family, n);

  std::vector<CVector> out(m, CVector(d));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        acc += b[k](i, j) * u[k][j];
        if (k + 1 < m) acc += a[k](i, j) * u[k + 1][j];
        if (k > 0) acc += std::conj(a[k - 1](j, i)) * u[k - 1][j];
      }
      out[k][i] = acc;
    }
  }
  return out;
}

/// Partial sum sum_{m=1}^{N} 1/||A_m|| of the generalized Carleman series.
inline double carleman_sum(const OperatorFamily& family, std::size_t nterms) {
  if (nterms == 0) throw DomainError("carleman_sum: N must be >= 1");
  double sum = 0.0;
  for (std::size_t m = 1; m <= nterms; ++m) {
    const double norm = spectral_norm(block_entries(family, m).first);
    if (norm == 0.0)
      throw DomainError("carleman_sum: ||A_" + std::to_string(m) + "|| = 0, term undefined");
    sum += 1.0 / norm;
  }
  return sum;
}

/// Heuristic trend flag: the last term carries little weight (N a_N < 0.1 S_N),
/// the signature of a summable sequence. Divergent power laws keep N a_N / S_N
/// near 1 - p.
inline bool carleman_looks_convergent(const OperatorFamily& family, std::size_t nterms) {
  const double sum = carleman_sum(family, nterms);
  const double last = 1.0 / spectral_norm(block_entries(family, nterms).first);
  return static_cast<double>(nterms) * last < 0.1 * sum;
}

// ---------------------------------------------------------------------------
// Built-in families and modifiers.

/// d = 1, A_n = 1, B_n = 0: the free discrete Laplacian, spectrum [-2, 2].
inline OperatorFamily scalar_free_family() {
  OperatorFamily f;
  f.dim = 1;
  f.offdiag = [](std::size_t) { return BlockMatrix{{1.0}}; };
  f.diag = [](std::size_t) { return BlockMatrix{{0.0}}; };
  f.edge_b = -2.0;
  f.label = "scalar-free";
  return f;
}

/// A_n = A, B_n = B for every n.
inline OperatorFamily constant_family(BlockMatrix a, BlockMatrix b, std::string label) {
  if (!a.square() || a.rows() != b.rows() || !b.square())
    throw DomainError("constant_family: blocks must be square of equal size");
  OperatorFamily f;
  f.dim = a.rows();
  f.offdiag = [a = std::move(a)](std::size_t) { return a; };
  f.diag = [b = std::move(b)](std::size_t) { return b; };
  f.label = std::move(label);
  return f;
}

struct DiagonalTestParams {
  double a1 = 1.0, a2 = 4.0;  // A_k = diag(a1, a2) k^alpha
  double c1 = 2.0, c2 = 8.0;  // B_k = diag(c1, c2) k^alpha
  double alpha = 0.6;
};

/// Commuting 2x2 family with diagonal entries. With c_i = 2 a_i each coordinate
/// is a scalar Jacobi matrix whose quadratic form is nonnegative, so b = 0.
inline OperatorFamily diagonal_test_family(const DiagonalTestParams& p) {
  OperatorFamily f;
  f.dim = 2;
  f.offdiag = [p](std::size_t n) {
    const double r = std::pow(static_cast<double>(n), p.alpha);
    return BlockMatrix{{p.a1 * r, 0.0}, {0.0, p.a2 * r}};
  };
  f.diag = [p](std::size_t n) {
    const double r = std::pow(static_cast<double>(n), p.alpha);
    return BlockMatrix{{p.c1 * r, 0.0}, {0.0, p.c2 * r}};
  };
  if (p.c1 >= 2.0 * std::abs(p.a1) && p.c2 >= 2.0 * std::abs(p.a2)) f.edge_b = 0.0;
  f.label = "diagonal-test";
  return f;
}

/// B_n + c I for all n; edge_b moves with the shift.
inline OperatorFamily shift_diag(OperatorFamily f, double c) {
  auto inner = f.diag;
  const std::size_t d = f.dim;
  f.diag = [inner, c, d](std::size_t n) { return inner(n) + BlockMatrix::identity(d) * Complex(c); };
  if (f.edge_b) *f.edge_b += c;
  f.label += "+shift(" + std::to_string(c) + ")";
  return f;
}

/// B_1 + c I, all other entries unchanged (a compact perturbation).
inline OperatorFamily shift_first_diag(OperatorFamily f, double c) {
  auto inner = f.diag;
  const std::size_t d = f.dim;
  f.diag = [inner, c, d](std::size_t n) {
    BlockMatrix b = inner(n);
    if (n == 1) b += BlockMatrix::identity(d) * Complex(c);
    return b;
  };
  f.label += "+b1shift(" + std::to_string(c) + ")";
  return f;
}

/// Family defined by an explicit table of blocks for n = 1..size.
inline OperatorFamily table_family(std::size_t dim, std::vector<BlockMatrix> offdiag,
                                   std::vector<BlockMatrix> diag, std::optional<double> edge_b,
                                   std::string label) {
  if (offdiag.size() != diag.size() || diag.empty())
    throw DomainError("table_family: A and B tables must be non-empty and of equal length");
  auto shared_a = std::make_shared<const std::vector<BlockMatrix>>(std::move(offdiag));
  auto shared_b = std::make_shared<const std::vector<BlockMatrix>>(std::move(diag));
  OperatorFamily f;
  f.dim = dim;
  f.offdiag = [shared_a](std::size_t n) {
    if (n == 0 || n > shared_a->size())
      throw DomainError("table family: index n=" + std::to_string(n) + " outside table");
    return (*shared_a)[n - 1];
  };
  f.diag = [shared_b](std::size_t n) {
    if (n == 0 || n > shared_b->size())
      throw DomainError("table family: index n=" + std::to_string(n) + " outside table");
    return (*shared_b)[n - 1];
  };
  f.edge_b = edge_b;
  f.label = std::move(label);
  return f;
}

}  // namespace bjb
