// Shared helpers for the test suite: seeded random inputs and a dense solver
// that shares no code with the library.
#pragma once

#include <random>

#include "bjb/bjb.hpp"

namespace bjb::testing {

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (auto& x : m.data()) x = Complex(g(rng), g(rng));
  return m;
}

inline CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const CMatrix a = random_matrix(n, n, rng);
  return hermitian_part(a);
}

/// Unitary factor of a random matrix via modified Gram-Schmidt on its columns.
inline CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  CMatrix q = random_matrix(n, n, rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, p)) * q(i, c);
      for (std::size_t i = 0; i < n; ++i) q(i, c) -= dot * q(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, c));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, c) /= nrm;
  }
  return q;
}

/// Family with random dense blocks for n <= size; B_n Hermitian.
inline OperatorFamily random_family(std::size_t dim, std::size_t size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BlockMatrix> a, b;
  for (std::size_t n = 0; n < size; ++n) {
    a.push_back(random_matrix(dim, dim, rng));
    b.push_back(random_hermitian(dim, rng) * Complex(3.0));
  }
  return table_family(dim, std::move(a), std::move(b), std::nullopt, "random");
}

/// Gauss-Jordan elimination with full pivoting.
inline CMatrix gauss_solve(CMatrix a, CMatrix rhs) {
  const std::size_t n = a.rows(), m = rhs.cols();
  std::vector<std::size_t> colperm(n);
  for (std::size_t i = 0; i < n; ++i) colperm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    double best = -1.0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (std::abs(a(i, j)) > best) best = std::abs(a(i, j)), pr = i, pc = j;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
    for (std::size_t j = 0; j < m; ++j) std::swap(rhs(k, j), rhs(pr, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pc));
    std::swap(colperm[k], colperm[pc]);
    const Complex piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) a(k, j) /= piv;
    for (std::size_t j = 0; j < m; ++j) rhs(k, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = a(i, k);
      if (f == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < m; ++j) rhs(i, j) -= f * rhs(k, j);
    }
  }
  CMatrix x(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) x(colperm[i], j) = rhs(i, j);
  return x;
}

inline double rel_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).frobenius() / std::max(b.frobenius(), 1e-300);
}

}  // namespace bjb::testing
