#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace bjb;

namespace {
const double e = std::exp(1.0);
}

TEST(Psi, Values) {
  EXPECT_EQ(psi(0.0), 0.0);
  EXPECT_NEAR(psi(1.0), 2.718281828, 1e-9);
  EXPECT_NEAR(psi(2.0), 29.5562244, 1e-7);
  EXPECT_THROW(psi(-1e-3), DomainError);
}

TEST(Psi, StrictlyIncreasing) {
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = psi(20.0 * i / 1000.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(PsiInv, ValuesAndRoundTrip) {
  EXPECT_NEAR(psi_inv(e), 1.0, 1e-12);
  EXPECT_NEAR(psi_inv(4.0 * e * e), 2.0, 1e-12);
  EXPECT_EQ(psi_inv(0.0), 0.0);
  EXPECT_THROW(psi_inv(-1.0), DomainError);
  double worst = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double x = 20.0 * i / 1000.0;
    worst = std::max(worst, std::abs(psi_inv(psi(x)) - x) / x);
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(PhiDelta, Values) {
  EXPECT_DOUBLE_EQ(phi_delta(0.25, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(phi_delta(4.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(phi_delta(2.0, 2.0), 1.0 / std::sqrt(2.0));
  EXPECT_NEAR(phi_delta(2.0 - 1e-12, 2.0), phi_delta(2.0, 2.0), 1e-12);
  double prev = INFINITY;
  for (int i = 0; i <= 400; ++i) {
    const double v = phi_delta(0.05 * i, 3.0);
    EXPECT_LE(v, prev);
    EXPECT_LE(v, 1.0 / std::sqrt(3.0) + 1e-15);
    prev = v;
  }
  EXPECT_THROW(phi_delta(-1.0, 1.0), DomainError);
  EXPECT_THROW(phi_delta(1.0, 0.0), DomainError);
}

TEST(GammaRate, Values) {
  // (b - Re lambda)(1 - eps) = e with delta = 1
  EXPECT_NEAR(gamma_rate({Complex(-e / 0.9), 0.0, 1.0, 0.1}), 1.0, 1e-12);
  EXPECT_NEAR(gamma_rate({Complex(-4.0 * e / 0.9), 0.0, 4.0, 0.1}), 2.0, 1e-12);
  EXPECT_THROW(gamma_rate({Complex(0.0), 0.0, 1.0, 0.1}), DomainError);
  EXPECT_THROW(gamma_rate({Complex(-1.0), 0.0, 0.0, 0.1}), DomainError);
  EXPECT_THROW(gamma_rate({Complex(-1.0), 0.0, 1.0, 1.0}), DomainError);
}

TEST(GammaRate, Monotonicity) {
  double prev = INFINITY;
  for (double gap : {10.0, 3.0, 1.0, 0.3, 0.1, 1e-2, 1e-4, 1e-8}) {
    const double g = gamma_rate({Complex(-gap, 0.5), 0.0, 1.0, 0.1});
    EXPECT_LT(g, prev);
    prev = g;
  }
  EXPECT_LT(prev, 1e-3);
  double prev_b = 0.0;
  for (double b : {0.0, 0.5, 1.0, 5.0}) {
    const double g = gamma_rate({Complex(-1.0), b, 1.0, 0.1});
    EXPECT_GE(g, prev_b);
    prev_b = g;
  }
}

TEST(SimplifiedRate, ValuesAndAsymptotics) {
  EXPECT_NEAR(simplified_rate({Complex(-1.0), 0.0, 1.0, 0.1}), 0.9, 1e-15);
  EXPECT_NEAR(simplified_rate({Complex(-4.0), 0.0, 1.0, 0.5}), 1.0, 1e-15);
  // near the edge gamma ~ sqrt((b - Re lambda)(1 - eps)), while the
  // simplified rate carries (1 - eps) outside the root: compare accordingly
  const BoundParams p{Complex(-1e-3), 0.0, 1.0, 0.1};
  const double ratio = gamma_rate(p) / std::sqrt(p.gap() * (1.0 - p.epsilon));
  EXPECT_GE(ratio, 0.95);
  EXPECT_LE(ratio, 1.05);
  const double ratio_simplified = gamma_rate(p) / simplified_rate(p);
  EXPECT_NEAR(ratio_simplified, 1.0 / std::sqrt(1.0 - p.epsilon), 0.03);
  EXPECT_GE(ratio_simplified, 0.95);
  EXPECT_LE(ratio_simplified, 1.05);
}

TEST(CorollaryDelta, EnlargesDelta) {
  const BoundParams p{Complex(-5.0), 0.0, 1.0, 0.1};
  const double d = corollary_delta(p);
  EXPECT_NEAR(d, 450.0, 1e-12);
  EXPECT_LE(p.gap() * (1.0 - p.epsilon) / d, 0.01 + 1e-15);
  BoundParams q = p;
  q.delta = d;
  const double ratio = gamma_rate(q) / std::sqrt(p.gap() * (1.0 - p.epsilon));
  EXPECT_GT(ratio, 0.95);
  EXPECT_LT(ratio, 1.0);
  q.delta = 100.0 * d;
  EXPECT_GT(gamma_rate(q) / std::sqrt(p.gap() * (1.0 - p.epsilon)), ratio);
  EXPECT_DOUBLE_EQ(corollary_delta({Complex(-1e-3), 0.0, 1.0, 0.1}), 1.0);
}

TEST(ScalarEnvelope, PartialSums) {
  const BoundParams p{Complex(-1.0), 0.0, 1.0, 0.1};
  const auto free = scalar_envelope(scalar_free_family(), p, 50);
  for (std::size_t m = 1; m <= 50; ++m) EXPECT_DOUBLE_EQ(free.partial_sum(m), m - 1.0);

  const auto st = scalar_envelope(st_family({2.0, 2.0, 0.6}), p, 10);
  EXPECT_NEAR(st.partial_sum(4), 1.0 + std::pow(2.0, -0.3) + std::pow(3.0, -0.3), 1e-13);
  EXPECT_NEAR(st.partial_sum(4), 2.5314755, 1e-7);
  EXPECT_DOUBLE_EQ(st.bound(7, 7), 1.0);
  EXPECT_DOUBLE_EQ(st.bound(3, 9), st.bound(9, 3));
  for (std::size_t m = 2; m <= 10; ++m) {
    const double inc = st.partial_sum(m) - st.partial_sum(m - 1);
    EXPECT_GE(inc, 0.0);
    EXPECT_LE(inc, 1.0 + 1e-15);
  }
}

TEST(OperatorEnvelope, ScalarAbsEqualsScalarWeight) {
  const BoundParams p{Complex(-1.0), 0.0, 1.0, 0.1};
  const auto f = st_family({2.0, 2.0, 0.6});
  const auto sc = scalar_envelope(f, p, 40);
  const auto op = operator_envelope(f, p, 40);
  for (std::size_t m = 1; m <= 40; ++m) {
    const double w = std::exp(sc.gamma * sc.partial_sum(m));
    EXPECT_LE((op.weights[m - 1] - CMatrix::identity(2) * Complex(w)).max_abs(), 1e-10 * w);
  }
}

TEST(OperatorEnvelope, DiagonalFamilyWeights) {
  // A_k = diag(1, 4), delta = 1; pick lambda so gamma = 1
  const auto f = constant_family(CMatrix{{1.0, 0.0}, {0.0, 4.0}}, CMatrix{{2.0, 0.0}, {0.0, 8.0}}, "d");
  const BoundParams p{Complex(-e / 0.9), 0.0, 1.0, 0.1};
  const auto op = operator_envelope(f, p, 5);
  EXPECT_NEAR(op.gamma, 1.0, 1e-12);
  EXPECT_LE((op.weights[1] - CMatrix{{e, 0.0}, {0.0, std::exp(0.5)}}).max_abs(), 1e-12);
}

TEST(OperatorEnvelope, WeightOrdering) {
  const BoundParams p{Complex(-1.0), 0.0, 1.0, 0.1};
  for (const auto& f : {diagonal_test_family({}),
                        diagonal_test_family({0.2, 9.0, 0.4, 18.0, 0.7})}) {
    const auto sc = scalar_envelope(f, p, 60);
    const auto op = operator_envelope(f, p, 60);
    for (std::size_t m = 1; m <= 60; ++m) {
      const double min_w = hermitian_eig(op.weights[m - 1]).values.front();
      EXPECT_GE(min_w, std::exp(sc.gamma * sc.partial_sum(m)) * (1.0 - 1e-12));
    }
  }
}

TEST(OperatorEnvelope, CommutationViolationNamesPair) {
  const BoundParams p{Complex(-1.0), 0.0, 1.0, 0.1};
  try {
    operator_envelope(st_family({1.0, 4.0, 0.6}), p, 5);
    FAIL() << "expected CommutationError";
  } catch (const CommutationError& err) {
    const std::string msg = err.what();
    EXPECT_NE(msg.find("A_1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("B_1"), std::string::npos) << msg;
  }
  // [A_n, B_n] = 0 iff s = t
  for (std::size_t n : {1u, 3u, 8u}) {
    const auto [a, b] = block_entries(st_family({1.0, 4.0, 0.6}), n);
    EXPECT_GT((a * b - b * a).max_abs(), 1e-6);
    const auto [a2, b2] = block_entries(st_family({3.0, 3.0, 0.6}), n);
    EXPECT_LE((a2 * b2 - b2 * a2).max_abs(), 1e-13);
  }
}

TEST(QualifiedConstant, Examples) {
  const BoundParams p{Complex(-1.0), 0.0, 1.0, 0.1};
  EXPECT_NEAR(qualified_constant(p, 7, 0.3, 0.0), 2.0 / (0.1 * 1.0), 1e-12);
  // gamma -> 0 as lambda -> b: the exponential collapses to 1
  const BoundParams q{Complex(-1e-14), 0.0, 1.0, 0.1};
  const double edge_ratio = 0.5 / 2.0;
  const double expect = 2.0 * (1.0 + edge_ratio) / (0.1 * 1e-14);
  EXPECT_NEAR(qualified_constant(q, 1000, 2.0, 0.5) / expect, 1.0, 1e-4);

  double prev = 0.0;
  for (std::size_t M : {0u, 1u, 5u, 10u, 20u}) {
    const double c = qualified_constant(p, M, 1.0, 0.5);
    EXPECT_TRUE(std::isfinite(c));
    EXPECT_GT(c, prev);
    prev = c;
  }
  EXPECT_THROW(qualified_constant(p, 5, 0.0, 0.5), DomainError);
  EXPECT_THROW(qualified_constant(p, 5, 1.0, -0.5), DomainError);
}
