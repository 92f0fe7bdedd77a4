// Green-matrix decay of the 2x2 st family against its envelope, and the bound
// state created by pulling B_1 down.
#include <cstdio>

#include "bjb/bjb.hpp"

int main() {
  using namespace bjb;
  const OperatorFamily fam = st_family({2.0, 2.0, 0.6});
  const BoundParams p{Complex(-1.0), 0.0, 1.0, 0.1};

  VerifyOptions opt;
  opt.calibration = IndexRange{1, 10};
  const DecayReport green = verify_green_decay(fam, p, 300, 1, opt);
  std::printf("gamma = %.6f, fitted C = %.6f, qualified C = %.3g\n", green.gamma, green.fitted_C,
              green.qualified_C.value_or(NAN));
  for (std::size_t j : {1u, 50u, 100u, 200u, 270u})
    std::printf("  j=%3zu  |G_j1| = %.3e  envelope = %.3e\n", j, green.measured[j - 1],
                green.envelope[j - 1]);
  std::printf("verdicts: %zu/%zu pass\n", green.pass_count(), green.verdict.size());

  const OperatorFamily bound = shift_first_diag(fam, -10.0);
  const DecayReport eig = verify_eigenvector_decay(bound, p, 300, EigenSelector::lowest());
  std::printf("lowest eigenvalue %.10f, |u_270| = %.3e, verdicts %zu/%zu pass\n",
              eig.params.lambda.real(), eig.measured[269], eig.pass_count(), eig.verdict.size());
  return green.all_pass() && eig.all_pass() ? 0 : 1;
}
