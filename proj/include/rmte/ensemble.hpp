#pragma once

#include <cstdint>

#include "rmte/rng.hpp"
#include "rmte/types.hpp"

namespace rmte {

// Interaction strength in both parameterizations. epsilon is the bare
// coupling of the diagonal unitary interaction, lambda the universal
// transition parameter; they are kept mutually consistent through the exact
// CUE expression.
struct CouplingStrength {
  double epsilon = 0.0;
  double lambda = 0.0;
  double mean_spacing = 0.0;  // D, radians

  static CouplingStrength from_epsilon(double epsilon, const SubsystemDims& dims);
  static CouplingStrength from_lambda(double lambda, const SubsystemDims& dims);
};

// Random diagonal interaction phases xi_ab, each uniform in (-1/2, 1/2].
struct InteractionPhases {
  RealMatrix xi;  // n_a x n_b
};

// One draw (U_A, U_B, xi) of the transition ensemble.
struct TransitionRealization {
  SubsystemDims dims;
  Matrix u_a;  // n_a x n_a, CUE
  Matrix u_b;  // n_b x n_b, CUE
  InteractionPhases phases;
  CouplingStrength coupling;
  std::uint64_t seed_tag = 0;
};

// Haar-distributed unitary: complex Ginibre + QR with the R-diagonal phases
// normalized away.
Matrix sample_haar_unitary(int dim, RngStream& rng);

TransitionRealization sample_realization(const SubsystemDims& dims,
                                         const CouplingStrength& coupling,
                                         std::uint64_t seed_tag);

// Exact transition parameter for the CUE transition ensemble,
//   Lambda = N_A^2 N_B^2 [1 - sin^2(pi eps)/(pi eps)^2] / (4 pi^2 (N_A+1)(N_B+1))
double lambda_from_epsilon(double epsilon, const SubsystemDims& dims);

// Inverse of the above on epsilon in [0, 1] by bisection (the exact map is
// monotone there). Throws if lambda exceeds the supremum lambda(1).
double epsilon_from_lambda(double lambda, const SubsystemDims& dims);

// Largest lambda reachable for given dims (attained at epsilon = 1).
double lambda_supremum(const SubsystemDims& dims);

// Coupled Floquet operator (U_A (x) U_B) diag(e^{i 2 pi eps xi_ab}) in the
// product basis ordered (a, b) -> a*n_b + b.
Matrix build_floquet(const TransitionRealization& r);

// Kronecker product in the same (a, b) row-major index convention.
Matrix kron_product(const Matrix& a, const Matrix& b);

}  // namespace rmte
