#pragma once

#include "rmte/types.hpp"

namespace rmte {

// Data-parallel inner loops used by the propagation and statistics paths.
// Each kernel has a serial reference implementation (used by the tests and
// the benchmark as ground truth) and an OpenMP variant. Results are
// identical: the parallel loops write disjoint slots and reductions are
// merged in index order.

// Purity tr(rho_A^2) for every column of `states`. Columns hold bipartite
// amplitudes in a product basis ordered (a, b) -> a*nb + b.
RealVector purity_batch_serial(const Matrix& states, int na, int nb);
RealVector purity_batch_omp(const Matrix& states, int na, int nb);

// out = diag(phases) * in, i.e. row i scaled by phases[i].
void scale_rows_serial(const Vector& phases, const Matrix& in, Matrix& out);
void scale_rows_omp(const Vector& phases, const Matrix& in, Matrix& out);

// For each sparse state (given by basis indices and coefficients), form the
// linear combination of the matching columns of `propagator` and return the
// purity of the result. All states share one index/coefficient layout:
// state s uses entries [offsets[s], offsets[s+1]).
RealVector sparse_apply_purity_serial(const Matrix& propagator,
                                      const std::vector<int>& indices,
                                      const std::vector<Complex>& coeffs,
                                      const std::vector<int>& offsets, int na, int nb);
RealVector sparse_apply_purity_omp(const Matrix& propagator,
                                   const std::vector<int>& indices,
                                   const std::vector<Complex>& coeffs,
                                   const std::vector<int>& offsets, int na, int nb);

double purity_single(const Vector& state, int na, int nb);

}  // namespace rmte
