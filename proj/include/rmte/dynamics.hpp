#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmte/ensemble.hpp"
#include "rmte/kernels.hpp"
#include "rmte/states.hpp"
#include "rmte/types.hpp"

namespace rmte {

// Full eigensystem of a unitary operator: phases theta in [0, 2pi) and the
// matrix of eigencolumns.
struct SpectralDecomposition {
  RealVector eigenphases;
  Matrix eigenvectors;
  double min_gap = 0.0;  // smallest circular eigenphase gap

  int dim() const { return static_cast<int>(eigenphases.size()); }
};

// Eigendecomposition of a unitary matrix (LAPACK zgeev). Throws on
// non-unitary input or solver failure.
SpectralDecomposition decompose(const Matrix& floquet);

double circular_min_gap(const RealVector& phases);

enum class Subsystem { A, B };

// rho_A or rho_B by partial trace, (a, b) -> a*nb + b layout.
Matrix reduced_density(const Vector& state, const SubsystemDims& dims, Subsystem which);

struct SchmidtSpectrum {
  RealVector eigenvalues;  // descending, clamped at zero
};

SchmidtSpectrum schmidt_spectrum(const Vector& state, const SubsystemDims& dims);

// S_2 = 1 - tr(rho_A^2) without diagonalization.
double linear_entropy(const Vector& state, const SubsystemDims& dims);
double purity(const Vector& state, const SubsystemDims& dims);

// Map iterations n for rescaled time t = n D sqrt(Lambda). Throws for
// t > 0 at Lambda = 0 where the rescaling is undefined.
long long iterations_for_time(double t, const CouplingStrength& coupling);
double time_for_iterations(long long n, const CouplingStrength& coupling);

Vector evolve_iterations(const Vector& state0, const SpectralDecomposition& sd, long long n);
Vector evolve(const Vector& state0, const SpectralDecomposition& sd, double t,
              const CouplingStrength& coupling);

// Eigenbases of the uncoupled subsystem operators; the preferred bases the
// C/R/E state types are defined in.
struct SubsystemBases {
  SpectralDecomposition a;
  SpectralDecomposition b;
};

SubsystemBases subsystem_bases(const TransitionRealization& r);

// Transform coordinates over the unperturbed product eigenbasis into the
// computational product basis (and back).
Vector eigen_to_computational(const Vector& state_eigen, const SubsystemBases& bases);

struct EntropyTrace {
  std::vector<double> rescaled_times;
  std::vector<long long> iteration_counts;
  std::vector<double> s2_values;
  CouplingStrength coupling;
};

EntropyTrace entropy_trace(const ProductStateSpec& spec, const TransitionRealization& r,
                           const SubsystemBases& bases, const SpectralDecomposition& sd,
                           const std::vector<double>& times, RngStream& rng);

// Default grid: geometric ramp through the growth phase, then linear out to
// t_max (saturation sits near t ~ 1-2).
std::vector<double> default_time_grid(double t_max = 4.0, int points = 48);

// ---------------------------------------------------------------------------
// Batched propagation engine.
//
// Works entirely in the unperturbed product eigenbasis: G = W^dag V holds the
// perturbed eigenvectors in these coordinates (W is the product of subsystem
// eigenvector matrices). Purity is basis-product invariant, so traces never
// need the computational basis.
// ---------------------------------------------------------------------------
class TraceEngine {
 public:
  explicit TraceEngine(const TransitionRealization& r);

  const SubsystemDims& dims() const { return dims_; }
  const CouplingStrength& coupling() const { return coupling_; }
  const RealVector& eigenphases() const { return eigenphases_; }
  double min_gap() const { return min_gap_; }
  // perturbed eigenvectors in unperturbed product eigenbasis coordinates
  const Matrix& overlap() const { return overlap_; }
  const SubsystemBases& bases() const { return bases_; }

  // S2 table, rows = iteration counts, columns = states (states given in
  // unperturbed product eigenbasis coordinates).
  RealMatrix s2_direct(const Matrix& states_eigen,
                       const std::vector<long long>& n_values) const;

  // n-step propagator in product eigenbasis coordinates, A_n = G D^n G^dag.
  Matrix propagator(long long n) const;

  // Streams A_n over the grid; `visit(i, A_n)` is called once per n in
  // order. Cheaper than s2_direct when many states share one realization.
  void for_each_propagator(const std::vector<long long>& n_values,
                           const std::function<void(std::size_t, const Matrix&)>& visit) const;

 private:
  Vector phase_powers(long long n) const;

  SubsystemDims dims_;
  CouplingStrength coupling_;
  SubsystemBases bases_;
  RealVector eigenphases_;
  Matrix overlap_;  // G, dims total x total
  double min_gap_ = 0.0;
};

}  // namespace rmte
