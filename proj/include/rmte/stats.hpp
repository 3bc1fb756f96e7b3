#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmte/dynamics.hpp"
#include "rmte/types.hpp"

namespace rmte {

// ---------------------------------------------------------------------------
// Exact infinite time average of S2.
//
// For eigenvectors |m> with reduced density matrices rho_{A,m}, rho_{B,m} and
// overlaps p_m = |<m|alpha>|^2,
//   mu2_bar = sum_m p_m^2 mu_{2,m}
//           + sum_{m != m'} [tr(rho_Am rho_Am') + tr(rho_Bm rho_Bm')] p_m p_m'.
// The pair sums are organized as Gram matrices of flattened reduced density
// matrices so a batch of states costs two dense products.
// ---------------------------------------------------------------------------
class ItaEngine {
 public:
  // eigenvectors given in any product basis with (a, b) -> a*nb + b layout
  ItaEngine(const Matrix& eigenvectors, const SubsystemDims& dims, double min_gap);

  // S2bar for states (columns, same coordinates as the eigenvectors)
  RealVector s2bar(const Matrix& states) const;
  double s2bar_one(const Vector& state) const;

  // S2bar of every coordinate basis vector (the E (x) E initial states when
  // the engine is built in the unperturbed product eigenbasis), without
  // forming the identity explicitly.
  RealVector s2bar_basis_states() const;

  const RealVector& eigenstate_purities() const { return purities_; }

 private:
  SubsystemDims dims_;
  Matrix eigenvectors_;
  RealMatrix pair_kernel_;  // G_A + G_B off diagonal, mu_{2,m} on the diagonal
  RealVector purities_;
};

// Exact S2bar of a single state in the computational basis.
double infinite_time_avg_exact(const Vector& state0, const SpectralDecomposition& sd,
                               const SubsystemDims& dims);

// Window-sampled empirical infinite time average: mean of S2 over n_samples
// random iteration counts uniform in [t_min, t_max] (de-duplicated). Throws
// if the window holds fewer than 10 distinct iteration counts.
struct EmpiricalAverage {
  double mean = 0.0;
  double std_error = 0.0;
  int distinct_samples = 0;
};

EmpiricalAverage infinite_time_avg_empirical(const std::function<double(long long)>& s2_at,
                                             const CouplingStrength& coupling, double t_min,
                                             double t_max, int n_samples, RngStream& rng);

// Normalized ensemble variance <(X - <X>)^2> / <X>^2 (unbiased estimator).
double equilibrium_measure(const std::vector<double>& s2bar_samples);

// Time average over window rows of the across-ensemble normalized variance.
// s2_window: rows = window times, columns = ensemble members.
double relaxation_measure(const RealMatrix& s2_window);

// Delete-group jackknife standard error of a statistic over ensemble columns.
double jackknife_std_error(int n_members,
                           const std::function<double(const std::vector<int>&)>& stat,
                           int groups = 20);

enum class Binning { Linear, Log };

struct HistogramDensity {
  std::vector<double> bin_edges;  // bins + 1 entries
  std::vector<double> density;    // normalized: sum density*width = 1
  std::vector<long long> counts;
  long long total_count = 0;
  long long underflow_count = 0;  // log binning: samples clamped below 1e-12
};

HistogramDensity s2bar_density(const std::vector<double>& samples, Binning binning,
                               int bins);

// Per-cell ensemble outputs.
struct MeanCurve {
  std::vector<double> times;
  std::vector<long long> iterations;
  std::vector<double> mean;
  std::vector<double> std_error;
};

struct EnsembleSummary {
  MeanCurve mean_curve;
  std::vector<double> s2bar_samples;
  double s2bar_mean = 0.0;
  double s2bar_std_error = 0.0;
  double equilibrium = 0.0;
  double equilibrium_std_error = 0.0;
  double relaxation = 0.0;
  double relaxation_std_error = 0.0;
  int states_per_realization = 0;
  int realizations = 0;
};

// Assemble the summary from growth-grid and window S2 tables (rows = times,
// columns = states in fixed order).
EnsembleSummary summarize_ensemble(const std::vector<double>& times,
                                   const std::vector<long long>& iterations,
                                   const RealMatrix& s2_growth, const RealMatrix& s2_window,
                                   int states_per_realization, int realizations);

}  // namespace rmte
