#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmte/types.hpp"

namespace rmte {

struct MomentReport {
  std::string quantity;
  double analytic = 0.0;
  double monte_carlo = 0.0;
  double std_error = 0.0;
  long long n_samples = 0;

  double deviation_sigmas() const {
    return std_error > 0.0 ? std::abs(monte_carlo - analytic) / std_error : 0.0;
  }
  bool pass(double n_sigma = 3.0) const { return deviation_sigmas() <= n_sigma; }
};

enum class PairType { BothOff, JEqual, KEqual, Diagonal };

// <|V_{jk,j'k'}|^2> against pi^2 (1+d_jj')(1+d_kk') / (3 (N_A+1)(N_B+1)),
// V sampled from fresh Haar unitaries and uniform interaction phases.
MomentReport v_element_variance(const SubsystemDims& dims, PairType pair_type,
                                long long n_samples, std::uint64_t seed);

// Covariances <x_jk x_j'k'> of the rescaled diagonal elements against
// (1+d_jj')(1+d_kk')/4, for all four index-pair classes.
std::vector<MomentReport> diag_covariance(const SubsystemDims& dims, long long n_samples,
                                          std::uint64_t seed);

// Haar eigenvector component moments |z|^4, |z_i|^2|z_j|^2, |z|^8,
// |z_i|^4|z_j|^4 against the exact finite-N formulas.
std::vector<MomentReport> haar_moments(int n, long long n_samples, std::uint64_t seed);

struct ExponentialCheck {
  MomentReport mean_report;
  MomentReport var_report;
  double ks_statistic = 0.0;
  double ks_threshold_95 = 0.0;
  long long n_samples = 0;

  bool pass() const {
    return mean_report.pass() && var_report.pass() && ks_statistic < ks_threshold_95;
  }
};

// Rescaled off-diagonal intensities w = |V|^2 / <|V|^2> against the unit
// exponential law (Kolmogorov-Smirnov plus first two moments).
ExponentialCheck off_diagonal_exponential_check(const SubsystemDims& dims,
                                                long long n_samples, std::uint64_t seed);

}  // namespace rmte
