#pragma once

#include <utility>
#include <vector>

#include "rmte/types.hpp"

namespace rmte {
namespace theory {

// Ensemble-averaged entanglement growth in the ultra-weak coupling limit,
//   <S2(t)> = <c_A><c_B> (1 - e^{-2 t^2}).
double ultraweak_curve(double t, double mean_c2_a, double mean_c2_b);

// Saturation values for C (x) C and R (x) R product ensembles.
double cc_saturation(int k_a, int k_b);
double rr_saturation(int k_a, int k_b);

// Relaxation measure for C (x) C, 2 / (K_A(K_A-1) K_B(K_B-1)). Undefined at
// K = 1 (vanishing coherence).
double cc_relaxation(int k_a, int k_b);

// Equilibrium measure for R (x) R (exact rational form in K_A, K_B).
double rr_equilibrium(int k_a, int k_b);

// sigma^2(S2bar) + 2 <c4_A><c4_B> / (<c2_A>^2 <c2_B>^2)
double relaxation_decomposition(double sigma2_eq, double mean_c4_a, double mean_c4_b,
                                double mean_c2_a, double mean_c2_b);

// C(2;t): mean entanglement production shape of eigenstate ensembles in the
// weak regime (closed form with error functions).
double c_function(double t);

// C_2(2;t) = int_0^inf dw int_-inf^inf dz (4w/(z^2+4w))^2 e^-w
//                 sin^4((t/2) sqrt(z^2+4w)),
// evaluated by adaptive quadrature. Satisfies C = 2 (C_1 - C_2).
double c2_function(double t, double abs_tol = 1e-6);

// First-moment companion integral, same measure with (4w/(z^2+4w)) sin^2.
double c1_function(double t, double abs_tol = 1e-6);

// Cached C_2 on a fixed grid with cubic interpolation (for curve overlays).
double c2_function_cached(double t);

// E (x) E mean curve <S2> = C(2;t) sqrt(Lambda) and its saturation.
double ee_mean_curve(double t, double lambda);
double ee_saturation(double lambda);

// E (x) C / E (x) R mean curve [C + 2 <c2_B> C_2] sqrt(Lambda) and the
// t -> inf limit ((5 + 3 <c2_B>)/8) pi^{3/2} sqrt(Lambda).
double ec_mean_curve(double t, double lambda, double mean_c2_b);
double ec_saturation(double lambda, double mean_c2_b);

// Short-time combined growth 4 pi t sqrt(Lambda) + 2 <c_A><c_B> t^2 and the
// crossover time t* = 2 pi sqrt(Lambda) / (<c_A><c_B>) where the two terms
// are equal (infinity at vanishing coherence).
double weak_combined_short(double t, double lambda, double mean_c2_a, double mean_c2_b);
double crossover_time(double lambda, double mean_c2_a, double mean_c2_b);

// Strong interaction regime.
double haar_saturation(const SubsystemDims& dims);  // 1 - 1/N_A - 1/N_B
double lubkin_purity(const SubsystemDims& dims);    // (N_A+N_B)/(N_A N_B + 1)
double strong_curve(double t, double lambda, const SubsystemDims& dims);

// Intermediate regime: S_inf (1 - exp(-C(2;t) sqrt(Lambda) / S_inf)).
double intermediate_curve(double t, double lambda, const SubsystemDims& dims);

// Second Schmidt eigenvalue of the regularized two-level model.
double two_level_schmidt(double t, double lambda, double s, double w);

// S2 of the two-level trace model, 2 sum_l (lambda_l - lambda_l^2) over the
// given (spacing, coupling weight) neighbor list.
double ee_trace_model(double t, double lambda,
                      const std::vector<std::pair<double, double>>& neighbors);

// Heavy-tailed probability density of S2bar for E (x) E ensembles in the
// weak regime; support (0, 1/3) within the two-level approximation.
double ee_s2bar_density(double x, double lambda);

// Perturbed unfolded spacing regularized by degenerate perturbation theory.
double regularized_spacing(double s, double lambda, double x_jk, double x_jpkp, double w);

}  // namespace theory
}  // namespace rmte
