#include "rmte/theory.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "rmte/quadrature.hpp"

namespace rmte {
namespace theory {

namespace {
const double kPi32 = std::pow(kPi, 1.5);
}

double ultraweak_curve(double t, double mean_c2_a, double mean_c2_b) {
  return mean_c2_a * mean_c2_b * (1.0 - std::exp(-2.0 * t * t));
}

double cc_saturation(int k_a, int k_b) {
  return (1.0 - 1.0 / k_a) * (1.0 - 1.0 / k_b);
}

double rr_saturation(int k_a, int k_b) {
  return (static_cast<double>(k_a - 1) / (k_a + 1)) *
         (static_cast<double>(k_b - 1) / (k_b + 1));
}

double cc_relaxation(int k_a, int k_b) {
  if (k_a < 2 || k_b < 2)
    throw std::invalid_argument("cc_relaxation: undefined for K = 1 (vanishing coherence)");
  const double ka = k_a, kb = k_b;
  return 2.0 / (ka * (ka - 1.0) * kb * (kb - 1.0));
}

double rr_equilibrium(int k_a, int k_b) {
  if (k_a < 2 || k_b < 2)
    throw std::invalid_argument("rr_equilibrium: undefined for K = 1 (vanishing coherence)");
  const double ka = k_a, kb = k_b;
  const double ka3 = ka * ka * ka, kb3 = kb * kb * kb;
  const double num = 4.0 * (ka3 + kb3 + 4.0 * (ka * ka + kb * kb) + ka + kb - 8.0);
  const double den = (ka3 + 4.0 * ka * ka + ka - 6.0) * (kb3 + 4.0 * kb * kb + kb - 6.0);
  return num / den;
}

double relaxation_decomposition(double sigma2_eq, double mean_c4_a, double mean_c4_b,
                                double mean_c2_a, double mean_c2_b) {
  if (mean_c2_a <= 0.0 || mean_c2_b <= 0.0)
    throw std::invalid_argument("relaxation_decomposition: requires non-zero coherence");
  return sigma2_eq + 2.0 * mean_c4_a * mean_c4_b /
                         (mean_c2_a * mean_c2_a * mean_c2_b * mean_c2_b);
}

double c_function(double t) {
  if (t < 0.0) throw std::invalid_argument("c_function: t must be >= 0");
  const double t2 = t * t;
  return kPi * t * (3.0 * std::exp(-t2) - 0.5 * std::exp(-4.0 * t2)) +
         kPi32 * std::erf(t) * (0.5 + 3.0 * t2) +
         kPi32 * std::erf(2.0 * t) * (0.125 - 3.0 * t2);
}

namespace {

// The (z, w) double integrals behind C_1 and C_2 reduce, after trading w for
// q = z^2 + 4w and rescaling z = sqrt(q) s, to one oscillatory radial
// integral over a smooth kernel:
//
//   M_p(mu) = int dw e^-w int dz (4w/q)^p cos(mu sqrt(q))
//           = 1/2 int_0^inf r^2 cos(mu r) Phi_p(r^2/4) dr,
//   Phi_p(c) = int_-1^1 (1 - s^2)^p e^{-c (1 - s^2)} ds.
//
// sin^2 x = 1/2 - cos(2x)/2 and sin^4 x = 3/8 - cos(2x)/2 + cos(4x)/8 then
// give the moment integrals as combinations of M_p with exact DC terms
// M_1(0) = pi^{3/2} and M_2(0) = pi^{3/2}/2.

double phi_kernel(double c, int p) {
  // boundary-layer form 2 int_0^1 (u(2-u))^p e^{-c u(2-u)} du, u = 1 - s;
  // for large c the mass sits in u ~ 1/(2c), so cut the dead region away
  // instead of asking the quadrature to find the spike.
  auto f = [&](double u) {
    const double q = u * (2.0 - u);
    const double base = std::exp(-c * q);
    return (p == 1 ? q : q * q) * base;
  };
  const double u_max = c > 25.0 ? 25.0 / c : 1.0;
  return 2.0 * integrate(f, 0.0, u_max, 1e-15, 1e-11, 600).value;
}

double m_p_integral(double mu, int p, double abs_tol) {
  const double a_p = p == 1 ? kPi32 : 0.5 * kPi32;
  if (mu == 0.0) return a_p;

  const double r_max = 500.0;  // kernel tail is ~128/r^4 (p=2), ~16/r^2 (p=1)
  auto g = [&](double r) { return r * r * phi_kernel(0.25 * r * r, p); };
  auto f = [&](double r) { return g(r) * std::cos(mu * r); };

  // chunked by oscillation period; adaptivity stays local
  const double chunk = std::min(2.0 * kPi / mu, r_max / 16.0);
  double value = 0.0;
  for (double a = 0.0; a < r_max; a += chunk) {
    const double b = std::min(a + chunk, r_max);
    value += integrate(f, a, b, abs_tol * chunk / r_max, 1e-11, 4000).value;
  }
  value *= 0.5;

  // integration-by-parts tail of int_R^inf g(r) cos(mu r) dr
  if (mu > 5e-3) {
    const double h = 1e-3;
    const double g_r = g(r_max);
    const double gp_r = (g(r_max + h) - g(r_max - h)) / (2.0 * h);
    value += 0.5 * (-g_r * std::sin(mu * r_max) / mu -
                    gp_r * std::cos(mu * r_max) / (mu * mu));
  }
  return value;
}

}  // namespace

double c2_function(double t, double abs_tol) {
  if (t < 0.0) throw std::invalid_argument("c2_function: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double a2 = 0.5 * kPi32;
  return 0.375 * a2 - 0.5 * m_p_integral(t, 2, abs_tol) +
         0.125 * m_p_integral(2.0 * t, 2, abs_tol);
}

double c1_function(double t, double abs_tol) {
  if (t < 0.0) throw std::invalid_argument("c1_function: t must be >= 0");
  if (t == 0.0) return 0.0;
  return 0.5 * kPi32 - 0.5 * m_p_integral(t, 1, abs_tol);
}

double c2_function_cached(double t) {
  if (t < 0.0) throw std::invalid_argument("c2_function_cached: t must be >= 0");
  constexpr double kTMax = 6.0;
  constexpr int kPoints = 241;  // step 0.025
  static std::vector<double> grid;
  static std::once_flag once;
  std::call_once(once, [] {
    grid.resize(kPoints);
    for (int i = 0; i < kPoints; ++i)
      grid[i] = c2_function(kTMax * i / (kPoints - 1), 1e-7);
  });
  if (t >= kTMax) return 0.1875 * kPi32;  // (3/16) pi^{3/2} large-t limit
  const double h = kTMax / (kPoints - 1);
  const int i = std::min(kPoints - 2, static_cast<int>(t / h));
  const double u = t / h - i;
  // Catmull-Rom through the four surrounding nodes
  const double p0 = grid[std::max(0, i - 1)], p1 = grid[i], p2 = grid[i + 1],
               p3 = grid[std::min(kPoints - 1, i + 2)];
  return p1 + 0.5 * u *
                  (p2 - p0 +
                   u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                        u * (3.0 * (p1 - p2) + p3 - p0)));
}

double ee_mean_curve(double t, double lambda) {
  return c_function(t) * std::sqrt(lambda);
}

double ee_saturation(double lambda) { return 0.625 * kPi32 * std::sqrt(lambda); }

double ec_mean_curve(double t, double lambda, double mean_c2_b) {
  return (c_function(t) + 2.0 * mean_c2_b * c2_function_cached(t)) * std::sqrt(lambda);
}

double ec_saturation(double lambda, double mean_c2_b) {
  return (5.0 + 3.0 * mean_c2_b) / 8.0 * kPi32 * std::sqrt(lambda);
}

double weak_combined_short(double t, double lambda, double mean_c2_a, double mean_c2_b) {
  return 4.0 * kPi * t * std::sqrt(lambda) + 2.0 * mean_c2_a * mean_c2_b * t * t;
}

double crossover_time(double lambda, double mean_c2_a, double mean_c2_b) {
  const double c = mean_c2_a * mean_c2_b;
  if (c <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi * std::sqrt(lambda) / c;
}

double haar_saturation(const SubsystemDims& dims) {
  return 1.0 - 1.0 / dims.na - 1.0 / dims.nb;
}

double lubkin_purity(const SubsystemDims& dims) {
  return static_cast<double>(dims.na + dims.nb) /
         (static_cast<double>(dims.na) * dims.nb + 1.0);
}

double strong_curve(double t, double lambda, const SubsystemDims& dims) {
  const double s_inf = haar_saturation(dims);
  return s_inf * (1.0 - std::exp(-4.0 * kPi * t * std::sqrt(lambda) / s_inf));
}

double intermediate_curve(double t, double lambda, const SubsystemDims& dims) {
  const double s_inf = haar_saturation(dims);
  return s_inf * (1.0 - std::exp(-c_function(t) * std::sqrt(lambda) / s_inf));
}

double two_level_schmidt(double t, double lambda, double s, double w) {
  const double q = s * s + 4.0 * lambda * w;
  if (q == 0.0) return 0.0;
  const double amp = 4.0 * lambda * w / q;
  const double sn = std::sin(0.5 * t / std::sqrt(lambda) * std::sqrt(q));
  return amp * sn * sn;
}

double ee_trace_model(double t, double lambda,
                      const std::vector<std::pair<double, double>>& neighbors) {
  double s2 = 0.0;
  for (const auto& [s, w] : neighbors) {
    const double lam2 = two_level_schmidt(t, lambda, s, w);
    s2 += 2.0 * (lam2 - lam2 * lam2);
  }
  return s2;
}

double ee_s2bar_density(double x, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("ee_s2bar_density: lambda must be > 0");
  if (x <= 0.0 || x >= 1.0 / 3.0) return 0.0;  // two-level support

  const double root = std::sqrt(1.0 - 3.0 * x);
  const double u = (1.0 - root) / 6.0;
  const double du_dx = 1.0 / (4.0 * root);

  const double one_minus_4u = 1.0 - 4.0 * u;
  const double f = u / (lambda * one_minus_4u);
  const double pref = 2.0 / (lambda * one_minus_4u * one_minus_4u);

  auto integrand = [&](double s) {
    return pref * s * s * std::exp(-2.0 * s - f * s * s);
  };
  // integrand dies once 2s + f s^2 ~ 80
  double s_hi = 40.0;
  if (f > 0.0) s_hi = std::min(s_hi, (-2.0 + std::sqrt(4.0 + 320.0 * f)) / (2.0 * f));
  const double p_u = integrate(integrand, 0.0, s_hi, 1e-30, 1e-8, 4000).value;
  return p_u * du_dx;
}

double regularized_spacing(double s, double lambda, double x_jk, double x_jpkp, double w) {
  const double shifted = s + 2.0 * std::sqrt(lambda) * (x_jk - x_jpkp);
  const double mag = std::sqrt(shifted * shifted + 4.0 * lambda * w);
  return shifted >= 0.0 ? mag : -mag;
}

}  // namespace theory
}  // namespace rmte
