// Timing comparison of the serial reference kernels against the OpenMP
// variants, plus the end-to-end trace step. Also asserts that both variants
// agree to the last bit, since the parallel loops only split index ranges.

#include <cstdio>
#include <chrono>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rmte/dynamics.hpp"
#include "rmte/ensemble.hpp"
#include "rmte/kernels.hpp"

using namespace rmte;

namespace {

double now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    f();
    best = std::min(best, now() - t0);
  }
  return best;
}

double max_abs_diff(const RealVector& a, const RealVector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

int main(int argc, char** argv) {
  const int na = argc > 1 ? std::atoi(argv[1]) : 50;
  const int nb = argc > 2 ? std::atoi(argv[2]) : 50;
  const int m = argc > 3 ? std::atoi(argv[3]) : 512;
  const SubsystemDims dims(na, nb);
  const int n = dims.total();

#ifdef _OPENMP
  std::printf("dims (%d, %d), %d states, %d threads\n", na, nb, m, omp_get_max_threads());
#else
  std::printf("dims (%d, %d), %d states, OpenMP off\n", na, nb, m);
#endif

  RngStream rng(1234);
  Matrix states(n, m);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < n; ++r) states(r, c) = rng.cgauss();
    states.col(c).normalize();
  }
  Vector phases(n);
  for (int r = 0; r < n; ++r) phases(r) = std::polar(1.0, 2.0 * kPi * rng.uniform());

  // batched purity
  RealVector p_serial, p_omp;
  const double t_ps = time_best_of(3, [&] { p_serial = purity_batch_serial(states, na, nb); });
  const double t_pp = time_best_of(3, [&] { p_omp = purity_batch_omp(states, na, nb); });
  std::printf("purity_batch   serial %8.4fs   omp %8.4fs   speedup %4.2fx   max|d| %.1e\n",
              t_ps, t_pp, t_ps / t_pp, max_abs_diff(p_serial, p_omp));

  // row scaling
  Matrix s1, s2;
  const double t_ss = time_best_of(3, [&] { scale_rows_serial(phases, states, s1); });
  const double t_sp = time_best_of(3, [&] { scale_rows_omp(phases, states, s2); });
  std::printf("scale_rows     serial %8.4fs   omp %8.4fs   speedup %4.2fx   max|d| %.1e\n",
              t_ss, t_sp, t_ss / t_sp, (s1 - s2).cwiseAbs().maxCoeff());

  // sparse propagator application (K = 2 product states: 4 entries each)
  std::vector<int> indices;
  std::vector<Complex> coeffs;
  std::vector<int> offsets{0};
  for (int s = 0; s < m; ++s) {
    for (int e = 0; e < 4; ++e) {
      indices.push_back(static_cast<int>(rng.uniform_below(n)));
      coeffs.push_back(0.5 * rng.cgauss());
    }
    offsets.push_back(static_cast<int>(indices.size()));
  }
  Matrix prop(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) prop(r, c) = rng.cgauss() / std::sqrt(2.0 * n);
  RealVector q_serial, q_omp;
  const double t_qs = time_best_of(3, [&] {
    q_serial = sparse_apply_purity_serial(prop, indices, coeffs, offsets, na, nb);
  });
  const double t_qp = time_best_of(3, [&] {
    q_omp = sparse_apply_purity_omp(prop, indices, coeffs, offsets, na, nb);
  });
  std::printf("sparse_apply   serial %8.4fs   omp %8.4fs   speedup %4.2fx   max|d| %.1e\n",
              t_qs, t_qp, t_qs / t_qp, max_abs_diff(q_serial, q_omp));

  // one full trace step on a realization (propagator build + batch purity)
  const CouplingStrength coupling = CouplingStrength::from_lambda(1e-6, dims);
  const TransitionRealization realization = sample_realization(dims, coupling, 99);
  const double t_build0 = now();
  TraceEngine engine(realization);
  std::printf("engine build (diagonalization + overlap): %.2fs\n", now() - t_build0);
  const double t_step = time_best_of(2, [&] {
    Matrix a = engine.propagator(1000);
    RealVector purities = purity_batch_omp(a, na, nb);
    (void)purities;
  });
  std::printf("trace step (propagator + purity of all %d columns): %.3fs\n", n, t_step);

  const bool ok = max_abs_diff(p_serial, p_omp) == 0.0 && max_abs_diff(q_serial, q_omp) == 0.0;
  std::printf("%s\n", ok ? "serial and parallel kernels agree" : "MISMATCH");
  return ok ? 0 : 1;
}
