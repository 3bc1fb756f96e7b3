#include "rmte/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace rmte {

double circular_min_gap(const RealVector& phases) {
  const Eigen::Index n = phases.size();
  if (n < 2) return 2.0 * kPi;
  std::vector<double> sorted(phases.data(), phases.data() + n);
  std::sort(sorted.begin(), sorted.end());
  double min_gap = 2.0 * kPi - (sorted.back() - sorted.front());
  for (Eigen::Index i = 1; i < n; ++i)
    min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
  return min_gap;
}

SpectralDecomposition decompose(const Matrix& floquet) {
  require_unitary(floquet, 1e-10, "decompose");
  const int n = static_cast<int>(floquet.rows());

  Matrix work = floquet;
  Vector w(n);
  Matrix vr(n, n);
  const int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(work.data()),
      n, reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(vr.data()), n);
  if (info != 0)
    throw std::runtime_error("decompose: zgeev failed with info " + std::to_string(info));

  SpectralDecomposition sd;
  sd.eigenphases.resize(n);
  for (int i = 0; i < n; ++i) {
    double theta = std::arg(w(i));
    if (theta < 0.0) theta += 2.0 * kPi;
    if (theta >= 2.0 * kPi) theta -= 2.0 * kPi;
    sd.eigenphases(i) = theta;
  }
  sd.eigenvectors = std::move(vr);
  sd.min_gap = circular_min_gap(sd.eigenphases);
  return sd;
}

Matrix reduced_density(const Vector& state, const SubsystemDims& dims, Subsystem which) {
  if (state.size() != dims.total())
    throw std::invalid_argument("reduced_density: state dimension mismatch");
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap amp(state.data(), dims.na, dims.nb);
  if (which == Subsystem::A) return amp * amp.adjoint();
  return (amp.adjoint() * amp).transpose();
}

SchmidtSpectrum schmidt_spectrum(const Vector& state, const SubsystemDims& dims) {
  Matrix rho_a = reduced_density(state, dims, Subsystem::A);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_a, Eigen::EigenvaluesOnly);
  RealVector lam = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -1e-12)
      throw std::runtime_error("schmidt_spectrum: negative eigenvalue beyond tolerance");
    if (lam(i) < 0.0) lam(i) = 0.0;
  }
  const double sum = lam.sum();
  if (sum > 0.0) lam /= sum;
  SchmidtSpectrum out;
  out.eigenvalues = std::move(lam);
  return out;
}

double purity(const Vector& state, const SubsystemDims& dims) {
  if (state.size() != dims.total())
    throw std::invalid_argument("purity: state dimension mismatch");
  return purity_single(state, dims.na, dims.nb);
}

double linear_entropy(const Vector& state, const SubsystemDims& dims) {
  return 1.0 - purity(state, dims);
}

long long iterations_for_time(double t, const CouplingStrength& coupling) {
  if (t < 0.0) throw std::invalid_argument("iterations_for_time: t must be >= 0");
  if (t == 0.0) return 0;
  if (coupling.lambda <= 0.0)
    throw std::invalid_argument(
        "iterations_for_time: rescaled time undefined at Lambda = 0; use iteration counts");
  return std::llround(t / (coupling.mean_spacing * std::sqrt(coupling.lambda)));
}

double time_for_iterations(long long n, const CouplingStrength& coupling) {
  return static_cast<double>(n) * coupling.mean_spacing * std::sqrt(coupling.lambda);
}

Vector evolve_iterations(const Vector& state0, const SpectralDecomposition& sd, long long n) {
  if (state0.size() != sd.dim())
    throw std::invalid_argument("evolve_iterations: state dimension mismatch");
  Vector b = sd.eigenvectors.adjoint() * state0;
  for (Eigen::Index i = 0; i < b.size(); ++i)
    b(i) *= std::polar(1.0, static_cast<double>(n) * sd.eigenphases(i));
  return sd.eigenvectors * b;
}

Vector evolve(const Vector& state0, const SpectralDecomposition& sd, double t,
              const CouplingStrength& coupling) {
  return evolve_iterations(state0, sd, iterations_for_time(t, coupling));
}

SubsystemBases subsystem_bases(const TransitionRealization& r) {
  SubsystemBases bases;
  bases.a = decompose(r.u_a);
  bases.b = decompose(r.u_b);
  return bases;
}

Vector eigen_to_computational(const Vector& state_eigen, const SubsystemBases& bases) {
  const int na = bases.a.dim(), nb = bases.b.dim();
  if (state_eigen.size() != static_cast<Eigen::Index>(na) * nb)
    throw std::invalid_argument("eigen_to_computational: dimension mismatch");
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using RowMajorMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajorMap coeff(state_eigen.data(), na, nb);
  RowMajorMat out = bases.a.eigenvectors * coeff * bases.b.eigenvectors.transpose();
  return Eigen::Map<const Vector>(out.data(), state_eigen.size());
}

EntropyTrace entropy_trace(const ProductStateSpec& spec, const TransitionRealization& r,
                           const SubsystemBases& bases, const SpectralDecomposition& sd,
                           const std::vector<double>& times, RngStream& rng) {
  if (r.coupling.lambda <= 0.0)
    throw std::invalid_argument("entropy_trace: requires Lambda > 0");

  SubsystemState sa = make_subsystem_state(spec.spec_a, r.dims.na, rng);
  SubsystemState sb = make_subsystem_state(spec.spec_b, r.dims.nb, rng);
  Vector psi_eigen = product_state(sa, sb);
  Vector psi0 = eigen_to_computational(psi_eigen, bases);

  EntropyTrace trace;
  trace.coupling = r.coupling;
  trace.rescaled_times.reserve(times.size());
  trace.iteration_counts.reserve(times.size());
  trace.s2_values.reserve(times.size());

  Vector b0 = sd.eigenvectors.adjoint() * psi0;
  for (double t : times) {
    const long long n = iterations_for_time(t, r.coupling);
    Vector b = b0;
    for (Eigen::Index i = 0; i < b.size(); ++i)
      b(i) *= std::polar(1.0, static_cast<double>(n) * sd.eigenphases(i));
    Vector psi = sd.eigenvectors * b;
    trace.rescaled_times.push_back(time_for_iterations(n, r.coupling));
    trace.iteration_counts.push_back(n);
    trace.s2_values.push_back(linear_entropy(psi, r.dims));
  }
  return trace;
}

std::vector<double> default_time_grid(double t_max, int points) {
  if (points < 4 || t_max <= 0.0) throw std::invalid_argument("default_time_grid: bad grid");
  std::vector<double> grid;
  grid.reserve(points);
  grid.push_back(0.0);
  const int n_geo = points / 3;
  const double t_lo = 0.02 * t_max / 4.0, t_mid = std::min(0.5, 0.25 * t_max);
  for (int i = 0; i < n_geo; ++i)
    grid.push_back(t_lo * std::pow(t_mid / t_lo, static_cast<double>(i) / (n_geo - 1)));
  const int n_lin = points - 1 - n_geo;
  for (int i = 1; i <= n_lin; ++i)
    grid.push_back(t_mid + (t_max - t_mid) * static_cast<double>(i) / n_lin);
  return grid;
}

// --- TraceEngine -----------------------------------------------------------

TraceEngine::TraceEngine(const TransitionRealization& r)
    : dims_(r.dims), coupling_(r.coupling), bases_(subsystem_bases(r)) {
  const int na = dims_.na, nb = dims_.nb, n = dims_.total();

  Matrix floquet = build_floquet(r);
  SpectralDecomposition sd = decompose(floquet);
  floquet.resize(0, 0);
  eigenphases_ = sd.eigenphases;
  min_gap_ = sd.min_gap;

  // G = (P_A (x) P_B)^dag V, one eigencolumn at a time through the
  // reshape identity vec^-1(G col) = P_A^dag vec^-1(V col) conj(P_B).
  const Matrix pa_adj = bases_.a.eigenvectors.adjoint();
  const Matrix pb_conj = bases_.b.eigenvectors.conjugate();
  overlap_.resize(n, n);
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using RowMajorMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
#pragma omp parallel for schedule(static)
  for (int m = 0; m < n; ++m) {
    RowMajorMap vm(sd.eigenvectors.col(m).data(), na, nb);
    RowMajorMat gm = pa_adj * vm * pb_conj;
    overlap_.col(m) = Eigen::Map<const Vector>(gm.data(), n);
  }
}

Vector TraceEngine::phase_powers(long long n) const {
  Vector ph(eigenphases_.size());
  for (Eigen::Index i = 0; i < ph.size(); ++i)
    ph(i) = std::polar(1.0, static_cast<double>(n) * eigenphases_(i));
  return ph;
}

RealMatrix TraceEngine::s2_direct(const Matrix& states_eigen,
                                  const std::vector<long long>& n_values) const {
  const Eigen::Index m = states_eigen.cols();
  RealMatrix s2(n_values.size(), m);
  Matrix b = overlap_.adjoint() * states_eigen;
  Matrix scaled, evolved;
  for (std::size_t ti = 0; ti < n_values.size(); ++ti) {
    const Vector ph = phase_powers(n_values[ti]);
    scale_rows_omp(ph, b, scaled);
    evolved.noalias() = overlap_ * scaled;
    s2.row(ti) = RealVector::Ones(m).transpose() -
                 purity_batch_omp(evolved, dims_.na, dims_.nb).transpose();
  }
  return s2;
}

Matrix TraceEngine::propagator(long long n) const {
  Matrix scaled;
  scale_rows_omp(phase_powers(n), Matrix(overlap_.adjoint()), scaled);
  return overlap_ * scaled;
}

void TraceEngine::for_each_propagator(
    const std::vector<long long>& n_values,
    const std::function<void(std::size_t, const Matrix&)>& visit) const {
  const Matrix g_adj = overlap_.adjoint();
  Matrix scaled, prop;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    scale_rows_omp(phase_powers(n_values[i]), g_adj, scaled);
    prop.noalias() = overlap_ * scaled;
    visit(i, prop);
  }
}

}  // namespace rmte
