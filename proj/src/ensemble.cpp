#include "rmte/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace rmte {

Matrix sample_haar_unitary(int dim, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim must be >= 1");

  Matrix z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) z(i, j) = rng.cgauss();

  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();

  // Fix the gauge: multiply column j by the phase of R_jj so the
  // distribution is exactly Haar, not just QR of a Ginibre matrix.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

double lambda_from_epsilon(double epsilon, const SubsystemDims& dims) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("lambda_from_epsilon: epsilon must be finite and >= 0");
  const double na = dims.na, nb = dims.nb;
  const double pref = na * na * nb * nb / (4.0 * kPi * kPi * (na + 1.0) * (nb + 1.0));
  const double x = kPi * epsilon;
  double bracket;  // 1 - sin^2(x)/x^2
  if (x < 1e-3) {
    const double x2 = x * x;
    bracket = x2 / 3.0 - 2.0 * x2 * x2 / 45.0 + x2 * x2 * x2 / 315.0;
  } else {
    const double s = std::sin(x) / x;
    bracket = 1.0 - s * s;
  }
  return pref * bracket;
}

double lambda_supremum(const SubsystemDims& dims) {
  // sin(pi)/pi = 0, so the bracket equals 1 at epsilon = 1 and the exact map
  // is monotone on [0, 1].
  return lambda_from_epsilon(1.0, dims);
}

double epsilon_from_lambda(double lambda, const SubsystemDims& dims) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("epsilon_from_lambda: lambda must be finite and >= 0");
  if (lambda == 0.0) return 0.0;
  const double sup = lambda_supremum(dims);
  if (lambda > sup)
    throw std::out_of_range("epsilon_from_lambda: lambda " + std::to_string(lambda) +
                            " above achievable supremum " + std::to_string(sup) +
                            " for these dims");

  double lo = 0.0, hi = 1.0;
  // bisection; the map is monotone increasing on [0, 1]
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lambda_from_epsilon(mid, dims) < lambda)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * hi) break;
  }
  const double eps = 0.5 * (lo + hi);
  const double check = lambda_from_epsilon(eps, dims);
  if (std::abs(check - lambda) > 1e-9 * lambda + 1e-300)
    throw std::runtime_error("epsilon_from_lambda: inversion did not converge");
  return eps;
}

CouplingStrength CouplingStrength::from_epsilon(double epsilon, const SubsystemDims& dims) {
  CouplingStrength c;
  c.epsilon = epsilon;
  c.lambda = lambda_from_epsilon(epsilon, dims);
  c.mean_spacing = dims.mean_spacing();
  return c;
}

CouplingStrength CouplingStrength::from_lambda(double lambda, const SubsystemDims& dims) {
  CouplingStrength c;
  c.epsilon = epsilon_from_lambda(lambda, dims);
  c.lambda = lambda;
  c.mean_spacing = dims.mean_spacing();
  return c;
}

TransitionRealization sample_realization(const SubsystemDims& dims,
                                         const CouplingStrength& coupling,
                                         std::uint64_t seed_tag) {
  RngStream rng(seed_tag);
  TransitionRealization r;
  r.dims = dims;
  r.u_a = sample_haar_unitary(dims.na, rng);
  r.u_b = sample_haar_unitary(dims.nb, rng);
  r.phases.xi.resize(dims.na, dims.nb);
  for (int a = 0; a < dims.na; ++a)
    for (int b = 0; b < dims.nb; ++b) r.phases.xi(a, b) = rng.uniform_half_open();
  r.coupling = coupling;
  r.seed_tag = seed_tag;
  return r;
}

Matrix kron_product(const Matrix& a, const Matrix& b) {
  const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Matrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Matrix build_floquet(const TransitionRealization& r) {
  const int na = r.dims.na, nb = r.dims.nb;
  Matrix u = kron_product(r.u_a, r.u_b);
  // right-multiply by diag(e^{i 2 pi eps xi_ab}): scale column (a, b)
  const double eps = r.coupling.epsilon;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      const Complex phase = std::polar(1.0, 2.0 * kPi * eps * r.phases.xi(a, b));
      u.col(static_cast<Eigen::Index>(a) * nb + b) *= phase;
    }
  return u;
}

}  // namespace rmte
