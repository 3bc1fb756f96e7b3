#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rmte {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Bipartite Hilbert space dimensions, convention n_a <= n_b.
struct SubsystemDims {
  int na = 0;
  int nb = 0;

  SubsystemDims() = default;
  SubsystemDims(int a, int b) : na(a), nb(b) {
    if (na < 2 || nb < 2)
      throw std::invalid_argument("SubsystemDims: subsystem dims must be >= 2");
    if (na > nb)
      throw std::invalid_argument("SubsystemDims: require n_a <= n_b");
  }

  int total() const { return na * nb; }

  // Uniform quasi-energy mean level spacing of the coupled spectrum.
  double mean_spacing() const { return 2.0 * kPi / total(); }
};

// Largest entry of |U^dag U - 1|; zero for an exactly unitary matrix.
inline double unitarity_defect(const Matrix& u) {
  const auto n = u.cols();
  Matrix g = u.adjoint() * u;
  g -= Matrix::Identity(n, n);
  return g.cwiseAbs().maxCoeff();
}

inline void require_unitary(const Matrix& u, double tol, const char* what) {
  if (u.rows() != u.cols())
    throw std::invalid_argument(std::string(what) + ": matrix not square");
  const double defect = unitarity_defect(u);
  if (!(defect <= tol))
    throw std::invalid_argument(std::string(what) + ": matrix not unitary, defect " +
                                std::to_string(defect));
}

}  // namespace rmte
