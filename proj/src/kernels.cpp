#include "rmte/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmte {

namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

inline double column_purity(const Complex* data, int na, int nb) {
  RowMajorMap amp(data, na, nb);
  // purity = ||A A^dag||_F^2; A A^dag is na x na, na <= nb
  Matrix rho = amp * amp.adjoint();
  return rho.squaredNorm();
}

}  // namespace

double purity_single(const Vector& state, int na, int nb) {
  return column_purity(state.data(), na, nb);
}

RealVector purity_batch_serial(const Matrix& states, int na, int nb) {
  const Eigen::Index m = states.cols();
  RealVector out(m);
  for (Eigen::Index s = 0; s < m; ++s)
    out(s) = column_purity(states.col(s).data(), na, nb);
  return out;
}

RealVector purity_batch_omp(const Matrix& states, int na, int nb) {
  const Eigen::Index m = states.cols();
  RealVector out(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index s = 0; s < m; ++s)
    out(s) = column_purity(states.col(s).data(), na, nb);
  return out;
}

void scale_rows_serial(const Vector& phases, const Matrix& in, Matrix& out) {
  out.resize(in.rows(), in.cols());
  for (Eigen::Index c = 0; c < in.cols(); ++c)
    out.col(c) = phases.cwiseProduct(in.col(c));
}

void scale_rows_omp(const Vector& phases, const Matrix& in, Matrix& out) {
  out.resize(in.rows(), in.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < in.cols(); ++c)
    out.col(c) = phases.cwiseProduct(in.col(c));
}

namespace {

inline double sparse_one(const Matrix& propagator, const std::vector<int>& indices,
                         const std::vector<Complex>& coeffs, int begin, int end, int na,
                         int nb, Vector& work) {
  work.setZero();
  for (int e = begin; e < end; ++e)
    work.noalias() += coeffs[e] * propagator.col(indices[e]);
  return column_purity(work.data(), na, nb);
}

}  // namespace

RealVector sparse_apply_purity_serial(const Matrix& propagator,
                                      const std::vector<int>& indices,
                                      const std::vector<Complex>& coeffs,
                                      const std::vector<int>& offsets, int na, int nb) {
  const int m = static_cast<int>(offsets.size()) - 1;
  RealVector out(m);
  Vector work(propagator.rows());
  for (int s = 0; s < m; ++s)
    out(s) = sparse_one(propagator, indices, coeffs, offsets[s], offsets[s + 1], na, nb, work);
  return out;
}

RealVector sparse_apply_purity_omp(const Matrix& propagator,
                                   const std::vector<int>& indices,
                                   const std::vector<Complex>& coeffs,
                                   const std::vector<int>& offsets, int na, int nb) {
  const int m = static_cast<int>(offsets.size()) - 1;
  RealVector out(m);
#pragma omp parallel
  {
    Vector work(propagator.rows());
#pragma omp for schedule(static)
    for (int s = 0; s < m; ++s)
      out(s) =
          sparse_one(propagator, indices, coeffs, offsets[s], offsets[s + 1], na, nb, work);
  }
  return out;
}

}  // namespace rmte
