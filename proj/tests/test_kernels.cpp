#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmte/kernels.hpp"
#include "rmte/rng.hpp"

using namespace rmte;

namespace {

Matrix random_states(int n, int m, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix out(n, m);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < n; ++r) out(r, c) = rng.cgauss();
    out.col(c).normalize();
  }
  return out;
}

}  // namespace

TEST_CASE("purity kernels: serial and OpenMP agree bitwise") {
  const int na = 6, nb = 9;
  Matrix states = random_states(na * nb, 37, 1);
  RealVector a = purity_batch_serial(states, na, nb);
  RealVector b = purity_batch_omp(states, na, nb);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  for (int s = 0; s < a.size(); ++s) {
    CHECK(a(s) <= 1.0 + 1e-12);
    CHECK(a(s) >= 1.0 / na - 1e-12);
  }
}

TEST_CASE("row scaling kernels agree") {
  RngStream rng(2);
  const int n = 48, m = 21;
  Matrix in = random_states(n, m, 3);
  Vector phases(n);
  for (int i = 0; i < n; ++i) phases(i) = std::polar(1.0, 2.0 * kPi * rng.uniform());
  Matrix a, b;
  scale_rows_serial(phases, in, a);
  scale_rows_omp(phases, in, b);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  // unit-modulus phases preserve column norms
  for (int c = 0; c < m; ++c) CHECK(a.col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sparse application kernels agree with dense evaluation") {
  const int na = 5, nb = 7, n = na * nb, m = 40;
  Matrix prop = random_states(n, n, 4);
  RngStream rng(5);
  std::vector<int> indices;
  std::vector<Complex> coeffs;
  std::vector<int> offsets{0};
  Matrix dense = Matrix::Zero(n, m);
  for (int s = 0; s < m; ++s) {
    const int nnz = 1 + static_cast<int>(rng.uniform_below(4));
    for (int e = 0; e < nnz; ++e) {
      const int idx = static_cast<int>(rng.uniform_below(n));
      const Complex z = rng.cgauss();
      indices.push_back(idx);
      coeffs.push_back(z);
      dense(idx, s) += z;
    }
    offsets.push_back(static_cast<int>(indices.size()));
  }

  RealVector serial = sparse_apply_purity_serial(prop, indices, coeffs, offsets, na, nb);
  RealVector parallel = sparse_apply_purity_omp(prop, indices, coeffs, offsets, na, nb);
  CHECK((serial - parallel).cwiseAbs().maxCoeff() == 0.0);

  Matrix evolved = prop * dense;
  RealVector reference = purity_batch_serial(evolved, na, nb);
  CHECK((serial - reference).cwiseAbs().maxCoeff() <= 1e-12);
}
