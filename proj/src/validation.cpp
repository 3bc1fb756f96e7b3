#include "rmte/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmte/ensemble.hpp"
#include "rmte/rng.hpp"

namespace rmte {

namespace {

// V_{jk,j'k'} = sum_ab conj(uA_aj) uA_aj' conj(uB_bk) uB_bk' (2 pi xi_ab)
Complex v_matrix_element(const Matrix& u_a, const Matrix& u_b, const RealMatrix& xi, int j,
                         int jp, int k, int kp) {
  const int na = static_cast<int>(u_a.rows()), nb = static_cast<int>(u_b.rows());
  Complex out(0.0, 0.0);
  for (int a = 0; a < na; ++a) {
    const Complex va = std::conj(u_a(a, j)) * u_a(a, jp);
    Complex inner(0.0, 0.0);
    for (int b = 0; b < nb; ++b)
      inner += std::conj(u_b(b, k)) * u_b(b, kp) * xi(a, b);
    out += va * inner;
  }
  return 2.0 * kPi * out;
}

struct VSampler {
  SubsystemDims dims;
  std::uint64_t seed;

  // draws one fresh realization and returns the requested element
  template <class F>
  void run(long long n_samples, F&& per_sample) const {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < n_samples; ++i) {
      RngStream rng(derive_seed({seed, static_cast<std::uint64_t>(i)}));
      Matrix u_a = sample_haar_unitary(dims.na, rng);
      Matrix u_b = sample_haar_unitary(dims.nb, rng);
      RealMatrix xi(dims.na, dims.nb);
      for (int a = 0; a < dims.na; ++a)
        for (int b = 0; b < dims.nb; ++b) xi(a, b) = rng.uniform_half_open();
      per_sample(i, u_a, u_b, xi);
    }
  }
};

MomentReport report_from_samples(const std::string& name, double analytic,
                                 const std::vector<double>& values) {
  MomentReport r;
  r.quantity = name;
  r.analytic = analytic;
  r.n_samples = static_cast<long long>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;  // ordered merge, deterministic
  const double mean = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  r.monte_carlo = mean;
  r.std_error = std::sqrt(ss / (values.size() - 1) / values.size());
  return r;
}

}  // namespace

MomentReport v_element_variance(const SubsystemDims& dims, PairType pair_type,
                                long long n_samples, std::uint64_t seed) {
  if (n_samples < 1000)
    throw std::invalid_argument("v_element_variance: need at least 1e3 samples");
  int j = 0, jp = 1, k = 0, kp = 1;
  std::string name = "var(V) both off-diagonal";
  int delta_j = 0, delta_k = 0;
  switch (pair_type) {
    case PairType::BothOff: break;
    case PairType::JEqual: jp = 0; delta_j = 1; name = "var(V) j = j'"; break;
    case PairType::KEqual: kp = 0; delta_k = 1; name = "var(V) k = k'"; break;
    case PairType::Diagonal: jp = 0; kp = 0; delta_j = delta_k = 1; name = "var(V) diagonal"; break;
  }
  const double analytic = kPi * kPi * (1.0 + delta_j) * (1.0 + delta_k) /
                          (3.0 * (dims.na + 1.0) * (dims.nb + 1.0));

  std::vector<double> values(n_samples);
  VSampler sampler{dims, seed};
  sampler.run(n_samples, [&](long long i, const Matrix& u_a, const Matrix& u_b,
                             const RealMatrix& xi) {
    values[i] = std::norm(v_matrix_element(u_a, u_b, xi, j, jp, k, kp));
  });
  return report_from_samples(name, analytic, values);
}

std::vector<MomentReport> diag_covariance(const SubsystemDims& dims, long long n_samples,
                                          std::uint64_t seed) {
  if (n_samples < 1000)
    throw std::invalid_argument("diag_covariance: need at least 1e3 samples");
  // x_jk = V_jk,jk / sqrt(<V_diag^2>), diagonal elements are real
  const double scale =
      std::sqrt(4.0 * kPi * kPi / (3.0 * (dims.na + 1.0) * (dims.nb + 1.0)));

  // products for (j,k) pairs: self, j=j' k!=k', j!=j' k=k', both different
  std::vector<double> self(n_samples), jj(n_samples), kk(n_samples), off(n_samples);
  VSampler sampler{dims, seed};
  sampler.run(n_samples, [&](long long i, const Matrix& u_a, const Matrix& u_b,
                             const RealMatrix& xi) {
    const double x00 = v_matrix_element(u_a, u_b, xi, 0, 0, 0, 0).real() / scale;
    const double x01 = v_matrix_element(u_a, u_b, xi, 0, 0, 1, 1).real() / scale;
    const double x10 = v_matrix_element(u_a, u_b, xi, 1, 1, 0, 0).real() / scale;
    const double x11 = v_matrix_element(u_a, u_b, xi, 1, 1, 1, 1).real() / scale;
    self[i] = x00 * x00;
    jj[i] = x00 * x01;
    kk[i] = x00 * x10;
    off[i] = x00 * x11;
  });

  std::vector<MomentReport> out;
  out.push_back(report_from_samples("<x x> j=j', k=k'", 1.0, self));
  out.push_back(report_from_samples("<x x'> j=j', k!=k'", 0.5, jj));
  out.push_back(report_from_samples("<x x'> j!=j', k=k'", 0.5, kk));
  out.push_back(report_from_samples("<x x'> j!=j', k!=k'", 0.25, off));
  return out;
}

std::vector<MomentReport> haar_moments(int n, long long n_samples, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("haar_moments: n must be >= 1");
  const double nd = n;
  const double m4 = 2.0 / (nd * (nd + 1.0));
  const double m22 = 1.0 / (nd * (nd + 1.0));
  const double m8 = 24.0 / (nd * (nd + 1.0) * (nd + 2.0) * (nd + 3.0));
  const double m44 = 4.0 / (nd * (nd + 1.0) * (nd + 2.0) * (nd + 3.0));

  std::vector<double> v4(n_samples), v22, v8(n_samples), v44;
  if (n > 1) {
    v22.resize(n_samples);
    v44.resize(n_samples);
  }
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < n_samples; ++i) {
    RngStream rng(derive_seed({seed, 0xabc0ull, static_cast<std::uint64_t>(i)}));
    Matrix u = sample_haar_unitary(n, rng);
    const double p0 = std::norm(u(0, 0));
    v4[i] = p0 * p0;
    v8[i] = p0 * p0 * p0 * p0;
    if (n > 1) {
      const double p1 = std::norm(u(1, 0));
      v22[i] = p0 * p1;
      v44[i] = p0 * p0 * p1 * p1;
    }
  }

  std::vector<MomentReport> out;
  out.push_back(report_from_samples("<|z|^4>", m4, v4));
  if (n > 1) out.push_back(report_from_samples("<|z_i|^2 |z_j|^2>", m22, v22));
  out.push_back(report_from_samples("<|z|^8>", m8, v8));
  if (n > 1) out.push_back(report_from_samples("<|z_i|^4 |z_j|^4>", m44, v44));
  return out;
}

ExponentialCheck off_diagonal_exponential_check(const SubsystemDims& dims,
                                                long long n_samples, std::uint64_t seed) {
  if (n_samples < 10000)
    throw std::invalid_argument("off_diagonal_exponential_check: need at least 1e4 samples");
  const double mean_v2 =
      kPi * kPi / (3.0 * (dims.na + 1.0) * (dims.nb + 1.0));

  std::vector<double> w(n_samples);
  VSampler sampler{dims, seed};
  sampler.run(n_samples, [&](long long i, const Matrix& u_a, const Matrix& u_b,
                             const RealMatrix& xi) {
    w[i] = std::norm(v_matrix_element(u_a, u_b, xi, 0, 1, 0, 1)) / mean_v2;
  });

  ExponentialCheck out;
  out.n_samples = n_samples;
  out.mean_report = report_from_samples("mean(w)", 1.0, w);
  std::vector<double> centered_sq(n_samples);
  const double mean_w = out.mean_report.monte_carlo;
  for (long long i = 0; i < n_samples; ++i)
    centered_sq[i] = (w[i] - mean_w) * (w[i] - mean_w);
  out.var_report = report_from_samples("var(w)", 1.0, centered_sq);

  std::sort(w.begin(), w.end());
  double ks = 0.0;
  for (long long i = 0; i < n_samples; ++i) {
    const double cdf = 1.0 - std::exp(-w[i]);
    const double lo = static_cast<double>(i) / n_samples;
    const double hi = static_cast<double>(i + 1) / n_samples;
    ks = std::max({ks, std::abs(cdf - lo), std::abs(cdf - hi)});
  }
  out.ks_statistic = ks;
  out.ks_threshold_95 = 1.36 / std::sqrt(static_cast<double>(n_samples));
  return out;
}

}  // namespace rmte
