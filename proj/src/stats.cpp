#include "rmte/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace rmte {

namespace {

constexpr double kDegenerateGap = 1e-12;

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

ItaEngine::ItaEngine(const Matrix& eigenvectors, const SubsystemDims& dims, double min_gap)
    : dims_(dims), eigenvectors_(eigenvectors) {
  if (min_gap < kDegenerateGap)
    throw std::runtime_error("ItaEngine: degenerate spectrum (min circular gap " +
                             std::to_string(min_gap) + ")");
  const int n = dims.total();
  if (eigenvectors_.rows() != n || eigenvectors_.cols() != n)
    throw std::invalid_argument("ItaEngine: eigenvector matrix dimension mismatch");
  const int na = dims.na, nb = dims.nb;

  // rows of r_a / r_b are the flattened reduced density matrices
  RealMatrix gram_a, gram_b;
  {
    Matrix r_a(n, na * na);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < n; ++m) {
      RowMajorMap amp(eigenvectors_.col(m).data(), na, nb);
      Matrix rho = amp * amp.adjoint();
      r_a.row(m) = Eigen::Map<const Vector>(rho.data(), na * na).transpose();
    }
    gram_a = (r_a * r_a.adjoint()).real();
  }
  {
    Matrix r_b(n, nb * nb);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < n; ++m) {
      RowMajorMap amp(eigenvectors_.col(m).data(), na, nb);
      Matrix rho = (amp.adjoint() * amp).transpose();
      r_b.row(m) = Eigen::Map<const Vector>(rho.data(), nb * nb).transpose();
    }
    gram_b = (r_b * r_b.adjoint()).real();
  }

  purities_ = gram_a.diagonal();
  pair_kernel_ = gram_a + gram_b;
  pair_kernel_.diagonal() = purities_;
}

RealVector ItaEngine::s2bar(const Matrix& states) const {
  const int n = dims_.total();
  if (states.rows() != n) throw std::invalid_argument("ItaEngine: state dimension mismatch");
  // p = |<m|alpha>|^2 per eigenvector and state
  Matrix overlaps = eigenvectors_.adjoint() * states;
  RealMatrix p = overlaps.cwiseAbs2();
  RealMatrix q = pair_kernel_ * p;
  RealVector out(states.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index s = 0; s < states.cols(); ++s)
    out(s) = 1.0 - p.col(s).dot(q.col(s));
  return out;
}

double ItaEngine::s2bar_one(const Vector& state) const { return s2bar(state)(0); }

RealVector ItaEngine::s2bar_basis_states() const {
  const int n = dims_.total();
  RealMatrix p = eigenvectors_.cwiseAbs2();  // p(s, m) = |<m|e_s>|^2
  RealMatrix q = p * pair_kernel_;
  RealVector out(n);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < n; ++s) out(s) = 1.0 - p.row(s).dot(q.row(s));
  return out;
}

double infinite_time_avg_exact(const Vector& state0, const SpectralDecomposition& sd,
                               const SubsystemDims& dims) {
  ItaEngine engine(sd.eigenvectors, dims, sd.min_gap);
  return engine.s2bar_one(state0);
}

EmpiricalAverage infinite_time_avg_empirical(const std::function<double(long long)>& s2_at,
                                             const CouplingStrength& coupling, double t_min,
                                             double t_max, int n_samples, RngStream& rng) {
  if (coupling.lambda <= 0.0)
    throw std::invalid_argument("infinite_time_avg_empirical: requires Lambda > 0");
  if (!(t_max > t_min) || n_samples < 1)
    throw std::invalid_argument("infinite_time_avg_empirical: bad window");
  const long long n_lo = iterations_for_time(t_min, coupling);
  const long long n_hi = iterations_for_time(t_max, coupling);
  if (n_hi - n_lo + 1 < 10)
    throw std::runtime_error(
        "infinite_time_avg_empirical: window holds fewer than 10 distinct iteration counts");

  std::set<long long> counts;
  for (int i = 0; i < n_samples; ++i)
    counts.insert(n_lo + static_cast<long long>(rng.uniform_below(
                             static_cast<std::uint64_t>(n_hi - n_lo + 1))));

  double sum = 0.0, sum2 = 0.0;
  for (long long n : counts) {
    const double v = s2_at(n);
    sum += v;
    sum2 += v * v;
  }
  EmpiricalAverage out;
  out.distinct_samples = static_cast<int>(counts.size());
  out.mean = sum / out.distinct_samples;
  if (out.distinct_samples > 1) {
    const double var =
        std::max(0.0, (sum2 - sum * sum / out.distinct_samples) / (out.distinct_samples - 1));
    out.std_error = std::sqrt(var / out.distinct_samples);
  }
  return out;
}

double equilibrium_measure(const std::vector<double>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("equilibrium_measure: need at least 2 samples");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= samples.size();
  if (mean == 0.0) throw std::runtime_error("equilibrium_measure: undefined at zero mean");
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double var = ss / (samples.size() - 1);
  return var / (mean * mean);
}

namespace {

double relaxation_measure_impl(const RealMatrix& s2_window) {
  const Eigen::Index m = s2_window.cols();
  double acc = 0.0;
  for (Eigen::Index r = 0; r < s2_window.rows(); ++r) {
    const double mean = s2_window.row(r).mean();
    if (mean == 0.0) throw std::runtime_error("relaxation_measure: undefined at zero mean");
    const double ss = (s2_window.row(r).array() - mean).square().sum();
    acc += ss / (m - 1) / (mean * mean);
  }
  return acc / s2_window.rows();
}

}  // namespace

double relaxation_measure(const RealMatrix& s2_window) {
  if (s2_window.cols() < 100)
    throw std::invalid_argument("relaxation_measure: need >= 100 ensemble members");
  if (s2_window.rows() < 1)
    throw std::invalid_argument("relaxation_measure: empty window");
  return relaxation_measure_impl(s2_window);
}

double jackknife_std_error(int n_members,
                           const std::function<double(const std::vector<int>&)>& stat,
                           int groups) {
  if (n_members < 4) return 0.0;
  groups = std::min(groups, n_members);
  std::vector<double> values(groups);
  for (int g = 0; g < groups; ++g) {
    std::vector<int> keep;
    keep.reserve(n_members);
    for (int i = 0; i < n_members; ++i)
      if (i % groups != g) keep.push_back(i);
    values[g] = stat(keep);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= groups;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss * (groups - 1) / groups);
}

HistogramDensity s2bar_density(const std::vector<double>& samples, Binning binning,
                               int bins) {
  if (static_cast<int>(samples.size()) <= bins)
    throw std::invalid_argument("s2bar_density: need more samples than bins");
  HistogramDensity h;
  h.total_count = static_cast<long long>(samples.size());
  h.bin_edges.resize(bins + 1);
  h.counts.assign(bins, 0);
  h.density.assign(bins, 0.0);

  const double max_v = *std::max_element(samples.begin(), samples.end());

  if (binning == Binning::Linear) {
    const double min_v = *std::min_element(samples.begin(), samples.end());
    const double lo = min_v, hi = max_v + 1e-12 + 1e-9 * std::abs(max_v);
    for (int i = 0; i <= bins; ++i) h.bin_edges[i] = lo + (hi - lo) * i / bins;
    for (double v : samples) {
      int b = static_cast<int>((v - lo) / (hi - lo) * bins);
      b = std::clamp(b, 0, bins - 1);
      ++h.counts[b];
    }
  } else {
    constexpr double kFloor = 1e-12;
    double min_pos = max_v;
    for (double v : samples)
      if (v >= kFloor) min_pos = std::min(min_pos, v);
    const double lo = std::min(min_pos, max_v * 0.5);
    const double hi = max_v * (1.0 + 1e-9) + 1e-300;
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i <= bins; ++i)
      h.bin_edges[i] = std::exp(llo + (lhi - llo) * i / bins);
    for (double v : samples) {
      if (v < kFloor) {
        ++h.underflow_count;
        ++h.counts[0];
        continue;
      }
      int b = static_cast<int>((std::log(v) - llo) / (lhi - llo) * bins);
      b = std::clamp(b, 0, bins - 1);
      ++h.counts[b];
    }
  }

  for (int b = 0; b < bins; ++b) {
    const double width = h.bin_edges[b + 1] - h.bin_edges[b];
    h.density[b] = static_cast<double>(h.counts[b]) / (h.total_count * width);
  }
  return h;
}

EnsembleSummary summarize_ensemble(const std::vector<double>& times,
                                   const std::vector<long long>& iterations,
                                   const RealMatrix& s2_growth, const RealMatrix& s2_window,
                                   int states_per_realization, int realizations) {
  const Eigen::Index m = s2_growth.cols();
  if (s2_window.cols() != m)
    throw std::invalid_argument("summarize_ensemble: table column mismatch");

  EnsembleSummary out;
  out.states_per_realization = states_per_realization;
  out.realizations = realizations;
  out.mean_curve.times = times;
  out.mean_curve.iterations = iterations;
  out.mean_curve.mean.resize(times.size());
  out.mean_curve.std_error.resize(times.size());
  for (std::size_t r = 0; r < times.size(); ++r) {
    const double mean = s2_growth.row(r).mean();
    const double ss = (s2_growth.row(r).array() - mean).square().sum();
    out.mean_curve.mean[r] = mean;
    out.mean_curve.std_error[r] = m > 1 ? std::sqrt(ss / (m - 1) / m) : 0.0;
  }

  out.s2bar_samples.resize(m);
  for (Eigen::Index s = 0; s < m; ++s) out.s2bar_samples[s] = s2_window.col(s).mean();
  double mean = 0.0;
  for (double v : out.s2bar_samples) mean += v;
  mean /= m;
  out.s2bar_mean = mean;
  double ss = 0.0;
  for (double v : out.s2bar_samples) ss += (v - mean) * (v - mean);
  out.s2bar_std_error = m > 1 ? std::sqrt(ss / (m - 1) / m) : 0.0;

  const auto& samples = out.s2bar_samples;
  if (m >= 2 && out.s2bar_mean != 0.0) {
    out.equilibrium = equilibrium_measure(out.s2bar_samples);
    out.equilibrium_std_error =
        jackknife_std_error(static_cast<int>(m), [&](const std::vector<int>& keep) {
          std::vector<double> sub;
          sub.reserve(keep.size());
          for (int i : keep) sub.push_back(samples[i]);
          return equilibrium_measure(sub);
        });
  } else {
    out.equilibrium = std::numeric_limits<double>::quiet_NaN();
  }
  if (m >= 100) {
    out.relaxation = relaxation_measure(s2_window);
    out.relaxation_std_error =
        jackknife_std_error(static_cast<int>(m), [&](const std::vector<int>& keep) {
          RealMatrix sub(s2_window.rows(), keep.size());
          for (std::size_t i = 0; i < keep.size(); ++i) sub.col(i) = s2_window.col(keep[i]);
          return relaxation_measure_impl(sub);
        });
  } else {
    out.relaxation = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace rmte
