#include "rmte/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmte {

StateKind state_kind_from_char(char c) {
  switch (c) {
    case 'C': return StateKind::C;
    case 'R': return StateKind::R;
    case 'E': return StateKind::E;
    default: throw std::invalid_argument("state kind must be one of C, R, E");
  }
}

char to_char(StateKind k) {
  switch (k) {
    case StateKind::C: return 'C';
    case StateKind::R: return 'R';
    case StateKind::E: return 'E';
  }
  return '?';
}

void SubsystemStateSpec::validate(int subsystem_dim) const {
  if (subset.empty()) throw std::invalid_argument("state spec: empty basis subset");
  if (kind == StateKind::E && subset.size() != 1)
    throw std::invalid_argument("state spec: E kind requires K = 1");
  std::vector<int> s = subset;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= subsystem_dim)
      throw std::invalid_argument("state spec: subset index out of range");
    if (i > 0 && s[i] == s[i - 1])
      throw std::invalid_argument("state spec: subset indices must be distinct");
  }
}

std::vector<int> random_subset(int dim, int k, RngStream& rng) {
  if (k < 1 || k > dim) throw std::invalid_argument("random_subset: bad size");
  // partial Fisher-Yates over an index array
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(dim - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<int> out(idx.begin(), idx.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> lowest_subset(int k) {
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = i;
  return out;
}

SubsystemState make_subsystem_state(const SubsystemStateSpec& spec, int subsystem_dim,
                                    RngStream& rng) {
  spec.validate(subsystem_dim);
  SubsystemState st;
  st.coefficients = Vector::Zero(subsystem_dim);
  const int k = spec.k();

  switch (spec.kind) {
    case StateKind::E:
      st.coefficients(spec.subset[0]) = 1.0;
      break;
    case StateKind::C: {
      const double amp = 1.0 / std::sqrt(static_cast<double>(k));
      for (int idx : spec.subset)
        st.coefficients(idx) = std::polar(amp, 2.0 * kPi * rng.uniform());
      break;
    }
    case StateKind::R: {
      double norm2 = 0.0;
      for (int idx : spec.subset) {
        const Complex z = rng.cgauss();
        st.coefficients(idx) = z;
        norm2 += std::norm(z);
      }
      st.coefficients /= std::sqrt(norm2);
      break;
    }
  }
  return st;
}

double coherence_c2(const SubsystemState& state) {
  double sum4 = 0.0;
  for (Eigen::Index i = 0; i < state.coefficients.size(); ++i) {
    const double p = std::norm(state.coefficients(i));
    sum4 += p * p;
  }
  return 1.0 - sum4;
}

double coherence_c4(const SubsystemState& state) {
  // sum_{j != j'} |z_j|^4 |z_j'|^4 = (sum |z|^4)^2 - sum |z|^8
  double sum4 = 0.0, sum8 = 0.0;
  for (Eigen::Index i = 0; i < state.coefficients.size(); ++i) {
    const double p = std::norm(state.coefficients(i));
    sum4 += p * p;
    sum8 += p * p * p * p;
  }
  return sum4 * sum4 - sum8;
}

Vector product_state(const SubsystemState& a, const SubsystemState& b) {
  const Eigen::Index na = a.coefficients.size(), nb = b.coefficients.size();
  Vector out(na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    out.segment(i * nb, nb) = a.coefficients(i) * b.coefficients;
  return out;
}

double mean_c2(StateKind kind, int k) {
  switch (kind) {
    case StateKind::E: return 0.0;
    case StateKind::C: return 1.0 - 1.0 / k;
    case StateKind::R: return static_cast<double>(k - 1) / (k + 1);
  }
  return 0.0;
}

double mean_c4(StateKind kind, int k) {
  const double kd = k;
  switch (kind) {
    case StateKind::E: return 0.0;
    case StateKind::C: return (kd - 1.0) / (kd * kd * kd);
    case StateKind::R: return 4.0 * (kd - 1.0) / ((kd + 1.0) * (kd + 2.0) * (kd + 3.0));
  }
  return 0.0;
}

}  // namespace rmte
