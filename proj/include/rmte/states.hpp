#pragma once

#include <vector>

#include "rmte/rng.hpp"
#include "rmte/types.hpp"

namespace rmte {

enum class StateKind { C, R, E };

StateKind state_kind_from_char(char c);
char to_char(StateKind k);

// Recipe for one subsystem factor: which eigenbasis subset B' it lives on
// and how the coefficients are drawn.
struct SubsystemStateSpec {
  StateKind kind = StateKind::E;
  std::vector<int> subset;  // distinct eigenstate indices, size K (K = 1 for E)

  int k() const { return static_cast<int>(subset.size()); }
  void validate(int subsystem_dim) const;
};

// Draw a random size-k subset of [0, dim). Sorted for reproducibility.
std::vector<int> random_subset(int dim, int k, RngStream& rng);
std::vector<int> lowest_subset(int k);

// Coefficients over the full subsystem eigenbasis (zeros off the subset).
struct SubsystemState {
  Vector coefficients;
};

struct ProductStateSpec {
  SubsystemStateSpec spec_a;
  SubsystemStateSpec spec_b;
};

// C: equal moduli 1/sqrt(K) with i.i.d. uniform phases.
// R: Haar-random unit vector on the K-dim subspace.
// E: indicator on the single chosen index.
SubsystemState make_subsystem_state(const SubsystemStateSpec& spec, int subsystem_dim,
                                    RngStream& rng);

// 2-coherence c^(2) = 1 - sum |z|^4 of a normalized pure state.
double coherence_c2(const SubsystemState& state);

// l4-based measure c^(4) = sum_{j != j'} |z_j|^4 |z_j'|^4.
double coherence_c4(const SubsystemState& state);

// Kronecker product in the (a, b) row-major ordering.
Vector product_state(const SubsystemState& a, const SubsystemState& b);

// Ensemble means of the coherence measures for C/R kinds on K basis states.
double mean_c2(StateKind kind, int k);
double mean_c4(StateKind kind, int k);

}  // namespace rmte
