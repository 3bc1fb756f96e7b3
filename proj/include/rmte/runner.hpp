#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmte/dynamics.hpp"
#include "rmte/states.hpp"
#include "rmte/stats.hpp"
#include "rmte/types.hpp"

namespace rmte {

inline constexpr const char* kVersionTag = "0.1.0";

// ---------------------------------------------------------------------------
// Multi-cell sweep over shared realizations.
//
// Every ensemble cell (kind pair, K) at one coupling strength is evaluated on
// the same realizations, so each realization is diagonalized exactly once.
// When the combined state count justifies it, one n-step propagator per time
// point is built and shared by all cells.
// ---------------------------------------------------------------------------
struct SweepCell {
  StateKind kind_a = StateKind::C;
  StateKind kind_b = StateKind::C;
  int k_a = 1;
  int k_b = 1;
  int states_per_realization = 0;
  bool all_pairs = false;      // E (x) E: use every product eigenstate once
  bool exact_ita = false;      // also compute exact infinite-time averages
  std::string subset_mode = "random";  // "random" or "lowest"
  std::string label;
};

struct SweepRequest {
  SubsystemDims dims;
  CouplingStrength coupling;
  int realizations = 1;
  std::uint64_t master_seed = 1;
  int lambda_index = 0;
  std::vector<long long> n_values;
  std::vector<SweepCell> cells;
};

struct SweepCellResult {
  RealMatrix s2;                     // |n_values| rows x total states
  std::vector<double> s2bar_exact;   // filled when exact_ita is set
};

struct SweepOutcome {
  std::vector<SweepCellResult> cells;
  std::vector<std::uint64_t> realization_seeds;
  double smallest_gap = 0.0;
  std::vector<std::string> events;   // e.g. degenerate-spectrum resamples
};

SweepOutcome run_sweep(const SweepRequest& request);

// Iteration counts for a requested time grid (deduplicated, ascending).
std::vector<long long> iteration_grid(const std::vector<double>& times,
                                      const CouplingStrength& coupling);

// Random distinct iteration counts inside [t_min, t_max].
std::vector<long long> window_iteration_counts(double t_min, double t_max, int samples,
                                               const CouplingStrength& coupling,
                                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiment configuration and persistence.
// ---------------------------------------------------------------------------
struct TimeGridSpec {
  double t_max = 4.0;
  int points = 40;
};

struct WindowSpec {
  double t_min = 2.0;
  double t_max = 4.0;
  int samples = 24;
};

struct ExperimentConfig {
  SubsystemDims dims{50, 50};
  std::string kinds = "CC";  // subsystem A kind then B kind, of C/R/E
  std::vector<int> k_values{2};
  std::vector<double> lambda_values{1e-6};
  int states_per_realization = 100;
  int realizations = 2;
  TimeGridSpec grid;
  WindowSpec window;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  std::string subset_mode = "random";
  bool write_state_traces = true;

  void validate() const;
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json_text() const;
  std::string hash() const;  // stable under key reordering
};

struct CellReport {
  double lambda = 0.0;
  std::string kinds;
  int k = 1;
  std::string directory;
  double wall_seconds = 0.0;
  EnsembleSummary summary;
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::vector<CellReport> cells;
  std::vector<std::string> events;
};

// Full experiment: sweep every (lambda, K) cell, write traces.csv, s2bar.csv,
// summary.json, histogram.csv and overlays.csv per cell plus manifest.json.
RunManifest run_experiment(const ExperimentConfig& config);

// Theory overlay dispatch: regime chosen from lambda and the state kinds.
std::string regime_for(double lambda, const std::string& kinds);
double overlay_value(double t, double lambda, const std::string& kinds, int k,
                     const SubsystemDims& dims);

}  // namespace rmte
