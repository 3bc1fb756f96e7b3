#include "rmte/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rmte/ensemble.hpp"
#include "rmte/kernels.hpp"
#include "rmte/theory.hpp"

namespace rmte {

namespace {

using nlohmann::json;

double wall_now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// states of one cell on one realization, in product eigenbasis coordinates
struct CellStates {
  std::vector<int> indices;      // CSR over (a, b) -> a*nb + b
  std::vector<Complex> coeffs;
  std::vector<int> offsets{0};
  Matrix dense;                  // used instead of CSR for nearly full states
  bool is_dense = false;
  int count = 0;
};

std::vector<int> pick_subset(StateKind kind, int k, int dim, const std::string& mode,
                             RngStream& rng) {
  if (kind == StateKind::E) return {static_cast<int>(rng.uniform_below(dim))};
  if (mode == "lowest") return lowest_subset(k);
  return random_subset(dim, k, rng);
}

CellStates build_cell_states(const SweepCell& cell, const SubsystemDims& dims,
                             std::uint64_t master_seed, int lambda_index, int realization,
                             int cell_index) {
  const int total = dims.total();
  CellStates out;
  if (cell.all_pairs) {
    out.count = total;
    return out;  // evolved basis columns come straight from the propagator
  }

  const int m = cell.states_per_realization;
  out.count = m;
  const int nnz_per_state = cell.k_a * cell.k_b;
  out.is_dense = nnz_per_state * 4 >= total;
  if (out.is_dense) out.dense = Matrix::Zero(total, m);

  for (int s = 0; s < m; ++s) {
    RngStream rng(derive_seed({master_seed, 0x57a7e5ull,
                               static_cast<std::uint64_t>(lambda_index),
                               static_cast<std::uint64_t>(realization),
                               static_cast<std::uint64_t>(cell_index),
                               static_cast<std::uint64_t>(s)}));
    SubsystemStateSpec spec_a{cell.kind_a,
                              pick_subset(cell.kind_a, cell.k_a, dims.na, cell.subset_mode, rng)};
    SubsystemStateSpec spec_b{cell.kind_b,
                              pick_subset(cell.kind_b, cell.k_b, dims.nb, cell.subset_mode, rng)};
    SubsystemState sa = make_subsystem_state(spec_a, dims.na, rng);
    SubsystemState sb = make_subsystem_state(spec_b, dims.nb, rng);
    if (out.is_dense) {
      out.dense.col(s) = product_state(sa, sb);
    } else {
      for (int j : spec_a.subset)
        for (int k : spec_b.subset) {
          out.indices.push_back(j * dims.nb + k);
          out.coeffs.push_back(sa.coefficients(j) * sb.coefficients(k));
        }
      out.offsets.push_back(static_cast<int>(out.indices.size()));
    }
  }
  return out;
}

Matrix densify(const CellStates& states, int total) {
  if (states.is_dense) return states.dense;
  Matrix out = Matrix::Zero(total, states.count);
  for (int s = 0; s < states.count; ++s)
    for (int e = states.offsets[s]; e < states.offsets[s + 1]; ++e)
      out(states.indices[e], s) = states.coeffs[e];
  return out;
}

}  // namespace

std::vector<long long> iteration_grid(const std::vector<double>& times,
                                      const CouplingStrength& coupling) {
  std::vector<long long> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(iterations_for_time(t, coupling));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<long long> window_iteration_counts(double t_min, double t_max, int samples,
                                               const CouplingStrength& coupling,
                                               std::uint64_t seed) {
  const long long n_lo = iterations_for_time(t_min, coupling);
  const long long n_hi = iterations_for_time(t_max, coupling);
  if (n_hi - n_lo + 1 < 10)
    throw std::runtime_error("window_iteration_counts: window has fewer than 10 counts");
  RngStream rng(seed);
  std::set<long long> counts;
  int guard = 0;
  while (static_cast<int>(counts.size()) < samples && guard++ < 100 * samples)
    counts.insert(n_lo + static_cast<long long>(
                             rng.uniform_below(static_cast<std::uint64_t>(n_hi - n_lo + 1))));
  return {counts.begin(), counts.end()};
}

SweepOutcome run_sweep(const SweepRequest& request) {
  const int total = request.dims.total();
  const std::size_t n_times = request.n_values.size();
  SweepOutcome out;
  out.smallest_gap = 2.0 * kPi;
  out.cells.resize(request.cells.size());

  int total_states_per_real = 0;
  bool any_all_pairs = false;
  for (std::size_t c = 0; c < request.cells.size(); ++c) {
    const auto& cell = request.cells[c];
    const int m_real = cell.all_pairs ? total : cell.states_per_realization;
    total_states_per_real += m_real;
    any_all_pairs |= cell.all_pairs;
    out.cells[c].s2.resize(n_times, static_cast<Eigen::Index>(m_real) * request.realizations);
    if (cell.exact_ita)
      out.cells[c].s2bar_exact.reserve(static_cast<std::size_t>(m_real) * request.realizations);
  }
  const bool propagator_route = any_all_pairs || total_states_per_real >= total / 2;

  for (int ri = 0; ri < request.realizations; ++ri) {
    // resample on (measure-zero) degenerate spectra
    TransitionRealization realization;
    std::unique_ptr<TraceEngine> engine;
    for (std::uint64_t attempt = 0;; ++attempt) {
      const std::uint64_t seed =
          derive_seed({request.master_seed, 0x7ea11ull,
                       static_cast<std::uint64_t>(request.lambda_index),
                       static_cast<std::uint64_t>(ri), attempt});
      realization = sample_realization(request.dims, request.coupling, seed);
      engine = std::make_unique<TraceEngine>(realization);
      if (engine->min_gap() >= 1e-12) {
        out.realization_seeds.push_back(seed);
        break;
      }
      out.events.push_back("degenerate spectrum at realization " + std::to_string(ri) +
                           ", attempt " + std::to_string(attempt) + "; resampled");
    }
    out.smallest_gap = std::min(out.smallest_gap, engine->min_gap());

    std::vector<CellStates> states(request.cells.size());
    for (std::size_t c = 0; c < request.cells.size(); ++c)
      states[c] = build_cell_states(request.cells[c], request.dims, request.master_seed,
                                    request.lambda_index, ri, static_cast<int>(c));

    // exact infinite-time averages (Gram engine) before the trace loop so the
    // transient memory does not overlap the propagator buffers
    bool any_ita = false;
    for (const auto& cell : request.cells) any_ita |= cell.exact_ita;
    if (any_ita) {
      ItaEngine ita(engine->overlap(), request.dims, engine->min_gap());
      for (std::size_t c = 0; c < request.cells.size(); ++c) {
        if (!request.cells[c].exact_ita) continue;
        RealVector vals;
        if (request.cells[c].all_pairs)
          vals = ita.s2bar_basis_states();
        else
          vals = ita.s2bar(densify(states[c], total));
        auto& dst = out.cells[c].s2bar_exact;
        dst.insert(dst.end(), vals.data(), vals.data() + vals.size());
      }
    }

    if (propagator_route) {
      engine->for_each_propagator(request.n_values, [&](std::size_t ti, const Matrix& prop) {
        for (std::size_t c = 0; c < request.cells.size(); ++c) {
          const auto& cell_states = states[c];
          const Eigen::Index col0 =
              static_cast<Eigen::Index>(cell_states.count) * ri;
          RealVector purities;
          if (request.cells[c].all_pairs) {
            purities = purity_batch_omp(prop, request.dims.na, request.dims.nb);
          } else if (cell_states.is_dense) {
            Matrix evolved = prop * cell_states.dense;
            purities = purity_batch_omp(evolved, request.dims.na, request.dims.nb);
          } else {
            purities = sparse_apply_purity_omp(prop, cell_states.indices, cell_states.coeffs,
                                               cell_states.offsets, request.dims.na,
                                               request.dims.nb);
          }
          out.cells[c].s2.block(ti, col0, 1, purities.size()) =
              RealVector::Ones(purities.size()).transpose() - purities.transpose();
        }
      });
    } else {
      for (std::size_t c = 0; c < request.cells.size(); ++c) {
        Matrix dense = densify(states[c], total);
        RealMatrix s2 = engine->s2_direct(dense, request.n_values);
        const Eigen::Index col0 = static_cast<Eigen::Index>(states[c].count) * ri;
        out.cells[c].s2.block(0, col0, n_times, states[c].count) = s2;
      }
    }
  }
  return out;
}

// --- configuration ----------------------------------------------------------

void ExperimentConfig::validate() const {
  if (kinds.size() != 2 || kinds.find_first_not_of("CRE") != std::string::npos)
    throw std::invalid_argument("config: kinds must be two of C/R/E");
  if (k_values.empty()) throw std::invalid_argument("config: k_values empty");
  for (int k : k_values)
    if (k < 1 || k > std::min(dims.na, dims.nb))
      throw std::invalid_argument("config: K out of range");
  for (double l : lambda_values)
    if (!(l >= 0.0)) throw std::invalid_argument("config: lambda must be >= 0");
  if (states_per_realization < 1 || realizations < 1)
    throw std::invalid_argument("config: counts must be >= 1");
  if (!(grid.t_max > 0.0) || grid.points < 4)
    throw std::invalid_argument("config: bad time grid");
  if (!(window.t_max > window.t_min) || window.samples < 1)
    throw std::invalid_argument("config: bad window");
  if (subset_mode != "random" && subset_mode != "lowest")
    throw std::invalid_argument("config: subset_mode must be random or lowest");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  c.dims = SubsystemDims(j.at("dims").at("na").get<int>(), j.at("dims").at("nb").get<int>());
  c.kinds = j.at("kinds").get<std::string>();
  c.k_values = j.at("k_values").get<std::vector<int>>();
  c.lambda_values = j.at("lambda_values").get<std::vector<double>>();
  c.states_per_realization = j.at("states_per_realization").get<int>();
  c.realizations = j.at("realizations").get<int>();
  if (j.contains("time_grid")) {
    c.grid.t_max = j["time_grid"].value("t_max", 4.0);
    c.grid.points = j["time_grid"].value("points", 40);
  }
  if (j.contains("window")) {
    c.window.t_min = j["window"].value("t_min", 2.0);
    c.window.t_max = j["window"].value("t_max", 4.0);
    c.window.samples = j["window"].value("samples", 24);
  }
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.output_dir = j.value("output_dir", "out");
  c.subset_mode = j.value("subset_mode", "random");
  c.write_state_traces = j.value("write_state_traces", true);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["dims"] = {{"na", dims.na}, {"nb", dims.nb}};
  j["kinds"] = kinds;
  j["k_values"] = k_values;
  j["lambda_values"] = lambda_values;
  j["states_per_realization"] = states_per_realization;
  j["realizations"] = realizations;
  j["time_grid"] = {{"t_max", grid.t_max}, {"points", grid.points}};
  j["window"] = {{"t_min", window.t_min}, {"t_max", window.t_max}, {"samples", window.samples}};
  j["master_seed"] = master_seed;
  j["output_dir"] = output_dir;
  j["subset_mode"] = subset_mode;
  j["write_state_traces"] = write_state_traces;
  return j.dump(2);
}

std::string ExperimentConfig::hash() const {
  // nlohmann::json keeps object keys sorted, so the dump is canonical
  const std::string text = to_json_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- overlays ---------------------------------------------------------------

std::string regime_for(double lambda, const std::string& kinds) {
  const bool has_e = kinds.find('E') != std::string::npos;
  if (lambda > 1.0) return "strong";
  if (lambda >= 1e-2) return "intermediate";
  if (has_e) return kinds == "EE" ? "weak_EE" : "weak_EC";
  return lambda <= 1e-5 ? "ultraweak" : "weak_combined";
}

double overlay_value(double t, double lambda, const std::string& kinds, int k,
                     const SubsystemDims& dims) {
  const std::string regime = regime_for(lambda, kinds);
  if (regime == "strong") return theory::strong_curve(t, lambda, dims);
  if (regime == "intermediate") return theory::intermediate_curve(t, lambda, dims);
  if (regime == "weak_EE") return theory::ee_mean_curve(t, lambda);
  if (regime == "weak_EC") {
    const char coherent = kinds[0] == 'E' ? kinds[1] : kinds[0];
    return theory::ec_mean_curve(t, lambda, mean_c2(state_kind_from_char(coherent), k));
  }
  const double c2a = mean_c2(state_kind_from_char(kinds[0]), k);
  const double c2b = mean_c2(state_kind_from_char(kinds[1]), k);
  return theory::ultraweak_curve(t, c2a, c2b);
}

// --- experiment driver ------------------------------------------------------

namespace {

std::string cell_directory(const std::string& root, double lambda, const std::string& kinds,
                           int k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "lam%g_%s_K%d", lambda, kinds.c_str(), k);
  return root + "/" + buf;
}

void write_csv_header(std::ofstream& out, const std::string& header) {
  out << header << "\n";
}

void write_summary_json(const std::string& path, const ExperimentConfig& config,
                        double lambda, int k, const EnsembleSummary& summary,
                        const std::vector<long long>& window_counts,
                        std::uint64_t first_seed) {
  json j;
  j["lambda"] = lambda;
  j["epsilon"] = epsilon_from_lambda(lambda, config.dims);
  j["kinds"] = config.kinds;
  j["k"] = k;
  j["dims"] = {{"na", config.dims.na}, {"nb", config.dims.nb}};
  j["states_per_realization"] = summary.states_per_realization;
  j["realizations"] = summary.realizations;
  j["mean_curve"] = {{"t", summary.mean_curve.times},
                     {"n", summary.mean_curve.iterations},
                     {"s2", summary.mean_curve.mean},
                     {"sem", summary.mean_curve.std_error}};
  j["s2bar_mean"] = summary.s2bar_mean;
  j["s2bar_sem"] = summary.s2bar_std_error;
  j["equilibrium_measure"] = {{"value", summary.equilibrium},
                              {"std_error", summary.equilibrium_std_error}};
  j["relaxation_measure"] = {{"value", summary.relaxation},
                             {"std_error", summary.relaxation_std_error}};
  j["window"] = {{"t_min", config.window.t_min},
                 {"t_max", config.window.t_max},
                 {"n_values", window_counts}};
  j["first_realization_seed"] = first_seed;
  j["version"] = kVersionTag;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  {  // fail before compute if the destination is not writable
    std::ofstream probe(config.output_dir + "/.write_probe");
    if (!probe) throw std::runtime_error("run_experiment: output dir not writable");
  }
  fs::remove(config.output_dir + "/.write_probe");

  RunManifest manifest;
  manifest.config_hash = config.hash();
  manifest.version = kVersionTag;

  const std::vector<double> grid_times = default_time_grid(config.grid.t_max, config.grid.points);

  for (std::size_t li = 0; li < config.lambda_values.size(); ++li) {
    const double lambda = config.lambda_values[li];
    const CouplingStrength coupling = CouplingStrength::from_lambda(lambda, config.dims);

    const std::vector<long long> growth = iteration_grid(grid_times, coupling);
    const std::vector<long long> window = window_iteration_counts(
        config.window.t_min, config.window.t_max, config.window.samples, coupling,
        derive_seed({config.master_seed, 0x817d0ull, static_cast<std::uint64_t>(li)}));

    std::vector<long long> all_counts = growth;
    all_counts.insert(all_counts.end(), window.begin(), window.end());

    SweepRequest request;
    request.dims = config.dims;
    request.coupling = coupling;
    request.realizations = config.realizations;
    request.master_seed = config.master_seed;
    request.lambda_index = static_cast<int>(li);
    request.n_values = all_counts;
    for (int k : config.k_values) {
      SweepCell cell;
      cell.kind_a = state_kind_from_char(config.kinds[0]);
      cell.kind_b = state_kind_from_char(config.kinds[1]);
      cell.k_a = cell.kind_a == StateKind::E ? 1 : k;
      cell.k_b = cell.kind_b == StateKind::E ? 1 : k;
      cell.states_per_realization = config.states_per_realization;
      cell.subset_mode = config.subset_mode;
      cell.label = cell_directory("", lambda, config.kinds, k);
      request.cells.push_back(cell);
    }

    const double t0 = wall_now();
    SweepOutcome outcome = run_sweep(request);
    const double sweep_seconds = wall_now() - t0;
    for (const auto& e : outcome.events) manifest.events.push_back(e);

    for (std::size_t c = 0; c < request.cells.size(); ++c) {
      const int k = config.k_values[c];
      const auto& table = outcome.cells[c].s2;

      RealMatrix s2_growth = table.topRows(growth.size());
      RealMatrix s2_window = table.bottomRows(window.size());
      std::vector<double> times(growth.size());
      for (std::size_t i = 0; i < growth.size(); ++i)
        times[i] = time_for_iterations(growth[i], coupling);

      EnsembleSummary summary =
          summarize_ensemble(times, growth, s2_growth, s2_window,
                             config.states_per_realization, config.realizations);

      const std::string dir = cell_directory(config.output_dir, lambda, config.kinds, k);
      fs::create_directories(dir);

      {  // per-state S2bar samples
        std::ofstream out(dir + "/s2bar.csv");
        out << std::setprecision(17);
        write_csv_header(out, "realization,state,s2bar");
        for (std::size_t s = 0; s < summary.s2bar_samples.size(); ++s)
          out << s / config.states_per_realization << ","
              << s % config.states_per_realization << "," << summary.s2bar_samples[s] << "\n";
      }
      if (config.write_state_traces) {
        std::ofstream out(dir + "/traces.csv");
        out << std::setprecision(17);
        write_csv_header(out, "t,n,s2,realization,state");
        for (Eigen::Index s = 0; s < s2_growth.cols(); ++s)
          for (std::size_t r = 0; r < growth.size(); ++r)
            out << times[r] << "," << growth[r] << "," << s2_growth(r, s) << ","
                << s / config.states_per_realization << ","
                << s % config.states_per_realization << "\n";
      }
      {  // ensemble mean with the regime-matched theory overlay
        std::ofstream out(dir + "/overlays.csv");
        out << std::setprecision(17);
        write_csv_header(out, "t,s2_sim,s2_theory,regime");
        const std::string regime = regime_for(lambda, config.kinds);
        for (std::size_t r = 0; r < growth.size(); ++r)
          out << times[r] << "," << summary.mean_curve.mean[r] << ","
              << overlay_value(times[r], lambda, config.kinds, k, config.dims) << ","
              << regime << "\n";
      }
      {
        std::ofstream out(dir + "/histogram.csv");
        out << std::setprecision(17);
        write_csv_header(out, "bin_left,bin_right,density,count");
        const int bins =
            std::max(5, std::min(40, static_cast<int>(summary.s2bar_samples.size()) / 5));
        if (static_cast<int>(summary.s2bar_samples.size()) > bins) {
          const bool heavy = config.kinds.find('E') != std::string::npos;
          bool positive = true;
          for (double v : summary.s2bar_samples) positive &= v > 0.0;
          HistogramDensity h = s2bar_density(
              summary.s2bar_samples, heavy && positive ? Binning::Log : Binning::Linear, bins);
          for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
            out << h.bin_edges[b] << "," << h.bin_edges[b + 1] << "," << h.density[b] << ","
                << h.counts[b] << "\n";
        }
      }
      write_summary_json(dir + "/summary.json", config, lambda, k, summary, window,
                         outcome.realization_seeds.empty() ? 0 : outcome.realization_seeds[0]);

      CellReport report;
      report.lambda = lambda;
      report.kinds = config.kinds;
      report.k = k;
      report.directory = dir;
      report.wall_seconds = sweep_seconds / request.cells.size();
      report.summary = std::move(summary);
      manifest.cells.push_back(std::move(report));
    }
  }

  {  // manifest
    json j;
    j["config_hash"] = manifest.config_hash;
    j["version"] = manifest.version;
    j["config"] = json::parse(config.to_json_text());
    j["events"] = manifest.events;
    json cells = json::array();
    for (const auto& cr : manifest.cells)
      cells.push_back({{"lambda", cr.lambda},
                       {"kinds", cr.kinds},
                       {"k", cr.k},
                       {"directory", cr.directory},
                       {"wall_seconds", cr.wall_seconds}});
    j["cells"] = cells;
    std::ofstream out(config.output_dir + "/manifest.json");
    out << j.dump(2) << "\n";
  }
  return manifest;
}

}  // namespace rmte
