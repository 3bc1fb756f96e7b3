// rmte command line: simulate ensembles, print theory curves, run the
// appendix validation suite, histogram S2bar samples.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "rmte/runner.hpp"
#include "rmte/stats.hpp"
#include "rmte/theory.hpp"
#include "rmte/validation.hpp"

namespace {

using namespace rmte;

int cmd_simulate(const std::string& config_path, const std::string& output_root,
                 int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
  ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
  if (!output_root.empty())
    config.output_dir = output_root + "/" + config.output_dir;
  else if (const char* env = std::getenv("RMTE_OUTPUT_ROOT"))
    config.output_dir = std::string(env) + "/" + config.output_dir;

  RunManifest manifest = run_experiment(config);
  std::cout << "config hash " << manifest.config_hash << ", " << manifest.cells.size()
            << " cells written under " << config.output_dir << "\n";
  for (const auto& cell : manifest.cells)
    std::printf("  %-28s  <S2bar> = %.6g  sigma2(S2bar) = %.3g  relax = %.3g  (%.1fs)\n",
                cell.directory.c_str(), cell.summary.s2bar_mean, cell.summary.equilibrium,
                cell.summary.relaxation, cell.wall_seconds);
  for (const auto& e : manifest.events) std::cout << "  event: " << e << "\n";
  return 0;
}

int cmd_theory(const std::string& curve, double lambda, int k, char kind, int na, int nb,
               double t_max, int points) {
  const SubsystemDims dims(na, nb);
  const double c2 = mean_c2(state_kind_from_char(kind), k);
  std::cout << "t,value\n";
  std::printf("# curve=%s lambda=%g k=%d kind=%c\n", curve.c_str(), lambda, k, kind);
  for (int i = 0; i <= points; ++i) {
    const double t = t_max * i / points;
    double v = 0.0;
    if (curve == "ultraweak")
      v = theory::ultraweak_curve(t, c2, c2);
    else if (curve == "ee")
      v = theory::ee_mean_curve(t, lambda);
    else if (curve == "ec")
      v = theory::ec_mean_curve(t, lambda, c2);
    else if (curve == "weak-short")
      v = theory::weak_combined_short(t, lambda, c2, c2);
    else if (curve == "strong")
      v = theory::strong_curve(t, lambda, dims);
    else if (curve == "intermediate")
      v = theory::intermediate_curve(t, lambda, dims);
    else if (curve == "cfun")
      v = theory::c_function(t);
    else if (curve == "c2fun")
      v = theory::c2_function_cached(t);
    else if (curve == "s2bar-density")
      v = theory::ee_s2bar_density(t, lambda);  // here t is read as x
    else
      throw CLI::ValidationError("unknown curve " + curve);
    std::printf("%.10g,%.10g\n", t, v);
  }
  return 0;
}

int cmd_validate(long long samples, int na, int nb, std::uint64_t seed) {
  const SubsystemDims dims(na, nb);
  std::vector<MomentReport> reports;

  for (PairType p : {PairType::BothOff, PairType::JEqual, PairType::KEqual, PairType::Diagonal})
    reports.push_back(v_element_variance(dims, p, samples, seed));
  for (auto& r : diag_covariance(dims, samples, seed + 1)) reports.push_back(r);
  for (int n : {2, 4, dims.na})
    for (auto& r : haar_moments(n, samples, seed + 2 + n)) {
      r.quantity += " N=" + std::to_string(n);
      reports.push_back(r);
    }

  const long long ks_samples = std::min<long long>(samples, 20000);
  ExponentialCheck expo = off_diagonal_exponential_check(dims, ks_samples, seed + 99);
  reports.push_back(expo.mean_report);
  reports.push_back(expo.var_report);

  bool all_pass = expo.ks_statistic < expo.ks_threshold_95;
  std::printf("%-28s %14s %14s %12s %8s  %s\n", "quantity", "analytic", "monte carlo",
              "std error", "sigmas", "pass");
  for (const auto& r : reports) {
    const bool ok = r.pass();
    all_pass &= ok;
    std::printf("%-28s %14.6g %14.6g %12.3g %8.2f  %s\n", r.quantity.c_str(), r.analytic,
                r.monte_carlo, r.std_error, r.deviation_sigmas(), ok ? "yes" : "NO");
  }
  std::printf("%-28s %14s %14.6g %12.3g %8s  %s\n", "KS(w) vs Exp(1)", "-", expo.ks_statistic,
              expo.ks_threshold_95, "-",
              expo.ks_statistic < expo.ks_threshold_95 ? "yes" : "NO");
  std::printf("%s\n", all_pass ? "all checks passed" : "FAILURES present");
  return all_pass ? 0 : 1;
}

int cmd_density(const std::string& csv_path, int bins, bool log_bins) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("density: cannot open " + csv_path);
  std::vector<double> samples;
  std::string line;
  int s2bar_col = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (s2bar_col < 0) {  // header row: find the s2bar column (default: last)
      s2bar_col = static_cast<int>(fields.size()) - 1;
      for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] == "s2bar") s2bar_col = static_cast<int>(i);
      continue;
    }
    if (s2bar_col < static_cast<int>(fields.size()))
      samples.push_back(std::stod(fields[s2bar_col]));
  }
  HistogramDensity h =
      s2bar_density(samples, log_bins ? Binning::Log : Binning::Linear, bins);
  std::cout << "bin_left,bin_right,density,count\n";
  for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
    std::printf("%.10g,%.10g,%.10g,%lld\n", h.bin_edges[b], h.bin_edges[b + 1], h.density[b],
                h.counts[b]);
  if (h.underflow_count > 0)
    std::fprintf(stderr, "# %lld samples clamped into the first bin\n", h.underflow_count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-matrix transition ensemble entanglement simulator"};
  app.require_subcommand(1);

  // simulate
  std::string config_path, output_root;
  int threads = 0;
  auto* sim = app.add_subcommand("simulate", "run an experiment config");
  sim->add_option("config", config_path, "JSON config file")->required();
  sim->add_option("--output-root", output_root, "prefix for the output directory");
  sim->add_option("--threads", threads, "OpenMP thread count (0 = default)");

  // theory
  std::string curve;
  double lambda = 1e-6, t_max = 4.0;
  int k = 50, na = 50, nb = 50, points = 200;
  std::string kind = "C";
  auto* th = app.add_subcommand("theory", "print a theory curve as CSV");
  th->add_option("curve", curve,
                 "ultraweak|ee|ec|weak-short|strong|intermediate|cfun|c2fun|s2bar-density")
      ->required();
  th->add_option("--lambda", lambda, "transition parameter");
  th->add_option("--k", k, "basis subset size K");
  th->add_option("--kind", kind, "coherent state kind C or R");
  th->add_option("--na", na, "subsystem A dimension");
  th->add_option("--nb", nb, "subsystem B dimension");
  th->add_option("--t-max", t_max, "grid end (or x end for densities)");
  th->add_option("--points", points, "grid points");

  // validate
  long long samples = 100000;
  std::uint64_t seed = 7;
  int vna = 50, vnb = 50;
  auto* val = app.add_subcommand("validate", "Monte Carlo checks of the V-element statistics");
  val->add_option("--samples", samples, "samples per check");
  val->add_option("--na", vna, "subsystem A dimension");
  val->add_option("--nb", vnb, "subsystem B dimension");
  val->add_option("--seed", seed, "master seed");

  // density
  std::string csv_path;
  int bins = 40;
  bool log_bins = false;
  auto* den = app.add_subcommand("density", "histogram an s2bar.csv file");
  den->add_option("file", csv_path, "CSV with an s2bar column")->required();
  den->add_option("--bins", bins, "bin count");
  den->add_flag("--log", log_bins, "log-spaced bins");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, output_root, threads);
    if (th->parsed()) return cmd_theory(curve, lambda, k, kind.at(0), na, nb, t_max, points);
    if (val->parsed()) return cmd_validate(samples, vna, vnb, seed);
    if (den->parsed()) return cmd_density(csv_path, bins, log_bins);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
