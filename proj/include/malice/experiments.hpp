#ifndef MALICE_EXPERIMENTS_HPP
#define MALICE_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "malice/adversary.hpp"
#include "malice/datagen.hpp"
#include "malice/hinge_learner.hpp"
#include "malice/report.hpp"

namespace malice {

struct ExperimentConfig {
  // Exactly one of mixture/separable is set; a plain mixture needs w_star.
  std::optional<MixtureSpec> mixture;
  std::optional<SeparableMixtureSpec> separable;
  std::optional<Halfspace> w_star;

  std::vector<AdversarySpec> adversary_grid;
  AlgorithmParams params;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<std::uint64_t> seeds;
  bool vanilla_hinge = true;
  std::size_t n_certificate_points = 200;
  std::string output_dir = "runs";

  void validate() const;
  const MixtureSpec& base_mixture() const;
  Halfspace target() const;
  std::size_t dim() const { return base_mixture().d; }

  /// Theorem-mandated sample size 2^17 * d * ceil(log^4(8d/(eps*delta))),
  /// reported next to the actual n_train so the desk-scale gap is explicit.
  std::uint64_t strict_theorem_n() const;
};

struct RunResult {
  std::string config_hash;
  std::uint64_t seed = 0;
  double eta = 0.0;
  std::string strategy;
  double gamma = 0.0;
  std::size_t d = 0;
  std::size_t n = 0;
  double err_reweighted = 0.0;
  std::optional<double> err_vanilla;
  std::string status = "ok";
  double wall_time_s = 0.0;
  std::size_t certificate_failures = 0;
  std::size_t certificate_checks = 0;
};

std::string config_hash(const ExperimentConfig& cfg);

/// Runs the full (adversary x seed) grid: clean stream, corruption, learn
/// (reweighted and optionally vanilla), held-out evaluation, diagnostics.
/// Failed runs become rows with a status, never silent drops. Parallelism is
/// capped by MALICEBENCH_WORKERS; results are merged in deterministic order.
/// Per-run certificate reports are appended to `certificates` when non-null.
std::vector<RunResult> run_experiment(
    const ExperimentConfig& cfg,
    std::vector<CertificateReport>* certificates = nullptr);

void write_results_csv(const std::vector<RunResult>& results,
                       const std::string& path);
std::vector<RunResult> read_results_csv(const std::string& path);

/// Per-(eta, strategy) mean/std error table as CSV plus a gnuplot-friendly
/// data file (x = eta, one series per method). Throws on empty results.
void write_report(const std::vector<RunResult>& results,
                  const std::string& table_path, const std::string& plot_path);

}  // namespace malice

#endif
