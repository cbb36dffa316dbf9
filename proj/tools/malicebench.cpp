#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "malice/diagnostics.hpp"
#include "malice/experiments.hpp"
#include "malice/io.hpp"
#include "malice/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CleanSpec {
  malice::MixtureSpec mixture;
  malice::Halfspace w_star;
  double margin_gamma = 0.0;
};

// Accepts {"mixture":..., "w_star":[...]} or {"separable_mixture":...},
// optionally with "margin_gamma".
CleanSpec parse_clean_spec(const json& j) {
  CleanSpec spec;
  if (j.contains("separable_mixture")) {
    const auto sep = j.at("separable_mixture").get<malice::SeparableMixtureSpec>();
    spec.mixture = sep.base;
    spec.w_star = sep.w_star;
  } else {
    spec.mixture = j.at("mixture").get<malice::MixtureSpec>();
    spec.w_star = malice::Halfspace::from_unit(j.at("w_star").get<malice::Vec>());
  }
  spec.margin_gamma = j.value("margin_gamma", 0.0);
  spec.mixture.validate();
  return spec;
}

void print_certificates(const malice::CertificateReport& report) {
  std::cout << std::left << std::setw(34) << "check" << std::setw(8) << "verdict"
            << std::setw(16) << "lhs" << std::setw(16) << "rhs"
            << "detail\n";
  for (const auto& e : report.entries) {
    std::cout << std::left << std::setw(34) << e.check_id << std::setw(8)
              << (e.pass ? "pass" : "FAIL") << std::setw(16) << e.lhs
              << std::setw(16) << e.rhs << e.detail << "\n";
  }
  std::cout << (report.all_pass() ? "all checks passed"
                                  : "SOME CHECKS FAILED")
            << " (" << report.entries.size() << " entries)\n";
}

int cmd_generate(const std::string& config_path, std::uint64_t seed,
                 bool seed_set, std::string out) {
  const json cfg = malice::load_json_file(config_path);
  const CleanSpec clean = parse_clean_spec(cfg);
  const std::size_t n = cfg.at("n").get<std::size_t>();
  if (!seed_set) seed = cfg.value("seed", std::uint64_t(0));
  if (out.empty()) out = cfg.value("output", std::string("data.csv"));

  malice::Dataset data =
      malice::sample_mixture(clean.mixture, clean.w_star, n, seed);
  if (clean.margin_gamma > 0.0) {
    auto filtered =
        malice::enforce_margin(data, clean.w_star, clean.margin_gamma);
    std::cout << "margin filter rejected "
              << filtered.rejection_fraction * 100.0 << "% of draws\n";
    data = std::move(filtered.data);
  }
  malice::write_dataset_csv(data, out);
  std::cout << "wrote " << data.size() << " samples (d=" << data.dim()
            << ") to " << out << "\n";
  return 0;
}

int cmd_corrupt(const std::string& config_path, const std::string& clean_path,
                const std::string& adversary_path, std::uint64_t seed,
                bool seed_set, std::string out) {
  json cfg = config_path.empty() ? json::object()
                                 : malice::load_json_file(config_path);
  const json clean_json = clean_path.empty()
                              ? cfg.at("clean")
                              : malice::load_json_file(clean_path);
  const json adv_json = adversary_path.empty()
                            ? cfg.at("adversary")
                            : malice::load_json_file(adversary_path);
  const CleanSpec clean = parse_clean_spec(clean_json);
  const auto adversary = adv_json.get<malice::AdversarySpec>();
  const auto params = cfg.at("params").get<malice::AlgorithmParams>();
  const std::size_t n = cfg.at("n").get<std::size_t>();
  if (!seed_set) seed = cfg.value("seed", std::uint64_t(0));
  if (out.empty()) out = cfg.value("output", std::string("corrupted.csv"));

  const malice::CleanSampler sampler = malice::make_mixture_sampler(
      clean.mixture, clean.w_star, clean.margin_gamma);
  const malice::Dataset data =
      malice::corrupt(sampler, adversary, clean.w_star, n, params, seed);
  malice::write_dataset_csv(data, out);
  std::cout << "wrote " << data.size() << " samples, empirical noise rate "
            << malice::empirical_noise_rate(data) << ", to " << out << "\n";
  return 0;
}

int cmd_reweight(const std::string& data_path, const std::string& params_path,
                 const std::string& out_q, const std::string& out_report) {
  const malice::Dataset data = malice::read_dataset_csv(data_path);
  const auto params =
      malice::load_json_file(params_path).get<malice::RemovalParams>();

  json report;
  try {
    const malice::RemovalResult res =
        malice::soft_outlier_removal(malice::LearnerView(data), params);
    malice::write_weights_csv(res.q, out_q);
    report["status"] = "ok";
    report["iterations"] = res.iterations;
    report["final_violation"] = res.final_violation;
    report["lambda_trace"] = res.lambda_trace;
    report["feasibility"] =
        malice::verify_feasibility(malice::LearnerView(data), res.q, params);
    malice::save_json_file(report, out_report);
    std::cout << "feasible q found in " << res.iterations
              << " violation iterations; wrote " << out_q << "\n";
    return 0;
  } catch (const malice::InfeasibleRemovalError& e) {
    report["status"] = "infeasible_or_unconverged";
    report["residual"] = e.residual;
    report["iterations"] = e.iterations;
    malice::save_json_file(report, out_report);
    std::cerr << "infeasible or unconverged; residual " << e.residual << "\n";
    return 1;
  }
}

int cmd_train(const std::string& data_path, const malice::AlgorithmParams& params,
              bool vanilla, std::uint64_t seed, const std::string& out_dir) {
  const malice::Dataset data = malice::read_dataset_csv(data_path);
  fs::create_directories(out_dir);

  const malice::LearnerOutput out = malice::learn(data, params,
                                                  malice::OptimizerConfig{},
                                                  vanilla);

  malice::write_weights_csv(out.q, (fs::path(out_dir) / "q.csv").string());
  json j = malice::learner_output_to_json(out, "q.csv");
  j["params"] = params;
  j["vanilla"] = vanilla;
  j["seed"] = seed;
  j["data"] = data_path;
  malice::save_json_file(j, (fs::path(out_dir) / "output.json").string());

  std::ofstream trace((fs::path(out_dir) / "trace.csv").string());
  trace << "iteration,best_objective\n";
  for (std::size_t i = 0; i < out.objective_trace.size(); ++i) {
    trace << i + 1 << "," << malice::format_double(out.objective_trace[i])
          << "\n";
  }

  std::cout << "status: " << malice::status_name(out.status)
            << ", pruned " << out.pruned_indices.size() << " samples, |v|="
            << malice::norm(out.v_hat) << "\n"
            << "wrote " << out_dir << "/{output.json,q.csv,trace.csv}\n";
  return 0;
}

int cmd_verify(const std::string& run_dir, double tau_opt, double rho_opt,
               std::uint64_t seed) {
  const fs::path dir(run_dir);
  const json out_json =
      malice::load_json_file((dir / "output.json").string());
  const malice::LearnerOutput out =
      malice::learner_output_from_json(out_json, dir.string());
  const auto params = out_json.at("params").get<malice::AlgorithmParams>();

  std::string data_path = out_json.value("data", std::string());
  if (!fs::exists(data_path)) data_path = (dir / "train.csv").string();
  const malice::Dataset train = malice::read_dataset_csv(data_path);
  const malice::Dataset pruned =
      malice::prune(train, params.r, params.delta).kept;

  const double tau = tau_opt > 0.0 ? tau_opt : params.gamma / 2.0;
  const double rho = rho_opt > 0.0 ? rho_opt : 4.0 * params.eta0 + 1e-9;

  malice::CertificateReport report =
      malice::lemma_suite(train, pruned, out, params, tau, 32, seed);

  // Pointwise and gradient certificates over the training points themselves
  // (a held-out test.csv in the run directory is used when present).
  malice::Dataset probe = pruned;
  const fs::path test_path = dir / "test.csv";
  if (fs::exists(test_path)) {
    probe = malice::read_dataset_csv(test_path.string());
  }
  const auto dirty_idx = pruned.indices_with(malice::Provenance::Dirty);
  const malice::SumNormEstimate dirty_norm = malice::sum_norm(
      pruned.subset(dirty_idx), out.q.subset(dirty_idx),
      dirty_idx.size() <= malice::kSumNormExactLimit
          ? malice::SumNormMode::Exact
          : malice::SumNormMode::Heuristic);
  // The true target, when recorded with the run, enables the gradient
  // decomposition checks too.
  std::optional<malice::Halfspace> w_star;
  if (out_json.contains("w_star")) {
    w_star = malice::Halfspace::from_unit(
        out_json.at("w_star").get<malice::Vec>());
  }

  std::size_t violations = 0, grad_failures = 0, misclassified = 0;
  for (const auto& s : probe) {
    const auto e = malice::pointwise_certificate(
        s, out, pruned, params.gamma, tau, rho, params.eta0, dirty_norm);
    if (!e.pass) ++violations;
    if (s.y * malice::dot(out.w_hat.w, s.x) <= 0.0) {
      ++misclassified;
      if (w_star) {
        const auto gd = malice::gradient_decomposition(
            out, pruned, *w_star, s, params.gamma, tau, dirty_norm);
        if (!gd.pass) ++grad_failures;
      }
    }
  }
  report.append(malice::CertificateEntry{
      "pointwise_certificates", violations == 0, double(violations), 0.0,
      std::to_string(probe.size()) + " probe points, " +
          std::to_string(misclassified) + " misclassified"});
  if (w_star) {
    report.append(malice::CertificateEntry{
        "gradient_decomposition", grad_failures == 0, double(grad_failures),
        0.0, "failures over misclassified probe points"});
  }

  malice::save_json_file(json(report),
                         (dir / "certificates.json").string());
  print_certificates(report);
  return report.all_pass() ? 0 : 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir_flag) {
  auto cfg = malice::load_json_file(config_path).get<malice::ExperimentConfig>();
  if (!out_dir_flag.empty()) cfg.output_dir = out_dir_flag;
  cfg.validate();
  fs::create_directories(cfg.output_dir);

  std::cout << "config hash " << malice::config_hash(cfg) << "\n"
            << "n_train = " << cfg.n_train << " (theorem-mandated n = "
            << cfg.strict_theorem_n() << ")\n";

  std::vector<malice::CertificateReport> certificates;
  const auto results = malice::run_experiment(cfg, &certificates);

  const fs::path dir(cfg.output_dir);
  malice::write_results_csv(results, (dir / "results.csv").string());
  malice::save_json_file(json(certificates),
                         (dir / "certificates.json").string());
  malice::write_report(results, (dir / "summary.csv").string(),
                       (dir / "plot.dat").string());

  std::size_t failures = 0;
  for (const auto& r : results) {
    if (r.status != "ok") ++failures;
  }
  std::cout << results.size() << " runs, " << failures
            << " failed; wrote " << cfg.output_dir
            << "/{results.csv,certificates.json,summary.csv,plot.dat}\n";
  return 0;
}

int cmd_report(const std::string& results_path, const std::string& table,
               const std::string& plot) {
  const auto results = malice::read_results_csv(results_path);
  malice::write_report(results, table, plot);
  std::cout << "wrote " << table << " and " << plot << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAC learning of halfspaces under malicious noise via "
               "reweighted hinge-loss minimization"};
  app.require_subcommand(1);

  std::string config_path, data_path, out_path, out_dir = "run";
  std::string clean_path, adversary_path, params_path;
  std::string out_q = "q.csv", out_report = "reweight_report.json";
  std::string results_path, table_path = "summary.csv", plot_path = "plot.dat";
  std::uint64_t seed = 0;
  bool vanilla = false;
  double tau = 0.0, rho = 0.0;
  malice::AlgorithmParams params;

  auto* generate = app.add_subcommand("generate", "sample a clean dataset");
  generate->add_option("--config", config_path, "generation config JSON")
      ->required();
  auto* gen_seed = generate->add_option("--seed", seed, "master seed");
  generate->add_option("--out", out_path, "output CSV path");

  auto* corrupt = app.add_subcommand("corrupt", "simulate the noise oracle");
  corrupt->add_option("--config", config_path, "corruption config JSON");
  corrupt->add_option("--clean-spec", clean_path, "clean distribution JSON");
  corrupt->add_option("--adversary", adversary_path, "adversary spec JSON");
  auto* cor_seed = corrupt->add_option("--seed", seed, "master seed");
  corrupt->add_option("--out", out_path, "output CSV path");

  auto* reweight = app.add_subcommand("reweight", "soft outlier removal");
  reweight->add_option("--data", data_path, "dataset CSV")->required();
  reweight->add_option("--config", params_path, "RemovalParams JSON")
      ->required();
  reweight->add_option("--out-q", out_q, "weights CSV path");
  reweight->add_option("--out-report", out_report, "report JSON path");

  auto* train = app.add_subcommand("train", "run the full learner");
  train->add_option("--data", data_path, "dataset CSV")->required();
  train->add_option("--gamma", params.gamma, "margin")->required();
  train->add_option("--r", params.r, "mean-norm bound")->required();
  train->add_option("--eta0", params.eta0, "noise upper bound")->required();
  train->add_option("--epsilon", params.epsilon, "target error")->required();
  train->add_option("--delta", params.delta, "failure probability")
      ->required();
  train->add_flag("--vanilla", vanilla, "skip reweighting (q = all-ones)");
  train->add_option("--seed", seed, "seed recorded with the output");
  train->add_option("--out-dir", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "certify a finished run");
  verify->add_option("--run-dir", out_dir, "run directory")->required();
  verify->add_option("--tau", tau, "pancake width (default gamma/2)");
  verify->add_option("--rho", rho, "density threshold (default 4 eta0)");
  verify->add_option("--seed", seed, "seed for randomized checks");

  auto* run = app.add_subcommand("run", "execute an experiment sweep");
  run->add_option("--config", config_path, "ExperimentConfig JSON")
      ->required();
  run->add_option("--out-dir", out_path, "override output directory");

  auto* report = app.add_subcommand("report", "summarize results");
  report->add_option("--results", results_path, "results.csv path")
      ->required();
  report->add_option("--out-table", table_path, "summary CSV path");
  report->add_option("--out-plot", plot_path, "gnuplot data path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return cmd_generate(config_path, seed, gen_seed->count() > 0, out_path);
    }
    if (corrupt->parsed()) {
      return cmd_corrupt(config_path, clean_path, adversary_path, seed,
                         cor_seed->count() > 0, out_path);
    }
    if (reweight->parsed()) {
      return cmd_reweight(data_path, params_path, out_q, out_report);
    }
    if (train->parsed()) {
      return cmd_train(data_path, params, vanilla, seed, out_dir);
    }
    if (verify->parsed()) return cmd_verify(out_dir, tau, rho, seed);
    if (run->parsed()) return cmd_run(config_path, out_path);
    if (report->parsed()) return cmd_report(results_path, table_path, plot_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
