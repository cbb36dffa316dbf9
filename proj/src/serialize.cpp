#include "malice/serialize.hpp"

#include <filesystem>
#include <fstream>

#include "malice/io.hpp"

namespace malice {

namespace {

const char* family_name(ComponentFamily f) {
  return f == ComponentFamily::Gaussian ? "gaussian" : "uniform_ball";
}

ComponentFamily family_from(const std::string& s) {
  if (s == "gaussian") return ComponentFamily::Gaussian;
  if (s == "uniform_ball") return ComponentFamily::UniformBall;
  throw std::runtime_error("unknown component family '" + s + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const MixtureComponent& c) {
  j = nlohmann::json{{"family", family_name(c.family)},
                     {"mu", c.mu},
                     {"cov_scale", c.cov_scale}};
}

void from_json(const nlohmann::json& j, MixtureComponent& c) {
  c.family = family_from(j.at("family").get<std::string>());
  c.mu = j.at("mu").get<Vec>();
  c.cov_scale = j.at("cov_scale").get<double>();
}

void to_json(nlohmann::json& j, const MixtureSpec& s) {
  j = nlohmann::json{
      {"d", s.d}, {"r", s.r}, {"k", s.k()}, {"components", s.components}};
}

void from_json(const nlohmann::json& j, MixtureSpec& s) {
  s.d = j.at("d").get<std::size_t>();
  s.r = j.at("r").get<double>();
  s.components = j.at("components").get<std::vector<MixtureComponent>>();
  if (j.contains("k") && j.at("k").get<std::size_t>() != s.k()) {
    throw std::runtime_error("mixture json: k does not match components");
  }
}

void to_json(nlohmann::json& j, const SeparableMixtureSpec& s) {
  j = nlohmann::json{{"base", s.base},
                     {"zeta", s.zeta},
                     {"w_star", s.w_star.w},
                     {"strict_theorem", s.strict_theorem}};
}

void from_json(const nlohmann::json& j, SeparableMixtureSpec& s) {
  s.base = j.at("base").get<MixtureSpec>();
  s.zeta = j.at("zeta").get<double>();
  s.w_star = Halfspace::from_unit(j.at("w_star").get<Vec>());
  s.strict_theorem = j.value("strict_theorem", false);
}

void to_json(nlohmann::json& j, const AdversarySpec& s) {
  j = nlohmann::json{{"eta", s.eta},
                     {"strategy", strategy_name(s.strategy)},
                     {"magnitude", s.magnitude},
                     {"flip_label", s.flip_label}};
  if (s.direction) j["direction"] = *s.direction;
}

void from_json(const nlohmann::json& j, AdversarySpec& s) {
  s.eta = j.at("eta").get<double>();
  s.strategy = strategy_from_name(j.at("strategy").get<std::string>());
  s.magnitude = j.value("magnitude", 0.0);
  s.flip_label = j.value("flip_label", false);
  if (j.contains("direction")) {
    s.direction = j.at("direction").get<Vec>();
  } else {
    s.direction.reset();
  }
}

void to_json(nlohmann::json& j, const AlgorithmParams& p) {
  j = nlohmann::json{{"gamma", p.gamma},
                     {"r", p.r},
                     {"eta0", p.eta0},
                     {"epsilon", p.epsilon},
                     {"delta", p.delta}};
}

void from_json(const nlohmann::json& j, AlgorithmParams& p) {
  p.gamma = j.at("gamma").get<double>();
  p.r = j.at("r").get<double>();
  p.eta0 = j.at("eta0").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
  p.delta = j.at("delta").get<double>();
}

void to_json(nlohmann::json& j, const RemovalParams& p) {
  j = nlohmann::json{{"xi", p.xi},
                     {"sigma_bar", p.sigma_bar},
                     {"feas_tol", p.feas_tol},
                     {"max_iters", p.max_iters}};
}

void from_json(const nlohmann::json& j, RemovalParams& p) {
  p.xi = j.at("xi").get<double>();
  p.sigma_bar = j.at("sigma_bar").get<double>();
  p.feas_tol = j.value("feas_tol", 1e-6);
  p.max_iters = j.value("max_iters", 5000);
}

void to_json(nlohmann::json& j, const OptimizerConfig& c) {
  j = nlohmann::json{{"tol_abs", c.tol_abs},
                     {"patience", c.patience},
                     {"max_iters", c.max_iters},
                     {"step_scale", c.step_scale}};
}

void from_json(const nlohmann::json& j, OptimizerConfig& c) {
  c.tol_abs = j.value("tol_abs", 0.0);
  c.patience = j.value("patience", 200);
  c.max_iters = j.value("max_iters", 50000);
  c.step_scale = j.value("step_scale", 1.0);
}

void to_json(nlohmann::json& j, const CertificateEntry& e) {
  j = nlohmann::json{{"check_id", e.check_id},
                     {"pass", e.pass},
                     {"lhs", e.lhs},
                     {"rhs", e.rhs},
                     {"detail", e.detail}};
}

void from_json(const nlohmann::json& j, CertificateEntry& e) {
  e.check_id = j.at("check_id").get<std::string>();
  e.pass = j.at("pass").get<bool>();
  e.lhs = j.at("lhs").get<double>();
  e.rhs = j.at("rhs").get<double>();
  e.detail = j.value("detail", "");
}

void to_json(nlohmann::json& j, const CertificateReport& r) {
  j = nlohmann::json{{"entries", r.entries}, {"all_pass", r.all_pass()}};
}

void from_json(const nlohmann::json& j, CertificateReport& r) {
  r.entries = j.at("entries").get<std::vector<CertificateEntry>>();
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json::object();
  if (c.mixture) j["mixture"] = *c.mixture;
  if (c.separable) j["separable_mixture"] = *c.separable;
  if (c.w_star) j["w_star"] = c.w_star->w;
  j["adversaries"] = c.adversary_grid;
  j["params"] = c.params;
  j["n_train"] = c.n_train;
  j["n_test"] = c.n_test;
  j["seeds"] = c.seeds;
  j["vanilla_hinge"] = c.vanilla_hinge;
  j["n_certificate_points"] = c.n_certificate_points;
  j["output_dir"] = c.output_dir;
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  c.mixture.reset();
  c.separable.reset();
  c.w_star.reset();
  if (j.contains("mixture")) c.mixture = j.at("mixture").get<MixtureSpec>();
  if (j.contains("separable_mixture")) {
    c.separable = j.at("separable_mixture").get<SeparableMixtureSpec>();
  }
  if (j.contains("w_star")) {
    c.w_star = Halfspace::from_unit(j.at("w_star").get<Vec>());
  }
  c.adversary_grid = j.at("adversaries").get<std::vector<AdversarySpec>>();
  c.params = j.at("params").get<AlgorithmParams>();
  c.n_train = j.at("n_train").get<std::size_t>();
  c.n_test = j.at("n_test").get<std::size_t>();
  c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.vanilla_hinge = j.value("vanilla_hinge", true);
  c.n_certificate_points = j.value("n_certificate_points", std::size_t(200));
  c.output_dir = j.value("output_dir", std::string("runs"));
}

nlohmann::json learner_output_to_json(const LearnerOutput& out,
                                      const std::string& q_csv) {
  nlohmann::json j;
  j["w_hat"] = out.w_hat.w;
  j["v_hat"] = out.v_hat;
  j["q_csv"] = q_csv;
  j["pruned_indices"] = out.pruned_indices;
  j["status"] = status_name(out.status);
  j["zero_v_hat"] = out.zero_v_hat;
  return j;
}

LearnerOutput learner_output_from_json(const nlohmann::json& j,
                                       const std::string& base_dir) {
  LearnerOutput out;
  out.w_hat = Halfspace::from_unit(j.at("w_hat").get<Vec>());
  out.v_hat = j.at("v_hat").get<Vec>();
  out.pruned_indices = j.at("pruned_indices").get<std::vector<std::size_t>>();
  out.status = j.at("status").get<std::string>() == "converged"
                   ? SolverStatus::Converged
                   : SolverStatus::IterCap;
  out.zero_v_hat = j.value("zero_v_hat", false);
  const std::filesystem::path q_path =
      std::filesystem::path(base_dir) / j.at("q_csv").get<std::string>();
  out.q = read_weights_csv(q_path.string());
  return out;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  nlohmann::json j;
  is >> j;
  return j;
}

void save_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << j.dump(2) << "\n";
}

}  // namespace malice
