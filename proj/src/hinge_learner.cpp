#include "malice/hinge_learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace malice {

const char* status_name(SolverStatus s) {
  return s == SolverStatus::Converged ? "converged" : "iter_cap";
}

PruneResult prune(const Dataset& s_bar, double r, double delta) {
  if (!(r > 0.0)) throw std::invalid_argument("prune: r must be > 0");
  if (s_bar.empty()) throw std::invalid_argument("prune: empty dataset");
  const double threshold = pruning_radius(r, s_bar.size(), delta);

  PruneResult out;
  out.kept = Dataset(s_bar.dim());
  for (std::size_t i = 0; i < s_bar.size(); ++i) {
    if (norm(s_bar[i].x) > threshold) {
      out.removed.push_back(i);
    } else {
      out.kept.add(s_bar[i]);
    }
  }
  if (out.kept.empty()) {
    throw std::runtime_error("prune: all samples pruned");
  }
  return out;
}

namespace {

void project_to_ball(Vec& w, double radius) {
  const double n = norm(w);
  if (n > radius) {
    const double s = radius / n;
    for (double& c : w) c *= s;
  }
}

// Objective and subgradient in one pass over the data.
double objective_and_subgradient(const Vec& w, const WeightVector& q,
                                 const LearnerView& view, Vec& g) {
  g.assign(w.size(), 0.0);
  double obj = 0.0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    const double z = view.y(i) * dot(w, view.x(i));
    if (z < 1.0) obj += q.q[i] * (1.0 - z);
    if (z <= 1.0) add_scaled(g, -q.q[i] * view.y(i), view.x(i));
  }
  return obj;
}

}  // namespace

LearnerOutput minimize_weighted_hinge(const LearnerView& view,
                                      const WeightVector& q, double gamma,
                                      const OptimizerConfig& opt) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("minimize_weighted_hinge: gamma must be > 0");
  }
  if (q.size() != view.size()) {
    throw std::invalid_argument("minimize_weighted_hinge: length mismatch");
  }
  const std::size_t d = view.dim();
  const double radius = 1.0 / gamma;
  const double q_sum = q.sum();
  const double tol_abs = opt.tol_abs > 0.0 ? opt.tol_abs : 1e-6 * q_sum;

  double max_norm = 0.0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    max_norm = std::max(max_norm, norm(view.x(i)));
  }
  const double lipschitz = q_sum * max_norm;

  LearnerOutput out;
  out.q = q;

  Vec w(d, 0.0);
  Vec avg(d, 0.0);
  Vec g(d, 0.0);

  Vec best_w = w;
  double best_obj = q_sum;  // objective at w = 0
  out.status = SolverStatus::IterCap;

  int since_improvement = 0;
  for (int t = 1; t <= opt.max_iters; ++t) {
    const double obj = objective_and_subgradient(w, q, view, g);

    // Running average of iterates; usually the better candidate for
    // subgradient schemes.
    const double inv_t = 1.0 / static_cast<double>(t);
    for (std::size_t j = 0; j < d; ++j) avg[j] += (w[j] - avg[j]) * inv_t;
    const double avg_obj = weighted_hinge_loss(avg, q, view);

    double improvement = 0.0;
    if (obj < best_obj) {
      improvement = best_obj - obj;
      best_obj = obj;
      best_w = w;
    }
    if (avg_obj < best_obj) {
      improvement = std::max(improvement, best_obj - avg_obj);
      best_obj = avg_obj;
      best_w = avg;
    }
    out.objective_trace.push_back(best_obj);

    since_improvement = improvement >= tol_abs ? 0 : since_improvement + 1;
    if (best_obj == 0.0 || since_improvement >= opt.patience) {
      out.status = SolverStatus::Converged;
      break;
    }
    if (lipschitz == 0.0) {  // all-zero data or weights: w = 0 is optimal
      out.status = SolverStatus::Converged;
      break;
    }

    const double step =
        opt.step_scale * radius /
        (lipschitz * std::sqrt(static_cast<double>(t)));
    add_scaled(w, -step, g);
    project_to_ball(w, radius);
  }

  out.v_hat = best_w;
  const double v_norm = norm(out.v_hat);
  if (v_norm == 0.0) {
    Vec e1(d, 0.0);
    e1[0] = 1.0;
    out.w_hat = Halfspace{e1};
    out.zero_v_hat = true;
  } else {
    out.w_hat = Halfspace{scaled(out.v_hat, 1.0 / v_norm)};
  }
  return out;
}

LearnerOutput learn(const Dataset& s_bar, const AlgorithmParams& params,
                    const OptimizerConfig& opt, bool vanilla) {
  params.validate();
  PruneResult pruned = prune(s_bar, params.r, params.delta);
  const LearnerView view(pruned.kept);

  WeightVector q;
  if (vanilla) {
    q = WeightVector::ones(view.size());
  } else {
    RemovalParams removal;
    removal.xi = params.xi();
    removal.sigma_bar = params.sigma_bar(view.dim());
    q = soft_outlier_removal(view, removal).q;
  }

  LearnerOutput out = minimize_weighted_hinge(view, q, params.gamma, opt);
  out.pruned_indices = std::move(pruned.removed);
  return out;
}

double error_rate(const Halfspace& w, const Dataset& test) {
  if (test.empty()) throw std::invalid_argument("error_rate: empty test set");
  std::size_t wrong = 0;
  for (const auto& s : test) {
    if (sign_tie_positive(dot(w.w, s.x)) != s.y) ++wrong;
  }
  return double(wrong) / double(test.size());
}

}  // namespace malice
