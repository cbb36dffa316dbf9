#ifndef MALICE_HINGE_LEARNER_HPP
#define MALICE_HINGE_LEARNER_HPP

#include <cstdint>

#include "malice/core.hpp"
#include "malice/outlier_removal.hpp"

namespace malice {

struct OptimizerConfig {
  double tol_abs = 0.0;    // <= 0 selects 1e-6 * sum(q)
  int patience = 200;      // iterations without improvement before stopping
  int max_iters = 50000;
  double step_scale = 1.0; // multiplies the (1/gamma)/(G sqrt(t)) step
};

enum class SolverStatus { Converged, IterCap };

const char* status_name(SolverStatus s);

struct LearnerOutput {
  Halfspace w_hat;
  Vec v_hat;       // ||v_hat|| <= 1/gamma
  WeightVector q;  // aligned with the post-pruning dataset
  std::vector<std::size_t> pruned_indices;
  std::vector<double> objective_trace;  // best objective per iteration
  SolverStatus status = SolverStatus::Converged;
  bool zero_v_hat = false;  // minimizer was 0; w_hat fell back to e_1
};

struct PruneResult {
  Dataset kept;
  std::vector<std::size_t> removed;
};

/// Removes exactly the samples with ||x|| > r + log(9n/delta), n = |s_bar|.
/// Throws if nothing survives.
PruneResult prune(const Dataset& s_bar, double r, double delta);

/// Projected subgradient descent for min_{||w|| <= 1/gamma} l(w; q o S),
/// from w_0 = 0 with step (1/gamma)/(G sqrt(t)), G = sum(q) * max_i ||x_i||.
/// Tracks the best objective over iterates and running averages and returns
/// the best recorded vector.
LearnerOutput minimize_weighted_hinge(const LearnerView& view,
                                      const WeightVector& q, double gamma,
                                      const OptimizerConfig& opt = {});

/// The end-to-end pipeline: prune, soft outlier removal with xi = 2 eta0 and
/// sigma_bar = sqrt(2(1/d + r^2)), constrained reweighted hinge
/// minimization, normalization. vanilla = true skips removal and uses
/// q = all-ones. If the minimizer is the zero vector the returned halfspace
/// is e_1 and zero_v_hat is set.
LearnerOutput learn(const Dataset& s_bar, const AlgorithmParams& params,
                    const OptimizerConfig& opt = {}, bool vanilla = false);

/// Fraction of test samples with y != sign(w . x); sign(0) counts as +1.
double error_rate(const Halfspace& w, const Dataset& test);

}  // namespace malice

#endif
