#ifndef MALICE_OUTLIER_REMOVAL_HPP
#define MALICE_OUTLIER_REMOVAL_HPP

#include <stdexcept>

#include "malice/core.hpp"
#include "malice/report.hpp"

namespace malice {

struct RemovalParams {
  double xi = 0.0;         // empirical noise bound, in (0, 1)
  double sigma_bar = 0.0;  // variance cap, > 0
  double feas_tol = 1e-6;  // relative feasibility tolerance on sigma_bar^2
  int max_iters = 5000;

  void validate() const;
};

struct TopDirection {
  double lambda = 0.0;
  Vec w;
};

/// Largest eigenvalue and eigenvector of M(q) = (1/n) sum_i q_i x_i x_i^T.
TopDirection top_direction(const LearnerView& view, const WeightVector& q);

/// Euclidean projection onto {q in [0,1]^n : sum q_i >= (1-xi) n}. Clips to
/// the box; if the sum constraint is then violated, bisects on the uniform
/// shift theta >= 0 with sum_i clip(q_i + theta, 0, 1) = (1-xi) n, exact to
/// 1e-12 on the sum.
WeightVector project_weights(const Vec& q_raw, double xi);

/// Raised when the projected-subgradient solver exhausts its iteration cap
/// with the spectral constraint still violated. Carries the best iterate
/// found and its violation so callers can report rather than silently use an
/// infeasible q.
class InfeasibleRemovalError : public std::runtime_error {
 public:
  InfeasibleRemovalError(WeightVector best_q, double residual, int iterations);

  WeightVector best_q;
  double residual;
  int iterations;
};

struct RemovalResult {
  WeightVector q;
  int iterations = 0;              // violation iterations actually taken
  double final_violation = 0.0;    // max(0, lambda_max - sigma_bar^2) at q
  std::vector<double> lambda_trace;
};

/// Finds q in [0,1]^n with sum q_i >= (1-xi) n and
/// lambda_max(M(q)) <= sigma_bar^2 (1 + feas_tol), by projected subgradient
/// on the violation v(q) = max(0, lambda_max(M(q)) - sigma_bar^2), starting
/// from q = 1. Throws InfeasibleRemovalError at the iteration cap.
RemovalResult soft_outlier_removal(const LearnerView& view,
                                   const RemovalParams& params);

/// Independently recomputes the box, sum and spectral residuals of q (the
/// spectral one with a fresh randomized power-iteration start) and reports
/// pass/fail per constraint.
CertificateReport verify_feasibility(const LearnerView& view,
                                     const WeightVector& q,
                                     const RemovalParams& params,
                                     std::uint64_t fresh_seed = 0xfe45);

}  // namespace malice

#endif
