#ifndef MALICE_DIAGNOSTICS_HPP
#define MALICE_DIAGNOSTICS_HPP

#include <cstdint>
#include <optional>

#include "malice/core.hpp"
#include "malice/datagen.hpp"
#include "malice/hinge_learner.hpp"
#include "malice/report.hpp"

namespace malice {

enum class SumNormMode { Exact, Heuristic };

/// Interval estimate of the linear sum norm
/// <<q o S>> = sup_{a in [-1,1]^m} || sum_i a_i q_i x_i ||.
/// lower is achieved by a concrete (a, w) witness, upper is the
/// Cauchy-Schwarz bound sqrt(m) * sqrt(lambda_max(sum_i q_i x_i x_i^T)),
/// exact comes from sign enumeration (subsets of size <= 20 only).
struct SumNormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> exact;
  std::vector<int> witness_a;  // signs in {-1,+1}
  Vec witness_w;
};

inline constexpr std::size_t kSumNormExactLimit = 20;

/// Exact mode enumerates all 2^m sign vectors (the supremum is attained at a
/// vertex of the box) and also runs the heuristic so lower/exact/upper are
/// all populated. Heuristic mode runs alternating maximization with 20
/// seeded random restarts; its value is always a valid lower bound.
SumNormEstimate sum_norm(const Dataset& sub, const WeightVector& q_sub,
                         SumNormMode mode, std::uint64_t seed = 0x5d0f);

/// Fraction of s_c inside the pancake of `center` at direction w, width tau.
double pancake_density(const LabeledSample& center, const Halfspace& w,
                       double tau, const Dataset& s_c);

struct DensePancakeCheck {
  double beta_hat = 0.0;  // worst fraction of centers with density < rho
  CertificateReport report;
};

/// Draws n_test fresh centers and estimates beta = Pr(pancake not rho-dense
/// w.r.t. s_c) at each probe direction plus n_random_dirs seeded random unit
/// directions; reports the worst direction. The definition quantifies over
/// all unit w; this samples it.
DensePancakeCheck check_dense_pancake_condition(
    const Dataset& s_c, const CleanSampler& sampler,
    const std::vector<Halfspace>& probe_ws, double tau, double rho,
    std::size_t n_test, std::size_t n_random_dirs = 50,
    std::uint64_t seed = 0);

/// Pointwise misclassification certificate: if the pancake of s at w_hat is
/// rho-dense w.r.t. S_C for the supplied rho > 4 eta0 and
/// (1/4) gamma sum_{i in S_C ∩ P} q_i exceeds the *upper* estimate of
/// <<q o S_D>>, then s must be correctly classified; a misclassified s under
/// those conditions is a hard failure. Requires tau <= gamma/2.
CertificateEntry pointwise_certificate(const LabeledSample& s,
                                       const LearnerOutput& out,
                                       const Dataset& data, double gamma,
                                       double tau, double rho, double eta0);

/// Same check with the dirty-set sum norm precomputed (it does not depend on
/// the test point, so sweeps over many points should reuse it).
CertificateEntry pointwise_certificate(const LabeledSample& s,
                                       const LearnerOutput& out,
                                       const Dataset& data, double gamma,
                                       double tau, double rho, double eta0,
                                       const SumNormEstimate& dirty_norm);

/// For a point misclassified by w_hat, evaluates the subgradient at v_hat,
/// splits it over the pancake/clean/dirty parts and asserts
///   (a) every clean pancake sample has y_i v_hat . x_i < 1, and
///   (b) g . w_star <= -gamma sum_{pancake} q_i + upper(<<q o S_D>>) + 1e-6.
/// When v_hat sits on the constraint boundary and the angle to w_star is
/// acute, the orthogonal-component variant
///   (c) g . w' <= -(gamma/2) sum_{pancake} q_i + upper + 1e-6
/// is recorded as well. Correctly classified points yield a skipped entry.
CertificateEntry gradient_decomposition(const LearnerOutput& out,
                                        const Dataset& data,
                                        const Halfspace& w_star,
                                        const LabeledSample& s, double gamma,
                                        double tau);
CertificateEntry gradient_decomposition(const LearnerOutput& out,
                                        const Dataset& data,
                                        const Halfspace& w_star,
                                        const LabeledSample& s, double gamma,
                                        double tau,
                                        const SumNormEstimate& dirty_norm);

/// Aggregated lemma-level checks on one pipeline run: pancake weight lower
/// bound against (rho_hat - 2 xi)|S| at measured densities, the dirty
/// sum-norm interval against sigma_bar sqrt(xi) |S|, pruning clean-survival,
/// and the feasibility residuals of q.
CertificateReport lemma_suite(const Dataset& s_bar, const Dataset& s_pruned,
                              const LearnerOutput& out,
                              const AlgorithmParams& params, double tau,
                              std::size_t n_probe, std::uint64_t seed);

}  // namespace malice

#endif
