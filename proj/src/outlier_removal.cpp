#include "malice/outlier_removal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace malice {

void RemovalParams::validate() const {
  if (!(xi > 0.0 && xi < 1.0)) {
    throw std::invalid_argument("removal: xi must be in (0, 1)");
  }
  if (!(sigma_bar > 0.0)) {
    throw std::invalid_argument("removal: sigma_bar must be > 0");
  }
  if (!(feas_tol > 0.0 && feas_tol <= 1e-2)) {
    throw std::invalid_argument("removal: feas_tol must be in (0, 1e-2]");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("removal: max_iters must be >= 1");
  }
}

namespace {

SymMatrix weighted_second_moment(const LearnerView& view,
                                 const WeightVector& q) {
  SymMatrix m(view.dim());
  const double inv_n = 1.0 / static_cast<double>(view.size());
  for (std::size_t i = 0; i < view.size(); ++i) {
    if (q.q[i] != 0.0) m.add_outer(view.x(i), q.q[i] * inv_n);
  }
  return m;
}

}  // namespace

TopDirection top_direction(const LearnerView& view, const WeightVector& q) {
  if (q.size() != view.size()) {
    throw std::invalid_argument("top_direction: length mismatch");
  }
  if (view.size() == 0) {
    throw std::invalid_argument("top_direction: empty dataset");
  }
  const TopEigen e = top_eigen(weighted_second_moment(view, q));
  return TopDirection{e.lambda, e.vector};
}

WeightVector project_weights(const Vec& q_raw, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) {
    throw std::invalid_argument("project_weights: xi must be in (0, 1)");
  }
  const std::size_t n = q_raw.size();
  if (n == 0) throw std::invalid_argument("project_weights: empty vector");
  const double target = (1.0 - xi) * static_cast<double>(n);
  if (target > static_cast<double>(n)) {
    throw std::invalid_argument("project_weights: impossible constraint");
  }

  const auto clipped_sum = [&](double theta) {
    double s = 0.0;
    for (double v : q_raw) s += std::clamp(v + theta, 0.0, 1.0);
    return s;
  };

  double theta = 0.0;
  if (clipped_sum(0.0) < target) {
    // The sum constraint is active: shift uniformly by theta >= 0 before
    // clipping. clipped_sum is continuous, non-decreasing and piecewise
    // linear in theta with breakpoints at -q_i and 1-q_i, so the root is
    // found exactly by locating its segment and solving the linear piece.
    std::vector<double> bps;
    bps.reserve(2 * n);
    for (double v : q_raw) {
      if (-v > 0.0) bps.push_back(-v);
      if (1.0 - v > 0.0) bps.push_back(1.0 - v);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    double lo_bp = 0.0;
    double hi_bp = bps.empty() ? 0.0 : bps.back();
    std::size_t first = 0, last = bps.size();
    while (first < last) {
      const std::size_t mid = first + (last - first) / 2;
      if (clipped_sum(bps[mid]) < target) {
        first = mid + 1;
      } else {
        last = mid;
      }
    }
    if (first == bps.size()) {
      theta = hi_bp;  // everything saturates at 1; sum = n >= target
    } else {
      hi_bp = bps[first];
      lo_bp = first == 0 ? 0.0 : bps[first - 1];
      const double s_lo = clipped_sum(lo_bp);
      const double s_hi = clipped_sum(hi_bp);
      theta = s_hi > s_lo
                  ? lo_bp + (target - s_lo) * (hi_bp - lo_bp) / (s_hi - s_lo)
                  : hi_bp;
      theta = std::clamp(theta, lo_bp, hi_bp);
      if (clipped_sum(theta) < target) {
        // Accumulation rounding left us short; bisect up to the smallest
        // shift in the segment that meets the target.
        double lo = theta, hi = hi_bp;
        for (int it = 0; it < 64 && hi > lo; ++it) {
          const double mid = lo + 0.5 * (hi - lo);
          if (clipped_sum(mid) < target) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        theta = hi;
      }
    }
  }

  WeightVector out;
  out.q.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.q[i] = std::clamp(q_raw[i] + theta, 0.0, 1.0);
  }
  return out;
}

InfeasibleRemovalError::InfeasibleRemovalError(WeightVector best,
                                               double residual_in,
                                               int iterations_in)
    : std::runtime_error("soft outlier removal: infeasible or unconverged"),
      best_q(std::move(best)),
      residual(residual_in),
      iterations(iterations_in) {}

RemovalResult soft_outlier_removal(const LearnerView& view,
                                   const RemovalParams& params) {
  params.validate();
  const std::size_t n = view.size();
  if (n == 0) {
    throw std::invalid_argument("soft_outlier_removal: empty dataset");
  }

  const double cap = params.sigma_bar * params.sigma_bar;
  const double stop = cap * params.feas_tol;

  RemovalResult res;
  res.q = WeightVector::ones(n);

  WeightVector best_q = res.q;
  double best_violation = std::numeric_limits<double>::infinity();

  for (int t = 1; t <= params.max_iters; ++t) {
    const TopDirection top = top_direction(view, res.q);
    res.lambda_trace.push_back(top.lambda);
    const double violation = std::max(0.0, top.lambda - cap);
    if (violation < best_violation) {
      best_violation = violation;
      best_q = res.q;
    }
    if (violation <= stop) {
      res.q = best_q;
      res.iterations = t - 1;
      res.final_violation = best_violation;
      return res;
    }

    // Subgradient of q -> lambda_max(M(q)) at the top eigenvector.
    Vec g(n, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    double g_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double proj = dot(top.w, view.x(i));
      g[i] = proj * proj * inv_n;
      g_sq += g[i] * g[i];
    }
    if (g_sq == 0.0) break;  // violated yet gradient-free: cannot improve

    const double step = cap / (g_sq * std::sqrt(static_cast<double>(t)));
    Vec moved(res.q.q);
    add_scaled(moved, -step, g);
    res.q = project_weights(moved, params.xi);
  }

  throw InfeasibleRemovalError(best_q, best_violation, params.max_iters);
}

CertificateReport verify_feasibility(const LearnerView& view,
                                     const WeightVector& q,
                                     const RemovalParams& params,
                                     std::uint64_t fresh_seed) {
  params.validate();
  if (q.size() != view.size()) {
    throw std::invalid_argument("verify_feasibility: length mismatch");
  }
  CertificateReport report;

  double lo = 0.0, hi = 0.0;
  for (double v : q.q) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  report.append(CertificateEntry{
      "box", lo >= -kBoxTol && hi <= 1.0 + kBoxTol, lo, hi,
      "min/max entry against [0,1] within 1e-12"});

  const double target = (1.0 - params.xi) * static_cast<double>(view.size());
  report.append(CertificateEntry{"sum", q.sum() >= target - 1e-9, q.sum(),
                                 target, "sum q_i >= (1-xi) n within 1e-9"});

  PowerIterationConfig cfg;
  cfg.seed = fresh_seed;
  const TopEigen e = top_eigen(weighted_second_moment(view, q), cfg);
  const double cap = params.sigma_bar * params.sigma_bar;
  report.append(CertificateEntry{
      "spectral", e.lambda <= cap * (1.0 + params.feas_tol), e.lambda,
      cap * (1.0 + params.feas_tol),
      "lambda_max(M(q)) <= sigma_bar^2 (1 + feas_tol), fresh start"});
  return report;
}

}  // namespace malice
