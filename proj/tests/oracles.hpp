#ifndef MALICE_TESTS_ORACLES_HPP
#define MALICE_TESTS_ORACLES_HPP

// Test-only reference implementations. Each one checks a library result via
// an independent route (finite differences, dense eigendecomposition, naive
// enumeration, KKT enumeration, duality), so none of them may call into the
// code path it verifies.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "malice/core.hpp"
#include "malice/linalg.hpp"

namespace oracles {

using malice::Dataset;
using malice::Vec;
using malice::WeightVector;

/// Central finite differences of the weighted hinge loss, h = 1e-6.
inline Vec fd_gradient(const Vec& w, const WeightVector& q,
                       const Dataset& data, double h = 1e-6) {
  Vec g(w.size(), 0.0);
  Vec wp = w;
  for (std::size_t j = 0; j < w.size(); ++j) {
    wp[j] = w[j] + h;
    const double up = malice::weighted_hinge_loss(wp, q, data);
    wp[j] = w[j] - h;
    const double dn = malice::weighted_hinge_loss(wp, q, data);
    wp[j] = w[j];
    g[j] = (up - dn) / (2.0 * h);
  }
  return g;
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(malice::SymMatrix a,
                                              int max_sweeps = 64) {
  const std::size_t n = a.dim();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a.at(i, j) * a.at(i, j);
    }
    if (off < 1e-28) break;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double apq = a.at(i, j);
        if (std::abs(apq) < 1e-300) continue;
        const double app = a.at(i, i);
        const double aqq = a.at(j, j);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const double aik = a.at(i, k);
          const double ajk = a.at(j, k);
          a.at(i, k) = c * aik - s * ajk;
          a.at(k, i) = a.at(i, k);
          a.at(j, k) = s * aik + c * ajk;
          a.at(k, j) = a.at(j, k);
        }
        a.at(i, i) = app - t * apq;
        a.at(j, j) = aqq + t * apq;
        a.at(i, j) = 0.0;
        a.at(j, i) = 0.0;
      }
    }
  }
  std::vector<double> evals(n);
  for (std::size_t i = 0; i < n; ++i) evals[i] = a.at(i, i);
  std::sort(evals.begin(), evals.end());
  return evals;
}

inline double jacobi_max_eigenvalue(const malice::SymMatrix& a) {
  return jacobi_eigenvalues(a).back();
}

/// Naive sign-vector enumeration of the linear sum norm: walks every a in
/// {-1,+1}^m and recomputes the sum from scratch.
inline double enumerate_sum_norm(const Dataset& sub, const WeightVector& q) {
  const std::size_t m = sub.size();
  if (m == 0) return 0.0;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
    Vec s(sub.dim(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double a = (mask >> i) & 1 ? 1.0 : -1.0;
      malice::add_scaled(s, a * q.q[i], sub[i].x);
    }
    best = std::max(best, malice::norm(s));
  }
  return best;
}

/// Projection onto {q in [0,1]^n : sum q >= s} by KKT active-set
/// enumeration; exponential in n, so n <= ~10.
inline Vec project_qp_oracle(const Vec& q0, double target_sum) {
  const std::size_t n = q0.size();
  const double tol = 1e-12;

  Vec best;
  double best_dist = std::numeric_limits<double>::infinity();

  const auto consider = [&](const Vec& q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (q[i] < -tol || q[i] > 1.0 + tol) return;
      sum += q[i];
    }
    if (sum < target_sum - 1e-9) return;
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist += (q[i] - q0[i]) * (q[i] - q0[i]);
    }
    if (dist < best_dist) {
      best_dist = dist;
      best = q;
    }
  };

  // Sum constraint inactive: plain box clipping.
  {
    Vec q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = std::clamp(q0[i], 0.0, 1.0);
    consider(q);
  }

  // Sum constraint active: enumerate {at0, at1, free}^n assignments, solve
  // for the multiplier mu, verify stationarity and dual feasibility.
  std::vector<int> state(n, 0);
  const std::uint64_t total = [&] {
    std::uint64_t t = 1;
    for (std::size_t i = 0; i < n; ++i) t *= 3;
    return t;
  }();
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = int(c % 3);  // 0 = at0, 1 = at1, 2 = free
      c /= 3;
    }
    double fixed_sum = 0.0, free_sum = 0.0;
    std::size_t n_free = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) fixed_sum += 1.0;
      if (state[i] == 2) {
        free_sum += q0[i];
        ++n_free;
      }
    }
    double mu;
    if (n_free == 0) {
      if (std::abs(fixed_sum - target_sum) > 1e-9) continue;
      mu = 0.0;  // any mu >= 0; check bound conditions with mu = 0 upward
    } else {
      mu = (target_sum - fixed_sum - free_sum) / double(n_free);
    }
    if (mu < -tol) continue;
    bool ok = true;
    Vec q(n);
    for (std::size_t i = 0; i < n && ok; ++i) {
      const double shifted = q0[i] + mu;
      switch (state[i]) {
        case 0:
          if (shifted > tol) ok = false;
          q[i] = 0.0;
          break;
        case 1:
          if (shifted < 1.0 - tol) ok = false;
          q[i] = 1.0;
          break;
        default:
          if (shifted < -tol || shifted > 1.0 + tol) ok = false;
          q[i] = shifted;
      }
    }
    if (ok) consider(q);
  }
  return best;
}

/// Standard normal CDF.
inline double gaussian_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Lower bound on min_{||w|| <= radius} sum q_i max(0, 1 - y_i w.x_i) via
/// projected gradient ascent on the dual
///   max_{0 <= alpha <= q} sum alpha_i - radius * || sum alpha_i y_i x_i ||.
/// Any feasible alpha gives a valid bound (weak duality), so the returned
/// value can only make the optimality check stricter.
inline double dual_hinge_lower_bound(const Dataset& data,
                                     const WeightVector& q, double radius,
                                     int iters = 200000) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  Vec alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = 0.5 * q.q[i];

  const auto dual_value = [&](const Vec& a) {
    Vec v(d, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      malice::add_scaled(v, a[i] * data[i].y, data[i].x);
      sum += a[i];
    }
    return sum - radius * malice::norm(v);
  };

  double best = dual_value(alpha);
  Vec grad(n);
  for (int t = 1; t <= iters; ++t) {
    Vec v(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      malice::add_scaled(v, alpha[i] * data[i].y, data[i].x);
    }
    const double vn = malice::norm(v);
    for (std::size_t i = 0; i < n; ++i) {
      const double dnorm =
          vn > 0.0 ? data[i].y * malice::dot(v, data[i].x) / vn : 0.0;
      grad[i] = 1.0 - radius * dnorm;
    }
    const double step = 0.5 / std::sqrt(double(t));
    for (std::size_t i = 0; i < n; ++i) {
      alpha[i] = std::clamp(alpha[i] + step * grad[i], 0.0, q.q[i]);
    }
    best = std::max(best, dual_value(alpha));
  }
  return best;
}

inline double angle_between(const Vec& a, const Vec& b) {
  const double c = malice::dot(a, b) / (malice::norm(a) * malice::norm(b));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace oracles

#endif
