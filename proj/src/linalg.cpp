#include "malice/linalg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace malice {

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const Vec& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

double norm(const Vec& v) { return std::sqrt(squared_norm(v)); }

void add_scaled(Vec& y, double alpha, const Vec& x) {
  if (y.size() != x.size()) {
    throw std::invalid_argument("add_scaled: dimension mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec scaled(const Vec& v, double alpha) {
  Vec out(v);
  for (double& c : out) c *= alpha;
  return out;
}

Vec normalized(const Vec& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  return scaled(v, 1.0 / n);
}

void SymMatrix::add_outer(const Vec& x, double c) {
  if (x.size() != d_) {
    throw std::invalid_argument("add_outer: dimension mismatch");
  }
  for (std::size_t i = 0; i < d_; ++i) {
    const double cxi = c * x[i];
    double* row = &a_[i * d_];
    for (std::size_t j = 0; j < d_; ++j) row[j] += cxi * x[j];
  }
}

Vec SymMatrix::multiply(const Vec& v) const {
  if (v.size() != d_) {
    throw std::invalid_argument("SymMatrix::multiply: dimension mismatch");
  }
  Vec out(d_, 0.0);
  for (std::size_t i = 0; i < d_; ++i) {
    const double* row = &a_[i * d_];
    double s = 0.0;
    for (std::size_t j = 0; j < d_; ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

bool SymMatrix::is_zero() const {
  for (double c : a_) {
    if (c != 0.0) return false;
  }
  return true;
}

namespace {

// One power-iteration run from a given start; returns the Rayleigh quotient
// at the final normalized iterate.
TopEigen power_run(const SymMatrix& m, Vec v, int max_iters, double rel_tol) {
  const double vn = norm(v);
  if (vn == 0.0) return TopEigen{0.0, v};
  for (double& c : v) c /= vn;

  double lambda_prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec mv = m.multiply(v);
    const double lambda = dot(v, mv);
    const double mvn = norm(mv);
    if (mvn == 0.0) return TopEigen{0.0, v};  // v in the null space
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mv[i] / mvn;
    if (it > 0 &&
        std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda)) {
      return TopEigen{dot(v, m.multiply(v)), v};
    }
    lambda_prev = lambda;
  }
  return TopEigen{dot(v, m.multiply(v)), v};
}

Vec random_unit(std::size_t d, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(d);
  for (double& c : v) c = gauss(eng);
  const double n = norm(v);
  if (n == 0.0) {
    v.assign(d, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (double& c : v) c /= n;
  return v;
}

}  // namespace

TopEigen top_eigen(const SymMatrix& m, const PowerIterationConfig& cfg) {
  const std::size_t d = m.dim();
  if (d == 0) throw std::invalid_argument("top_eigen: empty matrix");
  if (m.is_zero()) {
    Vec e1(d, 0.0);
    e1[0] = 1.0;
    return TopEigen{0.0, e1};
  }

  std::mt19937_64 eng(cfg.seed);
  TopEigen best = power_run(m, random_unit(d, eng), cfg.max_iters, cfg.rel_tol);
  if (cfg.random_restart) {
    TopEigen alt = power_run(m, random_unit(d, eng), cfg.max_iters, cfg.rel_tol);
    if (alt.lambda > best.lambda) best = alt;
  }
  return best;
}

}  // namespace malice
