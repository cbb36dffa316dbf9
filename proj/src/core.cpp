#include "malice/core.hpp"

#include <cmath>
#include <stdexcept>

namespace malice {

void Dataset::add(LabeledSample s) {
  if (s.y != 1 && s.y != -1) {
    throw std::invalid_argument("Dataset::add: label must be -1 or +1");
  }
  if (samples_.empty() && dim_ == 0) {
    dim_ = s.x.size();
  }
  if (s.x.size() != dim_) {
    throw std::invalid_argument("Dataset::add: dimension mismatch");
  }
  for (double c : s.x) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("Dataset::add: non-finite coordinate");
    }
  }
  samples_.push_back(std::move(s));
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out(dim_);
  for (std::size_t i : indices) {
    if (i >= samples_.size()) {
      throw std::out_of_range("Dataset::subset: index out of range");
    }
    out.add(samples_[i]);
  }
  return out;
}

std::vector<std::size_t> Dataset::indices_with(Provenance p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].provenance == p) out.push_back(i);
  }
  return out;
}

std::size_t Dataset::count(Provenance p) const {
  std::size_t n = 0;
  for (const auto& s : samples_) {
    if (s.provenance == p) ++n;
  }
  return n;
}

double WeightVector::sum() const {
  double s = 0.0;
  for (double v : q) s += v;
  return s;
}

void WeightVector::check_box(double tol) const {
  for (double v : q) {
    if (!(v >= -tol && v <= 1.0 + tol)) {
      throw std::invalid_argument("WeightVector: entry outside [0,1]");
    }
  }
}

WeightVector WeightVector::subset(
    const std::vector<std::size_t>& indices) const {
  WeightVector out;
  out.q.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= q.size()) {
      throw std::out_of_range("WeightVector::subset: index out of range");
    }
    out.q.push_back(q[i]);
  }
  return out;
}

Halfspace Halfspace::from_unit(Vec w, double tol) {
  const double n = norm(w);
  if (std::abs(n - 1.0) > tol) {
    throw std::invalid_argument("Halfspace: vector is not unit norm");
  }
  return Halfspace{std::move(w)};
}

Halfspace Halfspace::normalized(const Vec& v) {
  const double n = norm(v);
  if (n == 0.0) {
    throw std::invalid_argument("Halfspace: cannot normalize zero vector");
  }
  return Halfspace{scaled(v, 1.0 / n)};
}

PancakeSpec PancakeSpec::make(Halfspace w, double tau, LabeledSample center) {
  if (tau < 0.0) throw std::invalid_argument("PancakeSpec: tau must be >= 0");
  if (w.dim() != center.x.size()) {
    throw std::invalid_argument("PancakeSpec: dimension mismatch");
  }
  return PancakeSpec{std::move(w), tau, std::move(center)};
}

void AlgorithmParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("params: gamma must be > 0");
  if (!(r > 0.0)) throw std::invalid_argument("params: r must be > 0");
  if (!(eta0 > 0.0 && eta0 < 0.5)) {
    throw std::invalid_argument("params: eta0 must be in (0, 1/2)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("params: epsilon must be in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("params: delta must be in (0, 1)");
  }
}

double AlgorithmParams::sigma_bar(std::size_t d) const {
  if (d == 0) throw std::invalid_argument("sigma_bar: dimension must be >= 1");
  return std::sqrt(2.0 * (1.0 / static_cast<double>(d) + r * r));
}

double pruning_radius(double r, std::size_t n, double delta) {
  if (n == 0) throw std::invalid_argument("pruning_radius: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("pruning_radius: delta must be in (0, 1)");
  }
  return r + std::log(9.0 * static_cast<double>(n) / delta);
}

double hinge_loss(const Vec& w, const LabeledSample& s) {
  if (w.size() != s.x.size()) {
    throw std::invalid_argument("hinge_loss: dimension mismatch");
  }
  const double z = s.y * dot(w, s.x);
  return z >= 1.0 ? 0.0 : 1.0 - z;
}

double weighted_hinge_loss(const Vec& w, const WeightVector& q,
                           const LearnerView& view) {
  if (q.size() != view.size()) {
    throw std::invalid_argument("weighted_hinge_loss: length mismatch");
  }
  if (view.size() > 0 && w.size() != view.dim()) {
    throw std::invalid_argument("weighted_hinge_loss: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    const double z = view.y(i) * dot(w, view.x(i));
    if (z < 1.0) total += q.q[i] * (1.0 - z);
  }
  return total;
}

double weighted_hinge_loss(const Vec& w, const WeightVector& q,
                           const Dataset& data) {
  return weighted_hinge_loss(w, q, LearnerView(data));
}

Vec subgradient(const Vec& w, const WeightVector& q, const LearnerView& view) {
  if (q.size() != view.size()) {
    throw std::invalid_argument("subgradient: length mismatch");
  }
  if (view.size() > 0 && w.size() != view.dim()) {
    throw std::invalid_argument("subgradient: dimension mismatch");
  }
  Vec g(w.size(), 0.0);
  for (std::size_t i = 0; i < view.size(); ++i) {
    const double z = view.y(i) * dot(w, view.x(i));
    if (z <= 1.0) {
      add_scaled(g, -q.q[i] * view.y(i), view.x(i));
    }
  }
  return g;
}

Vec subgradient(const Vec& w, const WeightVector& q, const Dataset& data) {
  return subgradient(w, q, LearnerView(data));
}

double margin(const Halfspace& w_star, const Dataset& data, bool clean_only) {
  double best = 0.0;
  bool any = false;
  for (const auto& s : data) {
    if (clean_only && s.provenance != Provenance::Clean) continue;
    const double m = s.y * dot(w_star.w, s.x);
    if (!any || m < best) {
      best = m;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("margin: empty selection");
  return best;
}

bool in_pancake(const PancakeSpec& p, const LabeledSample& s) {
  if (s.x.size() != p.w.dim()) {
    throw std::invalid_argument("in_pancake: dimension mismatch");
  }
  const double center_proj = p.center.y * dot(p.w.w, p.center.x);
  const double test_proj = s.y * dot(p.w.w, s.x);
  return std::abs(test_proj - center_proj) <= p.tau;
}

}  // namespace malice
