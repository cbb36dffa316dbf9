#ifndef MALICE_CORE_HPP
#define MALICE_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "malice/linalg.hpp"

namespace malice {

// Default numeric tolerances. Validation entry points take these as
// defaulted arguments so callers can override without global state.
inline constexpr double kUnitNormTol = 1e-10;
inline constexpr double kBoxTol = 1e-12;
inline constexpr double kSubgradientSlack = 1e-9;

/// sign with the tie sign(0) = +1.
inline int sign_tie_positive(double v) { return v >= 0.0 ? 1 : -1; }

enum class Provenance { Clean, Dirty };

/// A labeled instance. Provenance is simulation-side ground truth; learner
/// code must go through LearnerView, which cannot see it.
struct LabeledSample {
  Vec x;
  int y = 1;  // in {-1, +1}
  Provenance provenance = Provenance::Clean;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dim) : dim_(dim) {}

  /// Validates the label, dimension and finiteness of coordinates.
  void add(LabeledSample s);

  std::size_t size() const { return samples_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return samples_.empty(); }

  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }

  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

  Dataset subset(const std::vector<std::size_t>& indices) const;
  std::vector<std::size_t> indices_with(Provenance p) const;
  std::size_t count(Provenance p) const;

 private:
  std::size_t dim_ = 0;
  std::vector<LabeledSample> samples_;
};

/// The learner-facing window onto a dataset: instances and labels only.
/// Algorithm modules take this type, so provenance cannot leak into them.
class LearnerView {
 public:
  explicit LearnerView(const Dataset& data) : data_(&data) {}

  std::size_t size() const { return data_->size(); }
  std::size_t dim() const { return data_->dim(); }
  const Vec& x(std::size_t i) const { return (*data_)[i].x; }
  int y(std::size_t i) const { return (*data_)[i].y; }

 private:
  const Dataset* data_;
};

/// Per-sample weights q in [0,1]^n, indexed like the dataset they were
/// produced for.
struct WeightVector {
  Vec q;

  static WeightVector ones(std::size_t n) { return WeightVector{Vec(n, 1.0)}; }

  std::size_t size() const { return q.size(); }
  double sum() const;
  /// Throws std::invalid_argument if any entry leaves [0,1] by more than tol.
  void check_box(double tol = kBoxTol) const;
  WeightVector subset(const std::vector<std::size_t>& indices) const;
};

/// Unit-norm halfspace normal. Use from_unit for vectors that should already
/// be normalized, normalized() to normalize an arbitrary nonzero vector.
struct Halfspace {
  Vec w;

  static Halfspace from_unit(Vec w, double tol = kUnitNormTol);
  static Halfspace normalized(const Vec& v);

  std::size_t dim() const { return w.size(); }
};

struct PancakeSpec {
  Halfspace w;
  double tau = 0.0;  // half-width, >= 0
  LabeledSample center;

  static PancakeSpec make(Halfspace w, double tau, LabeledSample center);
};

/// Inputs of the end-to-end learner. The derived quantities xi = 2*eta0 and
/// sigma_bar = sqrt(2(1/d + r^2)) are recomputed on demand, never stored.
struct AlgorithmParams {
  double gamma = 0.0;    // margin, > 0
  double r = 0.0;        // mean-norm bound, > 0
  double eta0 = 0.0;     // noise-rate upper bound, in (0, 1/2)
  double epsilon = 0.0;  // target error, in (0, 1)
  double delta = 0.0;    // failure probability, in (0, 1)

  void validate() const;
  double xi() const { return 2.0 * eta0; }
  double sigma_bar(std::size_t d) const;
};

/// Norm threshold of the pruning step: r + log(9n/delta).
double pruning_radius(double r, std::size_t n, double delta);

// ---- elementary evaluations ----

/// max{0, 1 - y w.x}
double hinge_loss(const Vec& w, const LabeledSample& s);

/// sum_i q_i * hinge_loss(w, s_i)
double weighted_hinge_loss(const Vec& w, const WeightVector& q,
                           const LearnerView& view);
double weighted_hinge_loss(const Vec& w, const WeightVector& q,
                           const Dataset& data);

/// The fixed subgradient selection g = -sum_{i: y_i w.x_i <= 1} q_i y_i x_i.
/// At kinks (y w.x = 1 exactly) the active branch -1 is chosen, so the
/// operation is deterministic.
Vec subgradient(const Vec& w, const WeightVector& q, const LearnerView& view);
Vec subgradient(const Vec& w, const WeightVector& q, const Dataset& data);

/// min over selected samples of y * (w_star . x). clean_only restricts to
/// provenance Clean. Throws if the selection is empty.
double margin(const Halfspace& w_star, const Dataset& data, bool clean_only);

/// |y' (w.x') - y (w.x_center)| <= tau
bool in_pancake(const PancakeSpec& p, const LabeledSample& s);

}  // namespace malice

#endif
