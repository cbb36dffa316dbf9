#ifndef MALICE_DATAGEN_HPP
#define MALICE_DATAGEN_HPP

#include <cstdint>
#include <functional>

#include "malice/core.hpp"
#include "malice/rng.hpp"

namespace malice {

enum class ComponentFamily { Gaussian, UniformBall };

/// One mixture component with mean mu and covariance (cov_scale^2 / d) * I.
struct MixtureComponent {
  ComponentFamily family = ComponentFamily::Gaussian;
  Vec mu;
  double cov_scale = 1.0;  // in (0, 1]
};

/// Uniform mixture of log-concave components with bounded means and
/// covariances: ||mu_j|| <= r and Sigma_j = (s_j^2/d) I with s_j <= 1.
struct MixtureSpec {
  std::size_t d = 0;
  double r = 0.0;
  std::vector<MixtureComponent> components;

  std::size_t k() const { return components.size(); }
  void validate() const;
};

/// Mixture whose component means all sit at distance >= zeta from the
/// decision boundary of w_star.
struct SeparableMixtureSpec {
  MixtureSpec base;
  double zeta = 0.0;
  Halfspace w_star;
  bool strict_theorem = false;  // additionally require zeta <= r <= 1.5 zeta

  void validate() const;
};

/// Draws one labeled clean sample per call from the engine it is handed.
using CleanSampler = std::function<LabeledSample(RngEngine&)>;

/// One clean draw: uniform component index, instance from that component,
/// label sign(w_star . x) with ties +1.
LabeledSample draw_mixture_sample(const MixtureSpec& spec,
                                  const Halfspace& w_star, RngEngine& eng);

/// Sampler over the mixture conditioned on |w_star . x| >= margin_gamma
/// (margin_gamma = 0 gives the raw mixture). Rejection sampling; throws if a
/// draw does not land in 10^6 attempts.
CleanSampler make_mixture_sampler(MixtureSpec spec, Halfspace w_star,
                                  double margin_gamma = 0.0);

Dataset sample_mixture(const MixtureSpec& spec, const Halfspace& w_star,
                       std::size_t n, std::uint64_t seed);

struct MarginFilterResult {
  Dataset data;
  double rejection_fraction = 0.0;
};

/// Rejection-filters samples with |w_star . x| < gamma. Throws when more
/// than 99% of the input would be rejected.
MarginFilterResult enforce_margin(const Dataset& raw, const Halfspace& w_star,
                                  double gamma);

/// Places k component means with |w_star . mu_j| = zeta and ||mu_j|| <= r,
/// alternating sides of the hyperplane when k >= 2. The in-plane offset is
/// drawn deterministically from the seed. Throws if zeta > r.
SeparableMixtureSpec make_separable_spec(std::size_t d, std::size_t k,
                                         double zeta, double r,
                                         const Halfspace& w_star,
                                         std::uint64_t seed);

}  // namespace malice

#endif
