#include "malice/adversary.hpp"

#include <cmath>
#include <stdexcept>

namespace malice {

void AdversarySpec::validate() const {
  if (!(eta >= 0.0 && eta < 0.5)) {
    throw std::invalid_argument("adversary: eta must be in [0, 1/2)");
  }
  if (direction) {
    if (std::abs(norm(*direction) - 1.0) > kUnitNormTol) {
      throw std::invalid_argument("adversary: direction must be unit norm");
    }
  }
  if (magnitude < 0.0) {  // 0 selects the strategy default
    throw std::invalid_argument("adversary: magnitude must be positive");
  }
}

const char* strategy_name(AttackStrategy s) {
  switch (s) {
    case AttackStrategy::Aligned:
      return "aligned";
    case AttackStrategy::CleanMimic:
      return "clean_mimic";
    case AttackStrategy::BoundaryFlip:
      return "boundary_flip";
    case AttackStrategy::LargeNorm:
      return "large_norm";
  }
  throw std::invalid_argument("unknown strategy");
}

AttackStrategy strategy_from_name(const std::string& name) {
  if (name == "aligned") return AttackStrategy::Aligned;
  if (name == "clean_mimic") return AttackStrategy::CleanMimic;
  if (name == "boundary_flip") return AttackStrategy::BoundaryFlip;
  if (name == "large_norm") return AttackStrategy::LargeNorm;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

Vec default_attack_direction(const Halfspace& w_star) {
  const std::size_t d = w_star.dim();
  if (d < 2) {
    throw std::invalid_argument(
        "default_attack_direction: need d >= 2 for an orthogonal direction");
  }
  // Orthogonalize the first basis vector far from w_star against w_star.
  std::size_t pivot = 0;
  for (std::size_t j = 1; j < d; ++j) {
    if (std::abs(w_star.w[j]) < std::abs(w_star.w[pivot])) pivot = j;
  }
  Vec u(d, 0.0);
  u[pivot] = 1.0;
  add_scaled(u, -w_star.w[pivot], w_star.w);
  return normalized(u);
}

namespace {

struct FixedAttack {
  Vec x;
  int y;
};

FixedAttack make_fixed_attack(const AdversarySpec& spec,
                              const Halfspace& w_star, std::size_t n,
                              const AlgorithmParams& params) {
  Vec u = spec.direction ? *spec.direction : default_attack_direction(w_star);
  if (u.size() != w_star.dim()) {
    throw std::invalid_argument("adversary: direction dimension mismatch");
  }
  double magnitude = spec.magnitude;
  if (magnitude <= 0.0) {
    const double radius = pruning_radius(params.r, n, params.delta);
    magnitude = spec.strategy == AttackStrategy::LargeNorm
                    ? 10.0 * radius
                    : radius - 0.01;  // just under the pruning threshold
  }
  const double side = dot(w_star.w, u);
  int y = side != 0.0 ? -sign_tie_positive(side) : 1;
  if (spec.flip_label) y = -y;
  return FixedAttack{scaled(u, magnitude), y};
}

}  // namespace

Dataset corrupt(const CleanSampler& clean_sampler, const AdversarySpec& spec,
                const Halfspace& w_star, std::size_t n,
                const AlgorithmParams& params, std::uint64_t seed) {
  spec.validate();
  params.validate();
  if (n == 0) throw std::invalid_argument("corrupt: n must be >= 1");

  FixedAttack fixed{};
  const bool uses_fixed = spec.strategy == AttackStrategy::Aligned ||
                          spec.strategy == AttackStrategy::LargeNorm;
  if (uses_fixed) fixed = make_fixed_attack(spec, w_star, n, params);

  RngEngine eng = make_stream(seed, 0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  Dataset data(w_star.dim());
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(eng) < spec.eta) {
      LabeledSample dirty;
      switch (spec.strategy) {
        case AttackStrategy::Aligned:
        case AttackStrategy::LargeNorm:
          dirty.x = fixed.x;
          dirty.y = fixed.y;
          break;
        case AttackStrategy::CleanMimic:
          dirty = clean_sampler(eng);
          break;
        case AttackStrategy::BoundaryFlip: {
          dirty = clean_sampler(eng);
          dirty.y = -sign_tie_positive(dot(w_star.w, dirty.x));
          break;
        }
      }
      dirty.provenance = Provenance::Dirty;
      data.add(std::move(dirty));
    } else {
      LabeledSample clean = clean_sampler(eng);
      clean.provenance = Provenance::Clean;
      data.add(std::move(clean));
    }
  }
  return data;
}

double empirical_noise_rate(const Dataset& data) {
  if (data.empty()) {
    throw std::invalid_argument("empirical_noise_rate: empty dataset");
  }
  return double(data.count(Provenance::Dirty)) / double(data.size());
}

}  // namespace malice
