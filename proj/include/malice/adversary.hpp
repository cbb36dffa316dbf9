#ifndef MALICE_ADVERSARY_HPP
#define MALICE_ADVERSARY_HPP

#include <cstdint>
#include <optional>

#include "malice/core.hpp"
#include "malice/datagen.hpp"

namespace malice {

enum class AttackStrategy { Aligned, CleanMimic, BoundaryFlip, LargeNorm };

/// Oblivious malicious-noise strategy. The per-draw corruption coin is
/// i.i.d. Bernoulli(eta); the strategy itself is fixed before learning but
/// may read the learner's parameter set (Aligned reads the pruning radius).
struct AdversarySpec {
  double eta = 0.0;  // in [0, 1/2)
  AttackStrategy strategy = AttackStrategy::Aligned;
  std::optional<Vec> direction;  // unit vector; default: orthogonal to w_star
  double magnitude = 0.0;        // <= 0 selects the strategy default
  bool flip_label = false;       // negates the Aligned/LargeNorm dirty label

  void validate() const;
};

const char* strategy_name(AttackStrategy s);
AttackStrategy strategy_from_name(const std::string& name);

/// Deterministic unit vector orthogonal to w_star (used as the default
/// attack direction).
Vec default_attack_direction(const Halfspace& w_star);

/// Simulates n draws from EX(D, w_star, eta): with probability eta the draw
/// is a dirty sample built by the strategy (provenance Dirty), otherwise a
/// clean draw from the sampler (provenance Clean). Deterministic per seed.
Dataset corrupt(const CleanSampler& clean_sampler, const AdversarySpec& spec,
                const Halfspace& w_star, std::size_t n,
                const AlgorithmParams& params, std::uint64_t seed);

/// Fraction of Dirty provenance; throws on an empty dataset.
double empirical_noise_rate(const Dataset& data);

}  // namespace malice

#endif
