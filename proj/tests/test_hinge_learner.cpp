#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "malice/adversary.hpp"
#include "malice/hinge_learner.hpp"
#include "oracles.hpp"

using namespace malice;

namespace {

Halfspace basis_target(std::size_t d) {
  Vec w(d, 0.0);
  w[0] = 1.0;
  return Halfspace{w};
}

MixtureSpec standard_gaussian(std::size_t d, double r = 1.0) {
  MixtureSpec spec;
  spec.d = d;
  spec.r = r;
  spec.components.push_back(
      MixtureComponent{ComponentFamily::Gaussian, Vec(d, 0.0), 1.0});
  return spec;
}

Dataset single_sample_data() {
  Dataset data(2);
  data.add(LabeledSample{{1.0, 0.0}, 1});
  return data;
}

}  // namespace

TEST_CASE("prune threshold formula") {
  // r=0.1, n=3, delta=0.5: threshold = 0.1 + log(54)
  CHECK(pruning_radius(0.1, 3, 0.5) == doctest::Approx(4.0890).epsilon(1e-4));

  Dataset data(2);
  data.add(LabeledSample{{5.0, 0.0}, 1});
  data.add(LabeledSample{{1.2, 0.0}, 1});
  data.add(LabeledSample{{0.0, 1.0}, -1});
  const PruneResult res = prune(data, 0.1, 0.5);
  CHECK(res.kept.size() == 2);
  REQUIRE(res.removed.size() == 1);
  CHECK(res.removed[0] == 0);
}

TEST_CASE("prune is the identity when all norms are small") {
  Dataset data(2);
  data.add(LabeledSample{{0.5, 0.0}, 1});
  data.add(LabeledSample{{0.0, -0.5}, -1});
  const PruneResult res = prune(data, 1.0, 0.1);
  CHECK(res.kept.size() == 2);
  CHECK(res.removed.empty());
}

TEST_CASE("prune removes every large-norm adversarial point, keeps clean") {
  const std::size_t d = 20, n = 10000;
  const AlgorithmParams params{0.5, 1.0, 0.125, 0.25, 0.1};
  const auto spec = standard_gaussian(d);
  const Halfspace w_star = basis_target(d);
  const CleanSampler sampler = make_mixture_sampler(spec, w_star);

  int clean_intact_seeds = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    AdversarySpec adv{0.1, AttackStrategy::LargeNorm, std::nullopt, 0.0,
                      false};
    const Dataset data = corrupt(sampler, adv, w_star, n, params, seed);
    const PruneResult res = prune(data, params.r, params.delta);
    // Every dirty sample must go (its norm is 10x the threshold).
    CHECK(res.kept.count(Provenance::Dirty) == 0);
    if (res.kept.count(Provenance::Clean) == data.count(Provenance::Clean)) {
      ++clean_intact_seeds;
    }
  }
  CHECK(clean_intact_seeds >= 9);
}

TEST_CASE("prune error paths") {
  Dataset data(2);
  data.add(LabeledSample{{100.0, 0.0}, 1});
  CHECK_THROWS_AS(prune(data, 0.1, 0.5), std::runtime_error);
  CHECK_THROWS_AS(prune(Dataset(2), 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("single-sample minimization reaches the zero-loss region") {
  const Dataset data = single_sample_data();
  const WeightVector q = WeightVector::ones(1);
  const LearnerOutput out =
      minimize_weighted_hinge(LearnerView(data), q, 0.5);
  // Constraint radius 1/gamma = 2 covers v = (2, 0) with zero loss.
  CHECK(weighted_hinge_loss(out.v_hat, q, LearnerView(data)) <= 1e-8);
  CHECK(out.v_hat[0] * 1.0 >= 1.0 - 1e-6);
  CHECK(norm(out.v_hat) <= 2.0 + 1e-9);
  CHECK(out.status == SolverStatus::Converged);
}

TEST_CASE("separable data reaches near-zero loss") {
  const std::size_t d = 10, n = 400;
  const double gamma = 0.3;
  const auto spec = standard_gaussian(d);
  const Halfspace w_star = basis_target(d);
  RngEngine eng = make_stream(21, 0);
  const CleanSampler sampler = make_mixture_sampler(spec, w_star, gamma);
  Dataset data(d);
  for (std::size_t i = 0; i < n; ++i) data.add(sampler(eng));

  const WeightVector q = WeightVector::ones(n);
  const LearnerOutput out =
      minimize_weighted_hinge(LearnerView(data), q, gamma);
  CHECK(weighted_hinge_loss(out.v_hat, q, LearnerView(data)) <=
        1e-3 * double(n));
}

TEST_CASE("solver objective is certified near-optimal by the dual") {
  // Random non-separable instance; the dual value lower-bounds the optimum,
  // so primal(v_hat) - dual(alpha) bounds the solver's suboptimality.
  RngEngine eng = make_stream(29, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  const std::size_t n = 20, d = 3;
  Dataset data(d);
  WeightVector q{Vec(n)};
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(d);
    for (double& c : x) c = gauss(eng);
    data.add(LabeledSample{std::move(x), i % 2 ? 1 : -1});
    q.q[i] = unif(eng);
  }
  const double gamma = 1.0;

  OptimizerConfig opt;
  opt.max_iters = 400000;
  opt.patience = 400000;  // run the full budget on this tiny instance
  const LearnerOutput out =
      minimize_weighted_hinge(LearnerView(data), q, gamma, opt);
  const double primal = weighted_hinge_loss(out.v_hat, q, LearnerView(data));
  const double dual = oracles::dual_hinge_lower_bound(data, q, 1.0 / gamma);
  CHECK(primal >= dual - 1e-9);  // weak duality sanity
  CHECK(primal - dual <= 1e-4);
}

TEST_CASE("sigma_bar formula spot value") {
  const AlgorithmParams p{0.5, 0.4, 0.125, 0.25, 0.05};
  CHECK(p.sigma_bar(100) == doctest::Approx(std::sqrt(0.34)).epsilon(1e-12));
}

TEST_CASE("learn on clean separable data recovers the halfspace") {
  const std::size_t d = 10, n = 1500;
  const AlgorithmParams params{0.4, 0.8, 0.125, 0.25, 0.05};
  const auto spec = standard_gaussian(d, params.r);
  const Halfspace w_star = basis_target(d);
  const CleanSampler sampler =
      make_mixture_sampler(spec, w_star, params.gamma);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngEngine eng = make_stream(seed, 0);
    Dataset train(d);
    for (std::size_t i = 0; i < n; ++i) train.add(sampler(eng));
    const LearnerOutput out = learn(train, params);
    CHECK(error_rate(out.w_hat, train) == 0.0);
    CHECK(norm(out.v_hat) <= 1.0 / params.gamma + 1e-9);
    // Weights stayed at the ideal all-ones solution on clean data.
    CHECK(out.q.sum() == doctest::Approx(double(train.size())));
  }
}

TEST_CASE("vanilla flag forces q = all-ones and matches direct call") {
  const std::size_t d = 6, n = 300;
  const AlgorithmParams params{0.4, 0.8, 0.125, 0.25, 0.05};
  const auto spec = standard_gaussian(d, params.r);
  const Halfspace w_star = basis_target(d);
  const CleanSampler sampler =
      make_mixture_sampler(spec, w_star, params.gamma);
  RngEngine eng = make_stream(3, 0);
  Dataset train(d);
  for (std::size_t i = 0; i < n; ++i) train.add(sampler(eng));

  const LearnerOutput vanilla = learn(train, params, {}, /*vanilla=*/true);
  for (double v : vanilla.q.q) CHECK(v == 1.0);

  const PruneResult pr = prune(train, params.r, params.delta);
  const LearnerOutput direct = minimize_weighted_hinge(
      LearnerView(pr.kept), WeightVector::ones(pr.kept.size()), params.gamma);
  CHECK(vanilla.v_hat == direct.v_hat);  // bit-identical path
}

TEST_CASE("learn is deterministic") {
  const std::size_t d = 5, n = 200;
  const AlgorithmParams params{0.4, 0.8, 0.2, 0.25, 0.05};
  const auto spec = standard_gaussian(d, params.r);
  const Halfspace w_star = basis_target(d);
  const CleanSampler sampler = make_mixture_sampler(spec, w_star);
  AdversarySpec adv{0.1, AttackStrategy::BoundaryFlip, std::nullopt, 0.0,
                    false};
  const Dataset train = corrupt(sampler, adv, w_star, n, params, 5);

  const LearnerOutput a = learn(train, params);
  const LearnerOutput b = learn(train, params);
  CHECK(a.v_hat == b.v_hat);
  CHECK(a.w_hat.w == b.w_hat.w);
  CHECK(a.q.q == b.q.q);
  CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("objective never exceeds the start point value sum(q)") {
  RngEngine eng = make_stream(47, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 50, d = 4;
    Dataset data(d);
    for (std::size_t i = 0; i < n; ++i) {
      Vec x(d);
      for (double& c : x) c = gauss(eng);
      data.add(LabeledSample{std::move(x), i % 2 ? 1 : -1});
    }
    const WeightVector q = WeightVector::ones(n);
    const LearnerOutput out =
        minimize_weighted_hinge(LearnerView(data), q, 0.7);
    CHECK(weighted_hinge_loss(out.v_hat, q, LearnerView(data)) <=
          q.sum() + 1e-12);
  }
}

TEST_CASE("scaled-loss route gives the same objective value") {
  // min over ||w|| <= 1/gamma of sum q max(0, 1 - y w.x) equals
  // min over ||w|| <= 1 of sum q max(0, 1 - (1/gamma) y w.x); the latter is
  // the standard hinge on data scaled by 1/gamma with a unit ball.
  RngEngine eng = make_stream(53, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = 30, d = 3;
  const double gamma = 0.5;
  Dataset data(d);
  Dataset scaled_data(d);
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(d);
    for (double& c : x) c = gauss(eng);
    const int y = i % 2 ? 1 : -1;
    data.add(LabeledSample{x, y});
    scaled_data.add(LabeledSample{scaled(x, 1.0 / gamma), y});
  }
  const WeightVector q = WeightVector::ones(n);
  OptimizerConfig opt;
  opt.max_iters = 200000;
  opt.patience = 200000;
  const LearnerOutput a = minimize_weighted_hinge(LearnerView(data), q, gamma,
                                                  opt);
  const LearnerOutput b =
      minimize_weighted_hinge(LearnerView(scaled_data), q, 1.0, opt);
  const double obj_a = weighted_hinge_loss(a.v_hat, q, LearnerView(data));
  const double obj_b =
      weighted_hinge_loss(b.v_hat, q, LearnerView(scaled_data));
  CHECK(std::abs(obj_a - obj_b) <= 1e-4 * std::max(1.0, obj_a));
}

TEST_CASE("degenerate minimizer returns e1 with the flag") {
  // Two opposed samples with equal weight: w = 0 is optimal and the best
  // iterate stays there.
  Dataset data(2);
  data.add(LabeledSample{{1.0, 0.0}, 1});
  data.add(LabeledSample{{1.0, 0.0}, -1});
  const WeightVector q = WeightVector::ones(2);
  const LearnerOutput out = minimize_weighted_hinge(LearnerView(data), q, 1.0);
  CHECK(out.zero_v_hat);
  CHECK(out.w_hat.w[0] == 1.0);
  CHECK(out.w_hat.w[1] == 0.0);
}

TEST_CASE("error_rate") {
  const std::size_t d = 4;
  const Halfspace w_star = basis_target(d);
  Dataset test(d);
  test.add(LabeledSample{{0.5, 0, 0, 0}, 1});
  test.add(LabeledSample{{-0.5, 0, 0, 0}, -1});
  CHECK(error_rate(w_star, test) == 0.0);
  const Halfspace flipped{scaled(w_star.w, -1.0)};
  CHECK(error_rate(flipped, test) == 1.0);
  CHECK_THROWS_AS(error_rate(w_star, Dataset(d)), std::invalid_argument);
}

TEST_CASE("error_rate matches the Gaussian angle formula") {
  const std::size_t d = 12;
  const auto spec = standard_gaussian(d);
  const Halfspace w_star = basis_target(d);
  const Dataset test = sample_mixture(spec, w_star, 100000, 61);

  RngEngine eng = make_stream(67, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Vec wv(d);
    for (double& c : wv) c = gauss(eng);
    const Halfspace w = Halfspace::normalized(wv);
    const double want = oracles::angle_between(w.w, w_star.w) / M_PI;
    CHECK(std::abs(error_rate(w, test) - want) < 0.01);
  }
}
