#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "malice/datagen.hpp"
#include "malice/io.hpp"
#include "oracles.hpp"

using namespace malice;

namespace {

Halfspace basis_target(std::size_t d) {
  Vec w(d, 0.0);
  w[0] = 1.0;
  return Halfspace{w};
}

MixtureSpec standard_gaussian(std::size_t d) {
  MixtureSpec spec;
  spec.d = d;
  spec.r = 1.0;
  spec.components.push_back(
      MixtureComponent{ComponentFamily::Gaussian, Vec(d, 0.0), 1.0});
  return spec;
}

SymMatrix empirical_second_moment(const Dataset& data) {
  SymMatrix m(data.dim());
  for (const auto& s : data) m.add_outer(s.x, 1.0 / double(data.size()));
  return m;
}

}  // namespace

TEST_CASE("labels follow the target and draws are deterministic") {
  const std::size_t d = 6;
  const auto spec = standard_gaussian(d);
  const Halfspace w_star = basis_target(d);
  const Dataset a = sample_mixture(spec, w_star, 500, 99);
  const Dataset b = sample_mixture(spec, w_star, 500, 99);
  const Dataset c = sample_mixture(spec, w_star, 500, 100);

  std::stringstream sa, sb, sc;
  write_dataset_csv(a, sa);
  write_dataset_csv(b, sb);
  write_dataset_csv(c, sc);
  CHECK(sa.str() == sb.str());  // byte-for-byte determinism
  CHECK(sa.str() != sc.str());

  for (const auto& s : a) {
    CHECK(s.y * dot(w_star.w, s.x) >= 0.0);
    CHECK(s.provenance == Provenance::Clean);
  }
}

TEST_CASE("isotropic component has top eigenvalue near 1/d") {
  const std::size_t d = 20;
  const auto spec = standard_gaussian(d);
  const Halfspace w_star = basis_target(d);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset data = sample_mixture(spec, w_star, 100000, seed);
    const double top = top_eigen(empirical_second_moment(data)).lambda;
    CHECK(top >= 0.8 / double(d));
    CHECK(top <= 1.3 / double(d));
  }
}

TEST_CASE("per-direction empirical variance sits in [0.7/d, 1.3/d]") {
  const std::size_t d = 20;
  const auto spec = standard_gaussian(d);
  const Halfspace w_star = basis_target(d);
  const Dataset data = sample_mixture(spec, w_star, 100000, 4);
  RngEngine eng = make_stream(77, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Vec w(d);
    for (double& c : w) c = gauss(eng);
    w = normalized(w);
    double var = 0.0;
    for (const auto& s : data) {
      const double p = dot(w, s.x);  // mean is zero for this component
      var += p * p;
    }
    var /= double(data.size());
    CHECK(var >= 0.7 / double(d));
    CHECK(var <= 1.3 / double(d));
  }
}

TEST_CASE("uniform-ball component matches its covariance target") {
  const std::size_t d = 10;
  MixtureSpec spec;
  spec.d = d;
  spec.r = 1.0;
  spec.components.push_back(
      MixtureComponent{ComponentFamily::UniformBall, Vec(d, 0.0), 0.8});
  const Dataset data = sample_mixture(spec, basis_target(d), 100000, 8);
  const double want = 0.8 * 0.8 / double(d);
  const double top = top_eigen(empirical_second_moment(data)).lambda;
  CHECK(top == doctest::Approx(want).epsilon(0.1));
  // Hard support bound: radius s sqrt((d+2)/d).
  const double radius = 0.8 * std::sqrt((double(d) + 2.0) / double(d));
  for (const auto& s : data) CHECK(norm(s.x) <= radius + 1e-12);
}

TEST_CASE("enforce_margin") {
  const std::size_t d = 4;
  const Halfspace w_star = basis_target(d);

  SUBCASE("already separated input is identity") {
    Dataset data(d);
    data.add(LabeledSample{{1.0, 0, 0, 0}, 1});
    data.add(LabeledSample{{-2.0, 0, 0, 0}, -1});
    const auto res = enforce_margin(data, w_star, 0.5);
    CHECK(res.data.size() == 2);
    CHECK(res.rejection_fraction == 0.0);
  }
  SUBCASE("gamma 0 is identity") {
    const Dataset data =
        sample_mixture(standard_gaussian(d), w_star, 300, 12);
    const auto res = enforce_margin(data, w_star, 0.0);
    CHECK(res.data.size() == data.size());
  }
  SUBCASE("rejection fraction matches the Gaussian CDF") {
    const std::size_t dim = 20;
    const double gamma = 0.2;
    const Dataset data =
        sample_mixture(standard_gaussian(dim), basis_target(dim), 100000, 3);
    const auto res = enforce_margin(data, basis_target(dim), gamma);
    // w.x ~ N(0, 1/d): P(|w.x| < gamma) = 2 Phi(gamma sqrt(d)) - 1.
    const double want =
        2.0 * oracles::gaussian_cdf(gamma * std::sqrt(double(dim))) - 1.0;
    CHECK(std::abs(res.rejection_fraction - want) < 0.02);
  }
  SUBCASE("filtered output achieves the margin exactly") {
    const Dataset data =
        sample_mixture(standard_gaussian(d), w_star, 2000, 21);
    const auto res = enforce_margin(data, w_star, 0.2);
    CHECK(margin(w_star, res.data, false) >= 0.2);
  }
  SUBCASE("unreachable margin throws") {
    const Dataset data = sample_mixture(standard_gaussian(d), w_star, 500, 5);
    CHECK_THROWS_AS(enforce_margin(data, w_star, 50.0), std::runtime_error);
  }
}

TEST_CASE("make_separable_spec geometry") {
  const std::size_t d = 8;
  const Halfspace w_star = basis_target(d);

  SUBCASE("k=2 means sit on opposite sides at distance zeta") {
    const auto spec = make_separable_spec(d, 2, 0.75, 1.0, w_star, 1);
    REQUIRE(spec.base.k() == 2);
    CHECK(dot(w_star.w, spec.base.components[0].mu) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(dot(w_star.w, spec.base.components[1].mu) ==
          doctest::Approx(-0.75).epsilon(1e-12));
    for (const auto& c : spec.base.components) {
      CHECK(norm(c.mu) <= 1.0 + 1e-12);
    }
  }
  SUBCASE("k=1 stays on the positive side") {
    const auto spec = make_separable_spec(d, 1, 0.5, 0.5, w_star, 2);
    CHECK(dot(w_star.w, spec.base.components[0].mu) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("zeta > r is infeasible") {
    CHECK_THROWS_AS(make_separable_spec(d, 2, 1.0, 0.5, w_star, 3),
                    std::invalid_argument);
  }
  SUBCASE("deterministic per seed") {
    const auto a = make_separable_spec(d, 3, 0.5, 0.7, w_star, 9);
    const auto b = make_separable_spec(d, 3, 0.5, 0.7, w_star, 9);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(a.base.components[j].mu == b.base.components[j].mu);
    }
  }
}

TEST_CASE("separable mixture yields zeta/2 empirical margin at scale") {
  // Mean-margin data at guarantee scale: the clean set should be
  // zeta/2-margin separable in nearly every seed. The stronger 3 zeta/4
  // threshold is recorded informationally alongside.
  const std::size_t d = 400;
  const double eps = 0.25, del = 0.05;
  const double zeta =
      64.0 * std::pow(std::log(double(d) / (eps * del)), 2.0) / std::sqrt(double(d));
  const Halfspace w_star = basis_target(d);
  const auto spec = make_separable_spec(d, 2, zeta, 1.25 * zeta, w_star, 0);

  int pass_half = 0, pass_three_quarters = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset data = sample_mixture(spec.base, w_star, 10000, seed);
    const double m = margin(w_star, data, true);
    if (m >= zeta / 2.0) ++pass_half;
    if (m >= 0.75 * zeta) ++pass_three_quarters;
  }
  CHECK(pass_half >= 9);
  // Informational: the stronger constant from the proof.
  MESSAGE("3*zeta/4 margin seeds: ", pass_three_quarters, "/10");
}

TEST_CASE("mixture spec validation") {
  MixtureSpec spec = standard_gaussian(3);
  spec.components[0].mu = {2.0, 0.0, 0.0};  // exceeds r=1
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = standard_gaussian(3);
  spec.components[0].cov_scale = 1.5;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
