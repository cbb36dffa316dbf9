#include "malice/datagen.hpp"

#include <cmath>
#include <stdexcept>

namespace malice {

namespace {

constexpr int kMaxRejectionAttempts = 1000000;

Vec gaussian_vector(std::size_t d, RngEngine& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(d);
  for (double& c : v) c = gauss(eng);
  return v;
}

}  // namespace

void MixtureSpec::validate() const {
  if (d == 0) throw std::invalid_argument("mixture: d must be >= 1");
  if (components.empty()) {
    throw std::invalid_argument("mixture: at least one component");
  }
  if (!(r > 0.0)) throw std::invalid_argument("mixture: r must be > 0");
  for (const auto& c : components) {
    if (c.mu.size() != d) {
      throw std::invalid_argument("mixture: mean dimension mismatch");
    }
    if (norm(c.mu) > r + 1e-12) {
      throw std::invalid_argument("mixture: ||mu|| exceeds r");
    }
    if (!(c.cov_scale > 0.0 && c.cov_scale <= 1.0)) {
      throw std::invalid_argument("mixture: cov_scale must be in (0, 1]");
    }
  }
}

void SeparableMixtureSpec::validate() const {
  base.validate();
  if (!(zeta > 0.0)) throw std::invalid_argument("separable: zeta must be > 0");
  if (w_star.dim() != base.d) {
    throw std::invalid_argument("separable: w_star dimension mismatch");
  }
  for (const auto& c : base.components) {
    if (std::abs(dot(w_star.w, c.mu)) < zeta - 1e-12) {
      throw std::invalid_argument("separable: |w_star.mu| below zeta");
    }
  }
  if (strict_theorem) {
    if (!(zeta <= base.r && base.r <= 1.5 * zeta)) {
      throw std::invalid_argument(
          "separable: strict mode needs zeta <= r <= 1.5 zeta");
    }
  }
}

LabeledSample draw_mixture_sample(const MixtureSpec& spec,
                                  const Halfspace& w_star, RngEngine& eng) {
  std::uniform_int_distribution<std::size_t> pick(0, spec.k() - 1);
  const MixtureComponent& comp = spec.components[pick(eng)];
  const double per_coord = comp.cov_scale / std::sqrt(double(spec.d));

  Vec x(comp.mu);
  if (comp.family == ComponentFamily::Gaussian) {
    Vec g = gaussian_vector(spec.d, eng);
    add_scaled(x, per_coord, g);
  } else {
    // Uniform on the ball of radius s*sqrt((d+2)/d), which has covariance
    // (s^2/d) I: direction from a normalized Gaussian, radius R * U^(1/d).
    const double radius =
        comp.cov_scale * std::sqrt((double(spec.d) + 2.0) / double(spec.d));
    Vec g = gaussian_vector(spec.d, eng);
    double gn = norm(g);
    while (gn == 0.0) {
      g = gaussian_vector(spec.d, eng);
      gn = norm(g);
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double rr =
        radius * std::pow(unif(eng), 1.0 / static_cast<double>(spec.d));
    add_scaled(x, rr / gn, g);
  }

  LabeledSample s;
  s.y = sign_tie_positive(dot(w_star.w, x));
  s.x = std::move(x);
  s.provenance = Provenance::Clean;
  return s;
}

CleanSampler make_mixture_sampler(MixtureSpec spec, Halfspace w_star,
                                  double margin_gamma) {
  spec.validate();
  if (w_star.dim() != spec.d) {
    throw std::invalid_argument("sampler: w_star dimension mismatch");
  }
  if (margin_gamma < 0.0) {
    throw std::invalid_argument("sampler: margin_gamma must be >= 0");
  }
  return [spec = std::move(spec), w_star = std::move(w_star),
          margin_gamma](RngEngine& eng) -> LabeledSample {
    for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
      LabeledSample s = draw_mixture_sample(spec, w_star, eng);
      if (std::abs(dot(w_star.w, s.x)) >= margin_gamma) return s;
    }
    throw std::runtime_error("margin unreachable for this distribution");
  };
}

Dataset sample_mixture(const MixtureSpec& spec, const Halfspace& w_star,
                       std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("sample_mixture: n must be >= 1");
  if (w_star.dim() != spec.d) {
    throw std::invalid_argument("sample_mixture: w_star dimension mismatch");
  }
  RngEngine eng = make_stream(seed, 0);
  Dataset data(spec.d);
  for (std::size_t i = 0; i < n; ++i) {
    data.add(draw_mixture_sample(spec, w_star, eng));
  }
  return data;
}

MarginFilterResult enforce_margin(const Dataset& raw, const Halfspace& w_star,
                                  double gamma) {
  if (gamma < 0.0) {
    throw std::invalid_argument("enforce_margin: gamma must be >= 0");
  }
  MarginFilterResult out;
  out.data = Dataset(raw.dim());
  std::size_t rejected = 0;
  for (const auto& s : raw) {
    if (std::abs(dot(w_star.w, s.x)) < gamma) {
      ++rejected;
    } else {
      out.data.add(s);
    }
  }
  out.rejection_fraction =
      raw.empty() ? 0.0 : double(rejected) / double(raw.size());
  if (out.rejection_fraction > 0.99) {
    throw std::runtime_error("margin unreachable for this distribution");
  }
  return out;
}

SeparableMixtureSpec make_separable_spec(std::size_t d, std::size_t k,
                                         double zeta, double r,
                                         const Halfspace& w_star,
                                         std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("make_separable_spec: k must be >= 1");
  if (!(zeta > 0.0)) {
    throw std::invalid_argument("make_separable_spec: zeta must be > 0");
  }
  if (zeta > r) {
    throw std::invalid_argument("make_separable_spec: infeasible (zeta > r)");
  }
  if (w_star.dim() != d) {
    throw std::invalid_argument("make_separable_spec: w_star dim mismatch");
  }

  RngEngine eng = make_stream(seed, 1);
  const double max_offset = std::sqrt(std::max(0.0, r * r - zeta * zeta));
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SeparableMixtureSpec spec;
  spec.base.d = d;
  spec.base.r = r;
  spec.zeta = zeta;
  spec.w_star = w_star;
  spec.strict_theorem = (r <= 1.5 * zeta);

  for (std::size_t j = 0; j < k; ++j) {
    const double side = (j % 2 == 0) ? 1.0 : -1.0;
    Vec mu = scaled(w_star.w, side * zeta);
    if (max_offset > 0.0 && d > 1) {
      // In-plane offset: Gaussian projected off w_star, scaled to a uniform
      // length in [0, max_offset].
      Vec g = gaussian_vector(d, eng);
      add_scaled(g, -dot(g, w_star.w), w_star.w);
      const double gn = norm(g);
      if (gn > 0.0) add_scaled(mu, unif(eng) * max_offset / gn, g);
    }
    spec.base.components.push_back(
        MixtureComponent{ComponentFamily::Gaussian, std::move(mu), 1.0});
  }
  spec.validate();
  return spec;
}

}  // namespace malice
