#ifndef MALICE_LINALG_HPP
#define MALICE_LINALG_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace malice {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double squared_norm(const Vec& v);
double norm(const Vec& v);

/// y += alpha * x
void add_scaled(Vec& y, double alpha, const Vec& x);
Vec scaled(const Vec& v, double alpha);

/// Returns v / ||v||; throws std::invalid_argument if ||v|| == 0.
Vec normalized(const Vec& v);

/// Dense symmetric d x d matrix, row-major storage.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t d) : d_(d), a_(d * d, 0.0) {}

  std::size_t dim() const { return d_; }
  double& at(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

  /// M += c * x x^T
  void add_outer(const Vec& x, double c);

  Vec multiply(const Vec& v) const;

  bool is_zero() const;

 private:
  std::size_t d_ = 0;
  std::vector<double> a_;
};

struct TopEigen {
  double lambda = 0.0;
  Vec vector;
};

struct PowerIterationConfig {
  int max_iters = 1000;
  double rel_tol = 1e-12;
  std::uint64_t seed = 0x5eed5eedULL;
  bool random_restart = true;
};

/// Largest eigenvalue/eigenvector of a PSD matrix by power iteration.
/// Deterministic given the seed. Zero matrix yields (0, e_1).
TopEigen top_eigen(const SymMatrix& m, const PowerIterationConfig& cfg = {});

}  // namespace malice

#endif
