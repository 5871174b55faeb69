#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

namespace abl {

// SplitMix64 stream. All randomness in the toolkit flows through this type so
// that seeded runs reproduce bit-for-bit across platforms; the standard
// library distributions carry no such guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double t = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Eigen::VectorXd gaussian_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian();
    return v;
  }

  // Uniform over the surface of the unit sphere in R^dim.
  Eigen::VectorXd unit_vector(int dim) {
    Eigen::VectorXd v = gaussian_vector(dim);
    double n = v.norm();
    while (n == 0.0) {  // astronomically unlikely; redraw
      v = gaussian_vector(dim);
      n = v.norm();
    }
    return v / n;
  }

  // Uniform over the closed unit ball in R^dim: direction times u^{1/dim}.
  Eigen::VectorXd unit_ball(int dim) {
    return unit_vector(dim) * std::pow(uniform_open(), 1.0 / static_cast<double>(dim));
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace abl
