//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

#include "sigmageom/point.hpp"

namespace sigmageom {

/// Counter-free splittable RNG (splitmix64 core). Every sampling loop in
/// the library derives one stream per work item from (seed, index), which
/// keeps results identical for any worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for work item `index` of a run seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    mix.next_u64();
    return mix;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the polar method (no libm distribution objects,
  /// so streams replay identically everywhere).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  Eigen::VectorXd uniform_in(const Box& box) {
    Eigen::VectorXd x(box.dim());
    for (int i = 0; i < box.dim(); ++i) x[i] = uniform(box.lo[i], box.hi[i]);
    return x;
  }

  Eigen::VectorXd normal_vector(int dim) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = normal();
    return x;
  }

  /// Uniform direction on the unit sphere of `dim` dimensions.
  Eigen::VectorXd unit_vector(int dim) {
    Eigen::VectorXd x;
    double n = 0.0;
    do {
      x = normal_vector(dim);
      n = x.norm();
    } while (n < 1e-12);
    return x / n;
  }

 private:
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Halton low-discrepancy sequence with a seeded Cranley-Patterson shift,
/// used to place multi-start points.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed) : dim_(dim), shift_(dim) {
    Rng r(seed ^ 0x5851f42d4c957f2dULL);
    for (int i = 0; i < dim; ++i) shift_[i] = r.uniform();
  }

  Eigen::VectorXd point(std::uint64_t index, const Box& box) const {
    Eigen::VectorXd x(dim_);
    for (int i = 0; i < dim_; ++i) {
      double v = radical_inverse(index + 1, prime(i)) + shift_[i];
      v -= std::floor(v);
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * v;
    }
    return x;
  }

 private:
  static int prime(int i) {
    static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    return primes[i % 12];
  }
  static double radical_inverse(std::uint64_t n, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (n > 0) {
      r += f * static_cast<double>(n % base);
      n /= base;
      f *= inv;
    }
    return r;
  }

  int dim_;
  Eigen::VectorXd shift_;
};

}  // namespace sigmageom
