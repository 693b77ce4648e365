#pragma once

#include <cmath>
#include <random>

#include "himc/quaternion.hpp"

namespace himc::test {

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

inline Quaternion random_quaternion(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

inline Quaternion random_unit_imaginary(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Quaternion q{0.0, n(rng), n(rng), n(rng)};
  return q / norm(q);
}

inline Quaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Quaternion q{n(rng), n(rng), n(rng), n(rng)};
  return q / norm(q);
}

inline double dist(const Quaternion& a, const Quaternion& b) { return norm(a - b); }

}  // namespace himc::test
