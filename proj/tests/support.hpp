#pragma once

#include "qhm/experiments.hpp"

#include <doctest.h>

namespace qhm::test {

// Small grids keep each test case well under a second.
inline GridSpec small_grid(int c = 1, Rational mu = Rational(1, 2), Rational nu = Rational(1, 8), int n = 64) {
  return make_grid(c, mu, nu, n, n, Rational(-4), Rational(4), 4);
}

inline GridSpec default_grid(int c = 1, Rational mu = Rational(1, 2), Rational nu = Rational(1, 4)) {
  return make_grid(c, mu, nu, 128, 128, Rational(-4), Rational(4), 4);
}

template <class F>
double rel_diff(const F& a, const F& b) {
  return max_abs(a - b) / std::max(1.0, max_abs(b));
}

inline double rel_diff(const ModuleField& a, const ModuleField& b) {
  return norm(a - b) / std::max(1e-300, norm(b));
}

}  // namespace qhm::test
