#pragma once

#include <cmath>
#include <numbers>

#include "symred/types.hpp"

namespace symred::testing {

inline double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

template <class A, class B>
double max_diff(const A& a, const B& b) {
  return max_abs(Vector(a.values() - b.values()));
}

inline double max_diff(const Vector& a, const Vector& b) { return max_abs(Vector(a - b)); }

/// Distance between angles on the circle.
inline double angle_gap(double a, double b) {
  return std::abs(std::remainder(a - b, 2 * std::numbers::pi));
}

}  // namespace symred::testing
