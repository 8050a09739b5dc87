#include <cmath>
#include <numbers>
#include <stdexcept>

#include "symred/groups.hpp"

namespace symred {

namespace {
constexpr double kMinJointNorm = 1e-8;
}

Vector ReacherGroup::cross_section_constant() const {
  Vector c(5);
  c << 1, 0, 0, 0, 0;
  return c;
}

// phi_{g1} o phi_{g2} on the target: R1 (R2 (t + d2) + d1) = R1 R2 (t + d2 + R2^T d1).
Vector ReacherGroup::compose_coords(const Vector& g1, const Vector& g2) const {
  const double c2 = std::cos(g2[0]);
  const double s2 = std::sin(g2[0]);
  Vector out(4);
  out[0] = wrap_angle(g1[0] + g2[0]);
  out[1] = g2[1] + c2 * g1[1] + s2 * g1[2];
  out[2] = g2[2] - s2 * g1[1] + c2 * g1[2];
  out[3] = g1[3] + g2[3];
  return out;
}

Vector ReacherGroup::inverse_coords(const Vector& g) const {
  const double c = std::cos(g[0]);
  const double s = std::sin(g[0]);
  Vector out(4);
  out[0] = wrap_angle(-g[0]);
  out[1] = -(c * g[1] - s * g[2]);
  out[2] = -(s * g[1] + c * g[2]);
  out[3] = -g[3];
  return out;
}

Vector ReacherGroup::act_state_coords(const Vector& g, const Vector& x) const {
  const double c = std::cos(g[0]);
  const double s = std::sin(g[0]);
  Vector out = x;
  out[0] = c * x[0] - s * x[2];
  out[2] = s * x[0] + c * x[2];
  const double ty = x[4] + g[1];
  const double tz = x[5] + g[2];
  out[4] = c * ty - s * tz;
  out[5] = s * ty + c * tz;
  const double dy = x[8] - g[1];
  const double dz = x[9] - g[2];
  out[8] = c * dy - s * dz;
  out[9] = s * dy + c * dz;
  out[10] = x[10] + g[3];
  return out;
}

Vector ReacherGroup::frame_coords(const Vector& x) const {
  if (!(std::hypot(x[0], x[2]) >= kMinJointNorm)) {
    throw std::domain_error("reacher: moving frame undefined, |(cos q1, sin q1)| < 1e-8");
  }
  Vector out(4);
  out << std::atan2(-x[2], x[0]), -x[4], -x[5], -x[10];
  return out;
}

Vector ReacherGroup::coord_difference(const Vector& a, const Vector& b) const {
  Vector d = a - b;
  d[0] = angle_difference(a[0], b[0]);
  return d;
}

GroupElement ReacherGroup::sample_element(Rng& rng) const {
  Vector g(4);
  g << rng.uniform(-std::numbers::pi, std::numbers::pi), rng.uniform(-1, 1), rng.uniform(-1, 1),
      rng.uniform(-1, 1);
  return GroupElement{id(), std::move(g)};
}

StateVector ReacherGroup::sample_state(Rng& rng) const {
  const double q1 = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double q2 = rng.uniform(-std::numbers::pi, std::numbers::pi);
  StateVector x = StateVector::zeros(11);
  x[0] = std::cos(q1);
  x[1] = std::cos(q2);
  x[2] = std::sin(q1);
  x[3] = std::sin(q2);
  for (std::size_t i : {4, 5, 8, 9}) x[i] = rng.uniform(-0.3, 0.3);
  x[6] = rng.uniform(-1, 1);
  x[7] = rng.uniform(-1, 1);
  x[10] = rng.uniform(-1, 1);
  return x;
}

}  // namespace symred
