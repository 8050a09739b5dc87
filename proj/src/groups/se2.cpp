#include <cmath>
#include <numbers>
#include <stdexcept>

#include "symred/groups.hpp"

namespace symred {

namespace {

constexpr double kMinHeadingNorm = 1e-8;

// Rotates the three planar pairs of a car state by (c, s).
void rotate_car_pairs(Vector& x, double c, double s) {
  for (Eigen::Index k = 0; k < 6; k += 2) {
    const double a = x[k];
    const double b = x[k + 1];
    x[k] = c * a - s * b;
    x[k + 1] = s * a + c * b;
  }
}

double heading_angle(const Vector& x, const char* group) {
  const double norm = std::hypot(x[4], x[5]);
  if (!(norm >= kMinHeadingNorm)) {
    throw std::domain_error(std::string(group) +
                            ": moving frame undefined, heading norm |(h_y, h_z)| < 1e-8");
  }
  return std::atan2(x[5] / norm, x[4] / norm);
}

StateVector sample_car_state(Rng& rng) {
  const double heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return StateVector{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-2, 2),
                     rng.uniform(-2, 2),  std::cos(heading), std::sin(heading)};
}

}  // namespace

// ---- SE(2) ----

Vector SE2CarGroup::cross_section_constant() const { return Eigen::Vector4d(0, 0, 1, 0); }

GroupElement SE2CarGroup::pose(const StateVector& x) const {
  check_state(x, "pose");
  return GroupElement{id(), pose_coords(x.values())};
}

Vector SE2CarGroup::pose_coords(const Vector& x) const {
  return Eigen::Vector3d(x[0], x[1], heading_angle(x, "se2car"));
}

Vector SE2CarGroup::compose_coords(const Vector& g1, const Vector& g2) const {
  const double c = std::cos(g1[2]);
  const double s = std::sin(g1[2]);
  return Eigen::Vector3d(c * g2[0] - s * g2[1] + g1[0], s * g2[0] + c * g2[1] + g1[1],
                         wrap_angle(g1[2] + g2[2]));
}

Vector SE2CarGroup::inverse_coords(const Vector& g) const {
  const double c = std::cos(g[2]);
  const double s = std::sin(g[2]);
  return Eigen::Vector3d(-(c * g[0] + s * g[1]), -(-s * g[0] + c * g[1]), wrap_angle(-g[2]));
}

Vector SE2CarGroup::act_state_coords(const Vector& g, const Vector& x) const {
  Vector out = x;
  rotate_car_pairs(out, std::cos(g[2]), std::sin(g[2]));
  out[0] += g[0];
  out[1] += g[1];
  return out;
}

Vector SE2CarGroup::frame_coords(const Vector& x) const { return inverse_coords(pose_coords(x)); }

Vector SE2CarGroup::coord_difference(const Vector& a, const Vector& b) const {
  return Eigen::Vector3d(a[0] - b[0], a[1] - b[1], angle_difference(a[2], b[2]));
}

GroupElement SE2CarGroup::sample_element(Rng& rng) const {
  return GroupElement{id(), Eigen::Vector3d(rng.uniform(-5, 5), rng.uniform(-5, 5),
                                            rng.uniform(-std::numbers::pi, std::numbers::pi))};
}

StateVector SE2CarGroup::sample_state(Rng& rng) const { return sample_car_state(rng); }

// ---- SO(2) ----

Vector SO2CarGroup::cross_section_constant() const { return Eigen::Vector2d(1, 0); }

Vector SO2CarGroup::compose_coords(const Vector& g1, const Vector& g2) const {
  return Vector::Constant(1, wrap_angle(g1[0] + g2[0]));
}

Vector SO2CarGroup::inverse_coords(const Vector& g) const {
  return Vector::Constant(1, wrap_angle(-g[0]));
}

Vector SO2CarGroup::act_state_coords(const Vector& g, const Vector& x) const {
  Vector out = x;
  rotate_car_pairs(out, std::cos(g[0]), std::sin(g[0]));
  return out;
}

Vector SO2CarGroup::frame_coords(const Vector& x) const {
  return Vector::Constant(1, wrap_angle(-heading_angle(x, "so2car")));
}

Vector SO2CarGroup::coord_difference(const Vector& a, const Vector& b) const {
  return Vector::Constant(1, angle_difference(a[0], b[0]));
}

GroupElement SO2CarGroup::sample_element(Rng& rng) const {
  return GroupElement{id(),
                      Vector::Constant(1, rng.uniform(-std::numbers::pi, std::numbers::pi))};
}

StateVector SO2CarGroup::sample_state(Rng& rng) const { return sample_car_state(rng); }

}  // namespace symred
