#include "symred/group.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symred {

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, two_pi);  // [-pi, pi]
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

double angle_difference(double a, double b) { return wrap_angle(a - b); }

GroupElement Group::make_element(Vector coords) const {
  GroupElement g{id(), std::move(coords)};
  check_element(g, "make_element");
  return g;
}

GroupElement Group::identity() const { return GroupElement{id(), identity_coords()}; }

GroupElement Group::compose(const GroupElement& g1, const GroupElement& g2) const {
  check_element(g1, "compose");
  check_element(g2, "compose");
  return GroupElement{id(), compose_coords(g1.coords, g2.coords)};
}

GroupElement Group::inverse(const GroupElement& g) const {
  check_element(g, "inverse");
  return GroupElement{id(), inverse_coords(g.coords)};
}

StateVector Group::act_state(const GroupElement& g, const StateVector& x) const {
  check_element(g, "act_state");
  check_state(x, "act_state");
  return StateVector(act_state_coords(g.coords, x.values()));
}

ControlVector Group::act_control(const GroupElement& g, const ControlVector& u) const {
  check_element(g, "act_control");
  if (u.size() != control_dim()) {
    throw std::invalid_argument(id() + ": act_control expects a control of length " +
                                std::to_string(control_dim()) + ", got " +
                                std::to_string(u.size()));
  }
  return ControlVector(act_control_coords(g.coords, u.values()));
}

GroupElement Group::moving_frame(const StateVector& x) const {
  check_state(x, "moving_frame");
  return GroupElement{id(), frame_coords(x.values())};
}

ReducedState Group::project_reduced(const StateVector& x) const {
  check_state(x, "project_reduced");
  const auto idx = reduced_indices();
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[idx[i]];
  return ReducedState(std::move(out));
}

ReducedState Group::reduce(const StateVector& x) const {
  return project_reduced(act_state(moving_frame(x), x));
}

StateVector Group::reconstruct_on_cross_section(const ReducedState& x_bar) const {
  const auto b = reduced_indices();
  if (x_bar.size() != b.size()) {
    throw std::invalid_argument(id() + ": reduced state must have length " +
                                std::to_string(b.size()));
  }
  const auto a = cross_section_indices();
  const Vector c = cross_section_constant();
  StateVector x = StateVector::zeros(state_dim());
  for (std::size_t i = 0; i < a.size(); ++i) x[a[i]] = c[static_cast<Eigen::Index>(i)];
  for (std::size_t i = 0; i < b.size(); ++i) x[b[i]] = x_bar[i];
  return x;
}

double Group::element_distance(const GroupElement& a, const GroupElement& b) const {
  check_element(a, "element_distance");
  check_element(b, "element_distance");
  if (dim() == 0) return 0.0;
  return coord_difference(a.coords, b.coords).cwiseAbs().maxCoeff();
}

ControlVector Group::sample_control(Rng& rng) const {
  ControlVector u = ControlVector::zeros(control_dim());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(-1.0, 1.0);
  return u;
}

Vector Group::identity_coords() const { return Vector::Zero(static_cast<Eigen::Index>(dim())); }

Vector Group::act_control_coords(const Vector&, const Vector& u) const { return u; }

Vector Group::coord_difference(const Vector& a, const Vector& b) const { return a - b; }

void Group::check_element(const GroupElement& g, const char* op) const {
  if (g.group_id != id()) {
    throw std::invalid_argument(id() + ": " + op + " received an element of group '" +
                                g.group_id + "'");
  }
  if (static_cast<std::size_t>(g.coords.size()) != dim()) {
    throw std::invalid_argument(id() + ": " + op + " expects " + std::to_string(dim()) +
                                " group coordinates, got " + std::to_string(g.coords.size()));
  }
  if (!g.coords.allFinite()) {
    throw std::invalid_argument(id() + ": " + op + " received non-finite group coordinates");
  }
}

void Group::check_state(const StateVector& x, const char* op) const {
  if (x.size() != state_dim()) {
    throw std::invalid_argument(id() + ": " + op + " expects a state of length " +
                                std::to_string(state_dim()) + ", got " +
                                std::to_string(x.size()));
  }
}

}  // namespace symred
