#pragma once

#include <memory>
#include <numbers>
#include <string>

#include "symred/rng.hpp"
#include "symred/types.hpp"

namespace symred {

/// Kinematic bicycle car on the state (y, z, v_y, v_z, h_y, h_z).
struct CarParams {
  double dt = 0.1;
  double wheelbase = 1.0;
  double max_accel = 1.0;
  double max_steer = std::numbers::pi / 4;
};

/// One Euler step with u = (accel, steer), both clamped.
///
/// s = v . h is the signed speed along the heading. The position advances by
/// s h dt, the heading turns by (s / L) tan(steer) dt and is renormalised, the
/// speed becomes s + a dt and the velocity is re-aligned with the new heading.
/// Only body-frame quantities enter the update, so the step commutes with
/// SE(2). Throws std::domain_error for a zero heading vector.
StateVector car_step(const StateVector& car, const ControlVector& u, const CarParams& p = {});

/// Two-link planar arm with decoupled damped joints,
/// qdd_i = (tau_i - b qd_i) / I, explicit Euler.
struct ReacherParams {
  double dt = 0.05;
  double inertia = 1.0;
  double damping = 0.1;
  double link1 = 0.1;
  double link2 = 0.1;
  double max_torque = 1.0;
};

struct ReacherJoints {
  double q1 = 0, q2 = 0, dq1 = 0, dq2 = 0;
  double target_y = 0, target_z = 0;
};

/// The 11-dim observation (see ReacherGroup for the layout) with z = 0.
StateVector reacher_observation(const ReacherJoints& j, const ReacherParams& p = {});

/// Fingertip position (y, z) from an observation's joint cosines and sines.
Eigen::Vector2d reacher_fingertip(const StateVector& obs, const ReacherParams& p = {});

/// One step on the observation with u = (tau1, tau2), clamped. The joint
/// (cos, sin) pairs are advanced by rotation, the target and entry 10 are
/// carried over, and fingertip-minus-target is recomputed from the new joints.
StateVector reacher_step(const StateVector& obs, const ControlVector& u,
                         const ReacherParams& p = {});

enum class Policy { uniform_random, goal_seek };

std::string to_string(Policy p);
Policy parse_policy(const std::string& text);

/// A simulated environment with fixed dimensions.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::string id() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t control_dim() const = 0;
  virtual StateVector step(const StateVector& x, const ControlVector& u) const = 0;
  virtual StateVector initial_state(Rng& rng) const = 0;
  virtual ControlVector control(Policy policy, const StateVector& x, Rng& rng) const = 0;
};

/// Two cars with two constant goals, n = 24 laid out car1, car2, goal1, goal2.
/// Initial poses and goals uniform in a +-5 box with uniform headings; initial
/// speeds uniform in [-1, 1]; goals have zero velocity.
class ParkingEnv final : public Environment {
 public:
  explicit ParkingEnv(CarParams params = {}) : params_(params) {}
  std::string id() const override { return "parking2"; }
  std::size_t state_dim() const override { return 24; }
  std::size_t control_dim() const override { return 4; }
  StateVector step(const StateVector& x, const ControlVector& u) const override;
  StateVector initial_state(Rng& rng) const override;
  ControlVector control(Policy policy, const StateVector& x, Rng& rng) const override;
  const CarParams& params() const { return params_; }

 private:
  CarParams params_;
};

/// Two-link reacher. Initial angles uniform in (-pi, pi], rates in +-1, and the
/// target uniform over the reachable disc of radius link1 + link2.
class ReacherEnv final : public Environment {
 public:
  explicit ReacherEnv(ReacherParams params = {}) : params_(params) {}
  std::string id() const override { return "reacher"; }
  std::size_t state_dim() const override { return 11; }
  std::size_t control_dim() const override { return 2; }
  StateVector step(const StateVector& x, const ControlVector& u) const override;
  StateVector initial_state(Rng& rng) const override;
  ControlVector control(Policy policy, const StateVector& x, Rng& rng) const override;
  const ReacherParams& params() const { return params_; }

 private:
  ReacherParams params_;
};

/// "parking2" or "reacher"; throws std::invalid_argument otherwise.
std::unique_ptr<Environment> make_environment(const std::string& id);

}  // namespace symred
