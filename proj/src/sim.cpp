#include "symred/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symred {

namespace {

double clamp_abs(double v, double limit) { return std::clamp(v, -limit, limit); }

Eigen::Vector2d unit_heading(double hy, double hz) {
  const double norm = std::hypot(hy, hz);
  if (!(norm >= 1e-8)) throw std::domain_error("car_step: heading norm below 1e-8");
  return {hy / norm, hz / norm};
}

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

Vector slice(const Vector& v, Eigen::Index off, Eigen::Index len) { return v.segment(off, len); }

}  // namespace

StateVector car_step(const StateVector& car, const ControlVector& u, const CarParams& p) {
  if (car.size() != 6 || u.size() != 2)
    throw std::invalid_argument("car_step: expects a 6-dim state and 2-dim control");
  const double accel = clamp_abs(u[0], p.max_accel);
  const double steer = clamp_abs(u[1], p.max_steer);

  const Eigen::Vector2d h = unit_heading(car[4], car[5]);
  const Eigen::Vector2d v(car[2], car[3]);
  const double speed = v.dot(h);

  const double omega = speed / p.wheelbase * std::tan(steer);
  Eigen::Vector2d h_next = rotate(h, omega * p.dt);
  h_next /= h_next.norm();
  const double speed_next = speed + accel * p.dt;

  StateVector out = StateVector::zeros(6);
  out[0] = car[0] + speed * h[0] * p.dt;
  out[1] = car[1] + speed * h[1] * p.dt;
  out[2] = speed_next * h_next[0];
  out[3] = speed_next * h_next[1];
  out[4] = h_next[0];
  out[5] = h_next[1];
  return out;
}

StateVector reacher_observation(const ReacherJoints& j, const ReacherParams& p) {
  StateVector x = StateVector::zeros(11);
  x[0] = std::cos(j.q1);
  x[1] = std::cos(j.q2);
  x[2] = std::sin(j.q1);
  x[3] = std::sin(j.q2);
  x[4] = j.target_y;
  x[5] = j.target_z;
  x[6] = j.dq1;
  x[7] = j.dq2;
  const Eigen::Vector2d tip = reacher_fingertip(x, p);
  x[8] = tip[0] - j.target_y;
  x[9] = tip[1] - j.target_z;
  x[10] = 0.0;
  return x;
}

Eigen::Vector2d reacher_fingertip(const StateVector& obs, const ReacherParams& p) {
  const double c1 = obs[0], c2 = obs[1], s1 = obs[2], s2 = obs[3];
  const double c12 = c1 * c2 - s1 * s2;
  const double s12 = s1 * c2 + c1 * s2;
  return {p.link1 * c1 + p.link2 * c12, p.link1 * s1 + p.link2 * s12};
}

StateVector reacher_step(const StateVector& obs, const ControlVector& u, const ReacherParams& p) {
  if (obs.size() != 11 || u.size() != 2)
    throw std::invalid_argument("reacher_step: expects an 11-dim observation and 2-dim control");
  const double tau1 = clamp_abs(u[0], p.max_torque);
  const double tau2 = clamp_abs(u[1], p.max_torque);
  const double dq1 = obs[6];
  const double dq2 = obs[7];

  Eigen::Vector2d j1 = rotate({obs[0], obs[2]}, dq1 * p.dt);
  Eigen::Vector2d j2 = rotate({obs[1], obs[3]}, dq2 * p.dt);
  j1 /= j1.norm();
  j2 /= j2.norm();

  StateVector x = obs;
  x[0] = j1[0];
  x[2] = j1[1];
  x[1] = j2[0];
  x[3] = j2[1];
  x[6] = dq1 + p.dt * (tau1 - p.damping * dq1) / p.inertia;
  x[7] = dq2 + p.dt * (tau2 - p.damping * dq2) / p.inertia;
  const Eigen::Vector2d tip = reacher_fingertip(x, p);
  x[8] = tip[0] - x[4];
  x[9] = tip[1] - x[5];
  return x;
}

std::string to_string(Policy p) {
  return p == Policy::uniform_random ? "uniform-random" : "scripted-goal-seek";
}

Policy parse_policy(const std::string& text) {
  if (text == "uniform-random" || text == "random") return Policy::uniform_random;
  if (text == "scripted-goal-seek" || text == "goal-seek") return Policy::goal_seek;
  throw std::invalid_argument("unknown policy '" + text +
                              "' (expected uniform-random or scripted-goal-seek)");
}

// ---- parking ----

StateVector ParkingEnv::step(const StateVector& x, const ControlVector& u) const {
  if (x.size() != 24 || u.size() != 4)
    throw std::invalid_argument("parking2: expects a 24-dim state and 4-dim control");
  Vector next = x.values();
  for (Eigen::Index car = 0; car < 2; ++car) {
    const StateVector s = car_step(StateVector(slice(x.values(), 6 * car, 6)),
                                   ControlVector(slice(u.values(), 2 * car, 2)), params_);
    next.segment(6 * car, 6) = s.values();
  }
  return StateVector(std::move(next));
}

StateVector ParkingEnv::initial_state(Rng& rng) const {
  StateVector x = StateVector::zeros(24);
  for (std::size_t block = 0; block < 4; ++block) {
    const std::size_t o = 6 * block;
    const double heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
    x[o + 0] = rng.uniform(-5, 5);
    x[o + 1] = rng.uniform(-5, 5);
    x[o + 4] = std::cos(heading);
    x[o + 5] = std::sin(heading);
    if (block < 2) {
      const double speed = rng.uniform(-1, 1);
      x[o + 2] = speed * x[o + 4];
      x[o + 3] = speed * x[o + 5];
    }
  }
  return x;
}

ControlVector ParkingEnv::control(Policy policy, const StateVector& x, Rng& rng) const {
  ControlVector u = ControlVector::zeros(4);
  for (std::size_t car = 0; car < 2; ++car) {
    if (policy == Policy::uniform_random) {
      u[2 * car] = rng.uniform(-params_.max_accel, params_.max_accel);
      u[2 * car + 1] = rng.uniform(-params_.max_steer, params_.max_steer);
      continue;
    }
    const std::size_t o = 6 * car;
    const std::size_t g = 12 + 6 * car;
    const Eigen::Vector2d h = unit_heading(x[o + 4], x[o + 5]);
    const Eigen::Vector2d d(x[g] - x[o], x[g + 1] - x[o + 1]);
    const double along = d.dot(h);
    const double across = h[0] * d[1] - h[1] * d[0];
    const double speed = x[o + 2] * h[0] + x[o + 3] * h[1];
    const double target_speed = std::copysign(std::min(0.5 * d.norm(), 2.0), along);
    const double steer = std::atan2(across, std::abs(along)) * (along >= 0 ? 1.0 : -1.0);
    u[2 * car] = clamp_abs(target_speed - speed + rng.uniform(-0.2, 0.2), params_.max_accel);
    u[2 * car + 1] = clamp_abs(steer + rng.uniform(-0.1, 0.1), params_.max_steer);
  }
  return u;
}

// ---- reacher ----

StateVector ReacherEnv::step(const StateVector& x, const ControlVector& u) const {
  return reacher_step(x, u, params_);
}

StateVector ReacherEnv::initial_state(Rng& rng) const {
  ReacherJoints j;
  j.q1 = rng.uniform(-std::numbers::pi, std::numbers::pi);
  j.q2 = rng.uniform(-std::numbers::pi, std::numbers::pi);
  j.dq1 = rng.uniform(-1, 1);
  j.dq2 = rng.uniform(-1, 1);
  const double reach = params_.link1 + params_.link2;
  const double r = reach * std::sqrt(rng.uniform01());
  const double a = rng.uniform(-std::numbers::pi, std::numbers::pi);
  j.target_y = r * std::cos(a);
  j.target_z = r * std::sin(a);
  return reacher_observation(j, params_);
}

ControlVector ReacherEnv::control(Policy policy, const StateVector& x, Rng& rng) const {
  const double limit = params_.max_torque;
  if (policy == Policy::uniform_random)
    return ControlVector{rng.uniform(-limit, limit), rng.uniform(-limit, limit)};
  // Jacobian-transpose pull of the fingertip toward the target, plus damping.
  const double c1 = x[0], c2 = x[1], s1 = x[2], s2 = x[3];
  const double c12 = c1 * c2 - s1 * s2;
  const double s12 = s1 * c2 + c1 * s2;
  const double l1 = params_.link1, l2 = params_.link2;
  const Eigen::Vector2d err(-x[8], -x[9]);
  const double j11 = -l1 * s1 - l2 * s12, j12 = -l2 * s12;
  const double j21 = l1 * c1 + l2 * c12, j22 = l2 * c12;
  const double gain = 40.0;
  const double tau1 = gain * (j11 * err[0] + j21 * err[1]) - 0.5 * x[6];
  const double tau2 = gain * (j12 * err[0] + j22 * err[1]) - 0.5 * x[7];
  return ControlVector{clamp_abs(tau1 + rng.uniform(-0.1, 0.1), limit),
                       clamp_abs(tau2 + rng.uniform(-0.1, 0.1), limit)};
}

std::unique_ptr<Environment> make_environment(const std::string& id) {
  if (id == "parking2") return std::make_unique<ParkingEnv>();
  if (id == "reacher") return std::make_unique<ReacherEnv>();
  throw std::invalid_argument("unknown environment '" + id + "' (expected parking2 or reacher)");
}

}  // namespace symred
