#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "symred/rng.hpp"
#include "symred/types.hpp"

namespace symred {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Signed angular difference a - b wrapped into (-pi, pi].
double angle_difference(double a, double b);

/// A finite-dimensional Lie group acting on the state space R^n and the
/// control space R^{n_u}, together with a single-chart moving frame.
///
/// The state space is split into X^a (cross_section_indices) and X^b
/// (reduced_indices). The cross-section is {x | x^a = c}; moving_frame(x)
/// returns the element g with (g . x)^a = c, and reduce(x) is the X^b part
/// of g . x. Implementations are immutable after construction and every
/// operation is a pure function, so instances may be shared across threads.
///
/// The public operations validate group ids and dimensions and then call the
/// protected coordinate-level hooks.
class Group {
 public:
  virtual ~Group() = default;

  virtual std::string id() const = 0;
  /// Group dimension r.
  virtual std::size_t dim() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t control_dim() const = 0;
  /// Dimension of X^b.
  std::size_t reduced_dim() const { return reduced_indices().size(); }

  /// Indices of X^a in the state vector, in the order matching
  /// cross_section_constant().
  virtual std::vector<std::size_t> cross_section_indices() const = 0;
  /// Indices of X^b in the state vector, in reduced-coordinate order.
  virtual std::vector<std::size_t> reduced_indices() const = 0;
  virtual Vector cross_section_constant() const = 0;

  /// True when every phi_g is linear, so phi_g(a + b) = phi_g(a) + phi_g(b).
  virtual bool is_linear_action() const { return false; }

  GroupElement identity() const;
  GroupElement compose(const GroupElement& g1, const GroupElement& g2) const;
  GroupElement inverse(const GroupElement& g) const;
  StateVector act_state(const GroupElement& g, const StateVector& x) const;
  ControlVector act_control(const GroupElement& g, const ControlVector& u) const;

  /// Throws std::domain_error on the chart's singular set.
  GroupElement moving_frame(const StateVector& x) const;
  ReducedState reduce(const StateVector& x) const;
  /// X^b projection of a state (no frame applied).
  ReducedState project_reduced(const StateVector& x) const;
  /// The unique point x of the cross-section with reduce(x) = x_bar.
  StateVector reconstruct_on_cross_section(const ReducedState& x_bar) const;

  /// Max-abs coordinate distance, with angular coordinates compared modulo 2 pi.
  double element_distance(const GroupElement& a, const GroupElement& b) const;

  GroupElement make_element(Vector coords) const;

  // Samplers used by the property suites.
  virtual GroupElement sample_element(Rng& rng) const = 0;
  virtual StateVector sample_state(Rng& rng) const = 0;
  virtual ControlVector sample_control(Rng& rng) const;

 protected:
  friend class ProductGroup;

  virtual Vector identity_coords() const;
  virtual Vector compose_coords(const Vector& g1, const Vector& g2) const = 0;
  virtual Vector inverse_coords(const Vector& g) const = 0;
  virtual Vector act_state_coords(const Vector& g, const Vector& x) const = 0;
  virtual Vector act_control_coords(const Vector& g, const Vector& u) const;
  virtual Vector frame_coords(const Vector& x) const = 0;
  /// Per-coordinate difference used by element_distance.
  virtual Vector coord_difference(const Vector& a, const Vector& b) const;

  void check_element(const GroupElement& g, const char* op) const;
  void check_state(const StateVector& x, const char* op) const;
};

}  // namespace symred
