#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "symred/group.hpp"

namespace symred {

/// SE(2) acting on a planar car state x = (y, z, v_y, v_z, h_y, h_z).
///
/// Elements are (y', z', theta') with theta' in (-pi, pi]. The action rotates
/// each of the (position, velocity, heading) pairs by theta' and then
/// translates the position by (y', z'). Composition is the semidirect-product
/// law (R_{theta1} t2 + t1, theta1 + theta2).
///
/// Cross-section: (y, z, h_y, h_z) = (0, 0, 1, 0). The heading is renormalised
/// before the frame is computed; a heading norm below 1e-8 is the singular set.
class SE2CarGroup : public Group {
 public:
  std::string id() const override { return "se2car"; }
  std::size_t dim() const override { return 3; }
  std::size_t state_dim() const override { return 6; }
  std::size_t control_dim() const override { return 2; }
  std::vector<std::size_t> cross_section_indices() const override { return {0, 1, 4, 5}; }
  std::vector<std::size_t> reduced_indices() const override { return {2, 3}; }
  Vector cross_section_constant() const override;

  /// The car pose (y, z, arctan2(h_z, h_y)); this is the inverse of the frame.
  GroupElement pose(const StateVector& x) const;

  GroupElement sample_element(Rng& rng) const override;
  StateVector sample_state(Rng& rng) const override;

 protected:
  Vector compose_coords(const Vector& g1, const Vector& g2) const override;
  Vector inverse_coords(const Vector& g) const override;
  Vector act_state_coords(const Vector& g, const Vector& x) const override;
  Vector frame_coords(const Vector& x) const override;
  Vector coord_difference(const Vector& a, const Vector& b) const override;

  Vector pose_coords(const Vector& x) const;
};

/// Rotation-only subgroup SO(2) acting on the same car state about the origin.
/// The action is linear. Cross-section (h_y, h_z) = (1, 0).
class SO2CarGroup : public Group {
 public:
  std::string id() const override { return "so2car"; }
  std::size_t dim() const override { return 1; }
  std::size_t state_dim() const override { return 6; }
  std::size_t control_dim() const override { return 2; }
  std::vector<std::size_t> cross_section_indices() const override { return {4, 5}; }
  std::vector<std::size_t> reduced_indices() const override { return {0, 1, 2, 3}; }
  Vector cross_section_constant() const override;
  bool is_linear_action() const override { return true; }

  GroupElement sample_element(Rng& rng) const override;
  StateVector sample_state(Rng& rng) const override;

 protected:
  Vector compose_coords(const Vector& g1, const Vector& g2) const override;
  Vector inverse_coords(const Vector& g) const override;
  Vector act_state_coords(const Vector& g, const Vector& x) const override;
  Vector frame_coords(const Vector& x) const override;
  Vector coord_difference(const Vector& a, const Vector& b) const override;
};

/// (R^d, +) acting on R^d by translation. Every state maps to the origin, so
/// the reduced space is empty.
class ConstantTranslationGroup : public Group {
 public:
  explicit ConstantTranslationGroup(std::size_t d);

  std::string id() const override { return "const:" + std::to_string(d_); }
  std::size_t dim() const override { return d_; }
  std::size_t state_dim() const override { return d_; }
  std::size_t control_dim() const override { return 0; }
  std::vector<std::size_t> cross_section_indices() const override;
  std::vector<std::size_t> reduced_indices() const override { return {}; }
  Vector cross_section_constant() const override;

  GroupElement sample_element(Rng& rng) const override;
  StateVector sample_state(Rng& rng) const override;

 protected:
  Vector compose_coords(const Vector& g1, const Vector& g2) const override;
  Vector inverse_coords(const Vector& g) const override;
  Vector act_state_coords(const Vector& g, const Vector& x) const override;
  Vector frame_coords(const Vector& x) const override;

 private:
  std::size_t d_;
};

/// Group over the 11-dim reacher observation, elements (theta', d1, d2, d3).
///
/// Observation layout (0-based): 0 cos q1, 1 cos q2, 2 sin q1, 3 sin q2,
/// 4-5 target, 6-7 joint rates, 8-9 fingertip minus target, 10 fingertip z.
/// theta' rotates (cos q1, sin q1); the target is translated by (d1, d2)
/// and then rotated; fingertip-minus-target is translated by (-d1, -d2) and
/// then rotated; entry 10 is shifted by d3. All other entries are fixed.
///
/// Cross-section: cos q1 = 1, sin q1 = 0, target = 0, entry 10 = 0.
class ReacherGroup : public Group {
 public:
  std::string id() const override { return "reacher"; }
  std::size_t dim() const override { return 4; }
  std::size_t state_dim() const override { return 11; }
  std::size_t control_dim() const override { return 2; }
  std::vector<std::size_t> cross_section_indices() const override { return {0, 2, 4, 5, 10}; }
  std::vector<std::size_t> reduced_indices() const override { return {1, 3, 6, 7, 8, 9}; }
  Vector cross_section_constant() const override;

  GroupElement sample_element(Rng& rng) const override;
  StateVector sample_state(Rng& rng) const override;

 protected:
  Vector compose_coords(const Vector& g1, const Vector& g2) const override;
  Vector inverse_coords(const Vector& g) const override;
  Vector act_state_coords(const Vector& g, const Vector& x) const override;
  Vector frame_coords(const Vector& x) const override;
  Vector coord_difference(const Vector& a, const Vector& b) const override;
};

/// Direct product of groups, each acting on a contiguous slice of the state
/// and control vectors. Element coordinates are the concatenation of factor
/// coordinates; composition and inverse act factorwise.
class ProductGroup : public Group {
 public:
  struct Factor {
    std::shared_ptr<const Group> group;
    std::size_t state_offset = 0;
    std::size_t control_offset = 0;
  };

  /// Throws std::invalid_argument unless the state slices partition [0, n)
  /// and the control slices partition [0, n_u), both in factor order.
  ProductGroup(std::string id, std::vector<Factor> factors);

  std::string id() const override { return id_; }
  std::size_t dim() const override { return dim_; }
  std::size_t state_dim() const override { return n_; }
  std::size_t control_dim() const override { return n_u_; }
  std::vector<std::size_t> cross_section_indices() const override;
  std::vector<std::size_t> reduced_indices() const override;
  Vector cross_section_constant() const override;
  bool is_linear_action() const override;

  const std::vector<Factor>& factors() const { return factors_; }

  /// Element that is g_i on factor i and the identity elsewhere.
  GroupElement embed(std::size_t factor, const GroupElement& g) const;

  GroupElement sample_element(Rng& rng) const override;
  StateVector sample_state(Rng& rng) const override;
  ControlVector sample_control(Rng& rng) const override;

 protected:
  Vector identity_coords() const override;
  Vector compose_coords(const Vector& g1, const Vector& g2) const override;
  Vector inverse_coords(const Vector& g) const override;
  Vector act_state_coords(const Vector& g, const Vector& x) const override;
  Vector act_control_coords(const Vector& g, const Vector& u) const override;
  Vector frame_coords(const Vector& x) const override;
  Vector coord_difference(const Vector& a, const Vector& b) const override;

 private:
  std::string id_;
  std::vector<Factor> factors_;
  std::vector<std::size_t> coord_offsets_;
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::size_t n_u_ = 0;
};

/// Two SE(2) cars on slices [0,6) and [6,12) and two constant goals on
/// [12,18) and [18,24). n = 24, r = 18, reduced dim 4, control dim 4.
std::shared_ptr<const ProductGroup> make_parking_group();

std::shared_ptr<const ReacherGroup> make_reacher_group();

/// Group lookup by id: "se2car", "so2car", "parking2", "reacher", "const:<d>".
/// Throws std::invalid_argument for unknown ids.
std::shared_ptr<const Group> make_group(const std::string& id);

std::vector<std::string> builtin_group_ids();

}  // namespace symred
