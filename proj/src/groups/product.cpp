#include <stdexcept>

#include "symred/groups.hpp"

namespace symred {

namespace {

Vector segment(const Vector& v, std::size_t offset, std::size_t len) {
  return v.segment(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(len));
}

void put(Vector& dst, std::size_t offset, const Vector& src) {
  dst.segment(static_cast<Eigen::Index>(offset), src.size()) = src;
}

}  // namespace

ProductGroup::ProductGroup(std::string id, std::vector<Factor> factors)
    : id_(std::move(id)), factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument(id_ + ": product needs at least one factor");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    if (!f.group) throw std::invalid_argument(id_ + ": null factor group");
    if (f.state_offset != n_) {
      throw std::invalid_argument(id_ + ": factor " + std::to_string(i) + " state slice starts at " +
                                  std::to_string(f.state_offset) + ", expected " +
                                  std::to_string(n_) + " (slices must partition the state)");
    }
    if (f.control_offset != n_u_) {
      throw std::invalid_argument(id_ + ": factor " + std::to_string(i) +
                                  " control slice starts at " + std::to_string(f.control_offset) +
                                  ", expected " + std::to_string(n_u_) +
                                  " (slices must partition the control)");
    }
    coord_offsets_.push_back(dim_);
    dim_ += f.group->dim();
    n_ += f.group->state_dim();
    n_u_ += f.group->control_dim();
  }
}

std::vector<std::size_t> ProductGroup::cross_section_indices() const {
  std::vector<std::size_t> out;
  for (const auto& f : factors_)
    for (std::size_t i : f.group->cross_section_indices()) out.push_back(i + f.state_offset);
  return out;
}

std::vector<std::size_t> ProductGroup::reduced_indices() const {
  std::vector<std::size_t> out;
  for (const auto& f : factors_)
    for (std::size_t i : f.group->reduced_indices()) out.push_back(i + f.state_offset);
  return out;
}

Vector ProductGroup::cross_section_constant() const {
  Vector c(static_cast<Eigen::Index>(n_ - reduced_dim()));
  Eigen::Index pos = 0;
  for (const auto& f : factors_) {
    const Vector fc = f.group->cross_section_constant();
    c.segment(pos, fc.size()) = fc;
    pos += fc.size();
  }
  return c;
}

bool ProductGroup::is_linear_action() const {
  for (const auto& f : factors_)
    if (!f.group->is_linear_action()) return false;
  return true;
}

GroupElement ProductGroup::embed(std::size_t factor, const GroupElement& g) const {
  if (factor >= factors_.size()) throw std::invalid_argument(id_ + ": factor index out of range");
  const Group& fg = *factors_[factor].group;
  fg.check_element(g, "embed");
  Vector coords = identity_coords();
  put(coords, coord_offsets_[factor], g.coords);
  return GroupElement{id_, std::move(coords)};
}

Vector ProductGroup::identity_coords() const {
  Vector out(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < factors_.size(); ++i)
    put(out, coord_offsets_[i], factors_[i].group->identity_coords());
  return out;
}

Vector ProductGroup::compose_coords(const Vector& g1, const Vector& g2) const {
  Vector out(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Group& fg = *factors_[i].group;
    const std::size_t off = coord_offsets_[i];
    put(out, off, fg.compose_coords(segment(g1, off, fg.dim()), segment(g2, off, fg.dim())));
  }
  return out;
}

Vector ProductGroup::inverse_coords(const Vector& g) const {
  Vector out(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Group& fg = *factors_[i].group;
    const std::size_t off = coord_offsets_[i];
    put(out, off, fg.inverse_coords(segment(g, off, fg.dim())));
  }
  return out;
}

Vector ProductGroup::act_state_coords(const Vector& g, const Vector& x) const {
  Vector out(x.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    const Group& fg = *f.group;
    put(out, f.state_offset,
        fg.act_state_coords(segment(g, coord_offsets_[i], fg.dim()),
                            segment(x, f.state_offset, fg.state_dim())));
  }
  return out;
}

Vector ProductGroup::act_control_coords(const Vector& g, const Vector& u) const {
  Vector out(u.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    const Group& fg = *f.group;
    if (fg.control_dim() == 0) continue;
    put(out, f.control_offset,
        fg.act_control_coords(segment(g, coord_offsets_[i], fg.dim()),
                              segment(u, f.control_offset, fg.control_dim())));
  }
  return out;
}

Vector ProductGroup::frame_coords(const Vector& x) const {
  Vector out(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    put(out, coord_offsets_[i],
        f.group->frame_coords(segment(x, f.state_offset, f.group->state_dim())));
  }
  return out;
}

Vector ProductGroup::coord_difference(const Vector& a, const Vector& b) const {
  Vector out(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Group& fg = *factors_[i].group;
    const std::size_t off = coord_offsets_[i];
    put(out, off, fg.coord_difference(segment(a, off, fg.dim()), segment(b, off, fg.dim())));
  }
  return out;
}

GroupElement ProductGroup::sample_element(Rng& rng) const {
  Vector out(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < factors_.size(); ++i)
    put(out, coord_offsets_[i], factors_[i].group->sample_element(rng).coords);
  return GroupElement{id_, std::move(out)};
}

StateVector ProductGroup::sample_state(Rng& rng) const {
  Vector out(static_cast<Eigen::Index>(n_));
  for (const auto& f : factors_) put(out, f.state_offset, f.group->sample_state(rng).values());
  return StateVector(std::move(out));
}

ControlVector ProductGroup::sample_control(Rng& rng) const {
  Vector out(static_cast<Eigen::Index>(n_u_));
  for (const auto& f : factors_) {
    if (f.group->control_dim() == 0) continue;
    put(out, f.control_offset, f.group->sample_control(rng).values());
  }
  return ControlVector(std::move(out));
}

}  // namespace symred
