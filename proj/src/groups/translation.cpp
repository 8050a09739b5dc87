#include <numeric>
#include <stdexcept>

#include "symred/groups.hpp"

namespace symred {

ConstantTranslationGroup::ConstantTranslationGroup(std::size_t d) : d_(d) {
  if (d == 0) throw std::invalid_argument("const group dimension must be positive");
}

std::vector<std::size_t> ConstantTranslationGroup::cross_section_indices() const {
  std::vector<std::size_t> idx(d_);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

Vector ConstantTranslationGroup::cross_section_constant() const {
  return Vector::Zero(static_cast<Eigen::Index>(d_));
}

Vector ConstantTranslationGroup::compose_coords(const Vector& g1, const Vector& g2) const {
  return g1 + g2;
}

Vector ConstantTranslationGroup::inverse_coords(const Vector& g) const { return -g; }

Vector ConstantTranslationGroup::act_state_coords(const Vector& g, const Vector& x) const {
  return x + g;
}

Vector ConstantTranslationGroup::frame_coords(const Vector& x) const { return -x; }

GroupElement ConstantTranslationGroup::sample_element(Rng& rng) const {
  Vector g(static_cast<Eigen::Index>(d_));
  for (auto& v : g) v = rng.uniform(-5, 5);
  return GroupElement{id(), std::move(g)};
}

StateVector ConstantTranslationGroup::sample_state(Rng& rng) const {
  StateVector x = StateVector::zeros(d_);
  for (std::size_t i = 0; i < d_; ++i) x[i] = rng.uniform(-5, 5);
  return x;
}

}  // namespace symred
