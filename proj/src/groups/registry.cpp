#include <charconv>
#include <stdexcept>

#include "symred/groups.hpp"

namespace symred {

std::shared_ptr<const ProductGroup> make_parking_group() {
  auto car = std::make_shared<const SE2CarGroup>();
  auto goal = std::make_shared<const ConstantTranslationGroup>(6);
  return std::make_shared<const ProductGroup>(
      "parking2", std::vector<ProductGroup::Factor>{
                      {car, 0, 0}, {car, 6, 2}, {goal, 12, 4}, {goal, 18, 4}});
}

std::shared_ptr<const ReacherGroup> make_reacher_group() {
  return std::make_shared<const ReacherGroup>();
}

std::shared_ptr<const Group> make_group(const std::string& id) {
  if (id == "se2car") return std::make_shared<const SE2CarGroup>();
  if (id == "so2car") return std::make_shared<const SO2CarGroup>();
  if (id == "parking2") return make_parking_group();
  if (id == "reacher") return make_reacher_group();
  if (id.rfind("const:", 0) == 0) {
    const std::string digits = id.substr(6);
    std::size_t d = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && d > 0)
      return std::make_shared<const ConstantTranslationGroup>(d);
  }
  throw std::invalid_argument("unknown group id '" + id +
                              "' (expected se2car, so2car, parking2, reacher or const:<d>)");
}

std::vector<std::string> builtin_group_ids() {
  return {"se2car", "so2car", "parking2", "reacher", "const:6"};
}

}  // namespace symred
