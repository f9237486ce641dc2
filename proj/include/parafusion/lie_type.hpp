#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parafusion/subgroup.hpp"

namespace parafusion {

/// A catalog match for a small group of Lie type in characteristic p.
struct LieTypeLabel {
  std::string name;   // classical name, e.g. "L3(2)" or "L2(2)xL2(2)"
  std::string type;   // Lie notation, e.g. "A2(2)", "B2(2)'", "A1(2)xA1(2)"
  std::size_t rank = 0;
  std::size_t q = 0;
  /// Coxeter bond m for rank two (2 for products, 3/4/6 otherwise); 0 for rank one.
  std::size_t coxeter_m = 0;
};

/// Normal subgroups of H, sorted by subgroup_less.
std::vector<Subgroup> normal_subgroups(Subgroup const& h);

/// Matches H against the fixed catalog; nullopt means "not in the catalog".
std::optional<LieTypeLabel> identify_lie_type(Subgroup const& h, std::size_t p);

}  // namespace parafusion
