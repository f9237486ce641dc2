#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "parafusion/subgroup.hpp"

namespace parafusion {

inline constexpr Elem kNoImage = ~Elem{0};

/// A homomorphism between subgroups, stored as a total element map.
struct GroupMap {
  Subgroup source;
  Subgroup target;
  /// Indexed by source ambient element; kNoImage outside the source.
  std::vector<Elem> images;

  Elem operator()(Elem x) const { return images[x]; }
  bool is_homomorphism() const;
  bool is_injective() const;
  Subgroup image() const;
};

/// Extends generator images along the Cayley graph of <gens>. Returns
/// nullopt if the assignment is not a well-defined homomorphism.
std::optional<GroupMap> extend_homomorphism(Subgroup const& source, Subgroup const& target,
                                            std::vector<std::pair<Elem, Elem>> const& gen_images);

GroupMap inverse(GroupMap const& f);
/// (g o f)(x) = g(f(x)).
GroupMap compose(GroupMap const& g, GroupMap const& f);
GroupMap identity_map(Subgroup const& h);

/// An isomorphism G -> H extending `pinned` (pairs of source, target
/// elements), or nullopt when none exists. The search order is fixed.
std::optional<GroupMap> isomorphism(Subgroup const& g, Subgroup const& h,
                                    std::vector<std::pair<Elem, Elem>> const& pinned = {},
                                    Limits const& limits = default_limits());

}  // namespace parafusion
