#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "parafusion/subgroup.hpp"

namespace parafusion {

/// Subgroups of a group, sorted by subgroup_less, with conjugacy classes.
struct Lattice {
  Subgroup group;
  std::vector<Subgroup> subgroups;
  std::vector<std::size_t> class_of;
  /// Each class lists subgroup indices ascending; classes ordered by first member.
  std::vector<std::vector<std::size_t>> classes;

  std::optional<std::size_t> find(ElementSet const& members) const;
  std::size_t size() const { return subgroups.size(); }

 private:
  friend Lattice make_lattice(Subgroup const&, std::vector<Subgroup>, bool);
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index_;
};

/// Full lattice by cyclic extension. Throws CapExceeded if |H| > limits.lattice.
Lattice subgroup_lattice(Subgroup const& h, Limits const& limits = default_limits());

/// Builds a Lattice from an explicit subgroup list, optionally computing
/// conjugacy classes under the group.
Lattice make_lattice(Subgroup const& h, std::vector<Subgroup> subgroups, bool with_classes);

/// Every subgroup L with K <= L <= H, sorted by subgroup_less.
std::vector<Subgroup> overgroups(Subgroup const& h, Subgroup const& k,
                                 Limits const& limits = default_limits());

/// Conjugacy-class representatives of the subgroups of P under H-conjugation
/// that land inside P, i.e. one subgroup of P per H-class meeting P's lattice.
std::vector<Subgroup> subgroup_class_reps(Subgroup const& h, Subgroup const& p,
                                          Limits const& limits = default_limits());

}  // namespace parafusion
