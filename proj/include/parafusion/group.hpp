#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "parafusion/element_set.hpp"
#include "parafusion/limits.hpp"
#include "parafusion/perm.hpp"

namespace parafusion {

/// A finite group given by permutation generators on `degree` points.
class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(std::size_t degree, std::vector<Perm> generators);

  std::size_t degree() const { return degree_; }
  std::vector<Perm> const& generators() const { return generators_; }

  /// The exact element set, sorted by image tuple (identity first).
  /// Throws CapExceeded once the closure passes `limits.enumeration`.
  std::vector<Perm> elements(Limits const& limits = default_limits()) const;

 private:
  std::size_t degree_ = 0;
  std::vector<Perm> generators_;
};

class Group;
using GroupPtr = std::shared_ptr<Group const>;

/**
 * An enumerated permutation group. Elements are indexed 0..order-1 in the
 * sorted order of PermGroup::elements(), so index 0 is the identity and
 * index comparisons give the fixed element ordering used for tie-breaking.
 *
 * Small groups carry a full multiplication table.
 */
class Group {
 public:
  static GroupPtr make(PermGroup const& pg, Limits const& limits = default_limits());

  std::size_t order() const { return perms_.size(); }
  std::size_t degree() const { return source_.degree(); }
  PermGroup const& source() const { return source_; }

  Elem identity() const { return 0; }
  Elem mul(Elem a, Elem b) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a) * perms_.size() + b];
    return mul_slow(a, b);
  }
  Elem inv(Elem a) const { return inverse_[a]; }
  /// g x g^-1
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inverse_[g]); }
  Elem power(Elem a, std::size_t k) const;
  std::size_t element_order(Elem a) const { return orders_[a]; }

  Perm const& perm(Elem a) const { return perms_[a]; }
  std::optional<Elem> find(Perm const& p) const;
  Elem index(Perm const& p) const;

  /// Indices of the source generators.
  std::vector<Elem> const& generators() const { return generators_; }

  ElementSet empty_set() const { return ElementSet(order()); }

 private:
  Group() = default;
  Elem mul_slow(Elem a, Elem b) const;

  PermGroup source_;
  std::vector<Perm> perms_;
  std::unordered_map<Perm, Elem, PermHash> lookup_;
  std::vector<std::uint16_t> table_;
  std::vector<Elem> inverse_;
  std::vector<std::size_t> orders_;
  std::vector<Elem> generators_;
};

}  // namespace parafusion
