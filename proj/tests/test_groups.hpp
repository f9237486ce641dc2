#pragma once

#include <initializer_list>
#include <string>

#include "parafusion/group.hpp"
#include "parafusion/subgroup.hpp"

namespace parafusion::testing {

inline GroupPtr make_group(std::size_t degree, std::initializer_list<char const*> gens) {
  std::vector<Perm> perms;
  for (auto const* g : gens) perms.push_back(Perm::parse(g, degree));
  return Group::make(PermGroup(degree, std::move(perms)));
}

inline std::string cycle(std::size_t from, std::size_t to) {
  std::string out = "(";
  for (std::size_t i = from; i <= to; ++i) out += std::to_string(i) + (i < to ? " " : "");
  return out + ")";
}

inline GroupPtr symmetric(std::size_t n) {
  if (n < 2) return Group::make(PermGroup(1, {}));
  std::vector<Perm> gens{Perm::parse("(1 2)", n)};
  if (n > 2) gens.push_back(Perm::parse(cycle(1, n), n));
  return Group::make(PermGroup(n, std::move(gens)));
}

inline GroupPtr alternating(std::size_t n) {
  std::vector<Perm> gens;
  for (std::size_t k = 3; k <= n; ++k) gens.push_back(Perm::parse(cycle(k - 2, k), n));
  return Group::make(PermGroup(n, std::move(gens)));
}

inline GroupPtr cyclic(std::size_t n) {
  if (n == 1) return Group::make(PermGroup(1, {}));
  return Group::make(PermGroup(n, {Perm::parse(cycle(1, n), n)}));
}

/// Dihedral group of order 2n acting on an n-gon.
inline GroupPtr dihedral(std::size_t n) {
  std::vector<Point> refl(n);
  for (std::size_t i = 0; i < n; ++i) refl[i] = static_cast<Point>((n - i) % n);
  return Group::make(PermGroup(n, {Perm::parse(cycle(1, n), n), Perm(refl)}));
}

inline Subgroup sub(GroupPtr const& g, std::initializer_list<char const*> gens) {
  std::vector<Perm> perms;
  for (auto const* s : gens) perms.push_back(Perm::parse(s, g->degree()));
  return generate(g, std::span<Perm const>(perms));
}

/// Order 8, nonabelian, five involutions.
inline bool is_dihedral_of_order_8(Subgroup const& h) {
  if (h.order() != 8 || center(h).order() == 8) return false;
  std::size_t involutions = 0;
  h.members.for_each([&](Elem x) { involutions += h.ambient->element_order(x) == 2; });
  return involutions == 5;
}

}  // namespace parafusion::testing
