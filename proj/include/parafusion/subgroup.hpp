#pragma once

#include <span>
#include <vector>

#include "parafusion/group.hpp"

namespace parafusion {

/// A subgroup of an enumerated ambient group, stored as an element set.
struct Subgroup {
  GroupPtr ambient;
  ElementSet members;
  std::vector<Elem> gens;

  std::size_t order() const { return members.size(); }
  bool contains(Elem e) const { return members.contains(e); }
  std::vector<Elem> elements() const { return members.to_vector(); }
  bool is_trivial() const { return order() == 1; }

  friend bool operator==(Subgroup const& a, Subgroup const& b) {
    return a.ambient == b.ambient && a.members == b.members;
  }
};

/// Total order used for every tie-break: by order, then sorted element list.
bool subgroup_less(Subgroup const& a, Subgroup const& b);

Subgroup whole(GroupPtr const& g);
Subgroup trivial(GroupPtr const& g);
Subgroup generate(GroupPtr const& g, std::span<Elem const> gens);
Subgroup generate(GroupPtr const& g, std::span<Perm const> gens);
/// Subgroup from an element set already known to be closed.
Subgroup from_closed_set(GroupPtr const& g, ElementSet members);

Subgroup join(Subgroup const& a, Subgroup const& b);
Subgroup join_element(Subgroup const& a, Elem x);
Subgroup intersect(Subgroup const& a, Subgroup const& b);
bool is_subgroup_of(Subgroup const& a, Subgroup const& b);
bool is_normal_in(Subgroup const& n, Subgroup const& h);

/// g H g^-1.
Subgroup conjugate(Subgroup const& h, Elem g);
ElementSet conjugate_set(GroupPtr const& g, ElementSet const& s, Elem x);

/// { g in H : g P g^-1 <= Q }.
ElementSet transporter(Subgroup const& h, Subgroup const& p, Subgroup const& q);
Subgroup normalizer(Subgroup const& h, Subgroup const& p);
Subgroup centralizer(Subgroup const& h, Subgroup const& p);
Subgroup center(Subgroup const& h);
Subgroup derived_subgroup(Subgroup const& h);
/// Smallest normal subgroup of H containing K.
Subgroup normal_closure(Subgroup const& h, Subgroup const& k);

bool is_prime(std::size_t n);
bool is_p_power(std::size_t n, std::size_t p);
std::size_t p_part(std::size_t n, std::size_t p);
bool is_p_group(Subgroup const& h, std::size_t p);

Subgroup sylow(Subgroup const& h, std::size_t p);
bool is_sylow(Subgroup const& h, Subgroup const& s, std::size_t p);
/// Largest normal p-subgroup O_p(H).
Subgroup core_p(Subgroup const& h, std::size_t p);
/// Subgroup generated by all Sylow p-subgroups, O^{p'}(H).
Subgroup residual_pprime(Subgroup const& h, std::size_t p);
bool is_pprime_reduced_pconstrained(Subgroup const& h, std::size_t p);

/// Left cosets xK of K in H, each ordered by its smallest element index.
std::vector<ElementSet> left_cosets(Subgroup const& h, Subgroup const& k);

/// The action of H on the left cosets of a normal subgroup N.
struct QuotientAction {
  PermGroup group;
  std::vector<ElementSet> cosets;
  /// image[i] is the permutation induced by the i-th element of H (ascending).
  std::vector<Perm> image;
  std::vector<Elem> domain;
  Perm const& image_of(Elem h) const;
};
QuotientAction quotient_action(Subgroup const& h, Subgroup const& n);

/// Does A B = H as a set (A, B <= H)?
bool product_set_equals(Subgroup const& h, Subgroup const& a, Subgroup const& b);

/// Whether H has a strongly p-embedded subgroup: some proper M containing a
/// nontrivial Sylow p-subgroup Q with xQx^-1 meeting Q trivially for x outside M.
bool strongly_p_embedded_exists(Subgroup const& h, std::size_t p);

}  // namespace parafusion
