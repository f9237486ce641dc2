#include "parafusion/lattice.hpp"

#include <algorithm>

#include "parafusion/errors.hpp"

namespace parafusion {

std::optional<std::size_t> Lattice::find(ElementSet const& members) const {
  auto it = index_.find(members);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Lattice make_lattice(Subgroup const& h, std::vector<Subgroup> subgroups, bool with_classes) {
  std::sort(subgroups.begin(), subgroups.end(), subgroup_less);
  Lattice lat;
  lat.group = h;
  lat.subgroups = std::move(subgroups);
  for (std::size_t i = 0; i < lat.subgroups.size(); ++i)
    lat.index_.emplace(lat.subgroups[i].members, i);
  if (!with_classes) return lat;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  lat.class_of.assign(lat.subgroups.size(), kNone);
  auto const elems = h.elements();
  for (std::size_t i = 0; i < lat.subgroups.size(); ++i) {
    if (lat.class_of[i] != kNone) continue;
    std::size_t const cls = lat.classes.size();
    std::vector<std::size_t> members;
    for (Elem x : elems) {
      auto j = lat.find(conjugate_set(h.ambient, lat.subgroups[i].members, x));
      if (!j) throw InvalidArgument("lattice is not closed under conjugation");
      if (lat.class_of[*j] == kNone) {
        lat.class_of[*j] = cls;
        members.push_back(*j);
      }
    }
    std::sort(members.begin(), members.end());
    lat.classes.push_back(std::move(members));
  }
  return lat;
}

Lattice subgroup_lattice(Subgroup const& h, Limits const& limits) {
  if (h.order() > limits.lattice)
    throw CapExceeded("lattice cap: group order " + std::to_string(h.order()) + " exceeds " +
                      std::to_string(limits.lattice));
  auto const& g = *h.ambient;

  // Every subgroup is generated by cyclic subgroups of prime-power order.
  std::vector<Subgroup> cyclic;
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> seen;
  h.members.for_each([&](Elem x) {
    std::size_t o = g.element_order(x);
    if (o == 1) return;
    std::size_t q = o;
    for (std::size_t d = 2; d <= o; ++d)
      if (o % d == 0) {
        q = d;
        break;
      }
    if (!is_p_power(o, q)) return;
    Elem gens[] = {x};
    Subgroup c = generate(h.ambient, gens);
    if (seen.count(c.members)) return;
    seen.emplace(c.members, cyclic.size());
    cyclic.push_back(std::move(c));
  });

  std::vector<Subgroup> all{trivial(h.ambient)};
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index;
  index.emplace(all[0].members, 0);
  for (std::size_t head = 0; head < all.size(); ++head) {
    for (auto const& c : cyclic) {
      if (c.members.is_subset_of(all[head].members)) continue;
      Subgroup k = join_element(all[head], c.gens.front());
      if (index.count(k.members)) continue;
      index.emplace(k.members, all.size());
      all.push_back(std::move(k));
    }
  }
  return make_lattice(h, std::move(all), true);
}

std::vector<Subgroup> overgroups(Subgroup const& h, Subgroup const& k, Limits const& limits) {
  if (!is_subgroup_of(k, h)) throw NotSubgroupChain("subgroup is not contained in the group");
  auto const& g = *h.ambient;
  std::vector<Subgroup> all{k};
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index;
  index.emplace(k.members, 0);
  auto const kelems = k.elements();
  for (std::size_t head = 0; head < all.size(); ++head) {
    Subgroup const cur = all[head];
    // <L, x> only depends on the double coset K x K, so skip repeats.
    ElementSet tried = cur.members;
    auto const h_elems = h.elements();
    for (Elem x : h_elems) {
      if (tried.contains(x)) continue;
      for (Elem a : kelems)
        for (Elem b : kelems) tried.insert(g.mul(g.mul(a, x), b));
      Subgroup l = join_element(cur, x);
      if (index.count(l.members)) continue;
      index.emplace(l.members, all.size());
      all.push_back(std::move(l));
      if (all.size() > limits.lattice)
        throw CapExceeded("overgroup interval has more than " + std::to_string(limits.lattice) +
                          " members");
    }
  }
  std::sort(all.begin(), all.end(), subgroup_less);
  return all;
}

std::vector<Subgroup> subgroup_class_reps(Subgroup const& h, Subgroup const& p,
                                          Limits const& limits) {
  Lattice lat = subgroup_lattice(p, limits);
  std::vector<bool> done(lat.size(), false);
  std::vector<Subgroup> reps;
  auto const elems = h.elements();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (done[i]) continue;
    reps.push_back(lat.subgroups[i]);
    for (Elem x : elems) {
      auto j = lat.find(conjugate_set(h.ambient, lat.subgroups[i].members, x));
      if (j) done[*j] = true;
    }
  }
  return reps;
}

}  // namespace parafusion
