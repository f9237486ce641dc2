#include "parafusion/chamber.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "parafusion/errors.hpp"
#include "parafusion/group.hpp"
#include "parafusion/isomorphism.hpp"
#include "parafusion/lie_type.hpp"

namespace parafusion {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Groups 0..n-1 by union-find root, ordered by smallest member.
std::vector<std::vector<std::size_t>> classes_of(UnionFind& uf, std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = uf.find(x);
    if (slot[r] == SIZE_MAX) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(x);
  }
  return out;
}

CosetProvenance const& provenance_of(ChamberSystem const& c) {
  if (!c.provenance) throw NoProvenance("chamber system has no coset data");
  return *c.provenance;
}

}  // namespace

// ---------------------------------------------------------------- chamber systems

ChamberSystem::ChamberSystem(std::size_t count, std::vector<std::vector<std::size_t>> panel_of)
    : count_(count) {
  for (auto& labels : panel_of) {
    if (labels.size() != count) throw InvalidArgument("panel labels do not cover every chamber");
    std::map<std::size_t, std::size_t> ids;
    std::vector<std::size_t> normalized(count);
    std::vector<std::vector<std::size_t>> panels;
    for (std::size_t c = 0; c < count; ++c) {
      auto [it, fresh] = ids.try_emplace(labels[c], panels.size());
      if (fresh) panels.emplace_back();
      normalized[c] = it->second;
      panels[it->second].push_back(c);
    }
    panel_of_.push_back(std::move(normalized));
    panels_.push_back(std::move(panels));
  }
}

bool ChamberSystem::connected() const {
  return count_ > 0 && connected_components(*this).size() == 1;
}

Json ChamberSystem::to_json() const {
  Json panels = Json::array();
  for (auto const& type : panels_) panels.push_back(type);
  return Json{{"chambers", count_}, {"rank", rank()}, {"panels", panels}};
}

ChamberSystem from_parabolic(Subgroup const& g, Subgroup const& b,
                             std::vector<Subgroup> const& parabolics, Limits const& limits) {
  if (!is_subgroup_of(b, g)) throw NotSubgroupChain("B is not contained in G");
  for (std::size_t i = 0; i < parabolics.size(); ++i)
    if (!is_subgroup_of(b, parabolics[i]) || !is_subgroup_of(parabolics[i], g))
      throw NotSubgroupChain("parabolic " + std::to_string(i + 1) + " does not lie between B and G");
  std::size_t const index = g.order() / b.order();
  if (index > limits.chambers)
    throw CapExceeded("chamber cap: |G:B| = " + std::to_string(index) + " exceeds " +
                      std::to_string(limits.chambers));

  auto const& amb = *g.ambient;
  CosetProvenance prov{g, b, parabolics, {}, std::vector<std::uint32_t>(amb.order(), kNoChamber)};
  auto const cosets = left_cosets(g, b);
  for (std::size_t c = 0; c < cosets.size(); ++c) {
    prov.reps.push_back(cosets[c].to_vector().front());
    cosets[c].for_each([&](Elem x) { prov.chamber_of[x] = static_cast<std::uint32_t>(c); });
  }
  std::vector<std::vector<std::size_t>> labels;
  std::vector<std::uint32_t> block(amb.order());
  for (auto const& gi : parabolics) {
    auto const big = left_cosets(g, gi);
    for (std::size_t k = 0; k < big.size(); ++k)
      big[k].for_each([&](Elem x) { block[x] = static_cast<std::uint32_t>(k); });
    std::vector<std::size_t> l(cosets.size());
    for (std::size_t c = 0; c < cosets.size(); ++c) l[c] = block[prov.reps[c]];
    labels.push_back(std::move(l));
  }
  ChamberSystem out(cosets.size(), std::move(labels));
  out.provenance = std::move(prov);
  return out;
}

std::vector<std::size_t> action_of(ChamberSystem const& c, Elem x) {
  auto const& prov = provenance_of(c);
  auto const& amb = *prov.group.ambient;
  if (!prov.group.contains(x)) throw InvalidArgument("element outside the acting group");
  std::vector<std::size_t> out(c.count());
  for (std::size_t k = 0; k < c.count(); ++k) out[k] = prov.chamber_of[amb.mul(x, prov.reps[k])];
  return out;
}

InducedSystem induced(ChamberSystem const& c, std::vector<std::size_t> chambers) {
  std::sort(chambers.begin(), chambers.end());
  chambers.erase(std::unique(chambers.begin(), chambers.end()), chambers.end());
  std::vector<std::vector<std::size_t>> labels(c.rank(), std::vector<std::size_t>(chambers.size()));
  for (std::size_t i = 0; i < c.rank(); ++i)
    for (std::size_t k = 0; k < chambers.size(); ++k) labels[i][k] = c.panel_of(i, chambers[k]);
  return InducedSystem{ChamberSystem(chambers.size(), std::move(labels)), std::move(chambers)};
}

std::vector<std::vector<std::size_t>> connected_components(ChamberSystem const& c,
                                                           std::vector<std::size_t> const& types) {
  UnionFind uf(c.count());
  for (std::size_t i : types)
    for (auto const& panel : c.panels(i))
      for (std::size_t x : panel) uf.unite(panel.front(), x);
  return classes_of(uf, c.count());
}

std::vector<std::vector<std::size_t>> connected_components(ChamberSystem const& c) {
  std::vector<std::size_t> all(c.rank());
  std::iota(all.begin(), all.end(), 0);
  return connected_components(c, all);
}

InducedSystem residue(ChamberSystem const& c, std::size_t chamber, std::vector<std::size_t> const& types) {
  if (chamber >= c.count()) throw InvalidArgument("chamber out of range");
  for (std::size_t i : types)
    if (i >= c.rank()) throw InvalidArgument("type out of range");
  std::vector<char> seen(c.count(), 0);
  std::vector<std::size_t> members{chamber};
  seen[chamber] = 1;
  for (std::size_t head = 0; head < members.size(); ++head)
    for (std::size_t i : types)
      for (std::size_t y : c.panel(i, members[head]))
        if (!seen[y]) {
          seen[y] = 1;
          members.push_back(y);
        }
  std::sort(members.begin(), members.end());
  std::vector<std::vector<std::size_t>> labels;
  for (std::size_t i : types) {
    std::vector<std::size_t> l;
    for (std::size_t x : members) l.push_back(c.panel_of(i, x));
    labels.push_back(std::move(l));
  }
  InducedSystem out{ChamberSystem(members.size(), std::move(labels)), members};

  if (c.provenance && chamber == 0) {
    auto const& prov = *c.provenance;
    Subgroup gj = prov.borel;
    std::vector<Subgroup> parabolics;
    for (std::size_t i : types) {
      gj = join(gj, prov.parabolics[i]);
      parabolics.push_back(prov.parabolics[i]);
    }
    CosetProvenance sub{gj, prov.borel, std::move(parabolics), {},
                        std::vector<std::uint32_t>(prov.chamber_of.size(), kNoChamber)};
    for (std::size_t k = 0; k < members.size(); ++k) sub.reps.push_back(prov.reps[members[k]]);
    gj.members.for_each([&](Elem x) {
      auto it = std::lower_bound(members.begin(), members.end(), prov.chamber_of[x]);
      sub.chamber_of[x] = static_cast<std::uint32_t>(it - members.begin());
    });
    out.system.provenance = std::move(sub);
  }
  return out;
}

InducedSystem fixed_points(ChamberSystem const& c, Subgroup const& p) {
  auto const& prov = provenance_of(c);
  if (p.ambient != prov.group.ambient || !is_subgroup_of(p, prov.group))
    throw InvalidArgument("P is not a subgroup of the acting group");
  auto const& amb = *prov.group.ambient;
  std::vector<std::size_t> fixed;
  for (std::size_t k = 0; k < c.count(); ++k) {
    bool all = true;
    for (Elem x : p.gens)
      if (prov.chamber_of[amb.mul(x, prov.reps[k])] != k) {
        all = false;
        break;
      }
    if (all) fixed.push_back(k);
  }
  return induced(c, std::move(fixed));
}

InducedSystem quotient(ChamberSystem const& c, std::vector<std::vector<std::size_t>> const& generators) {
  UnionFind uf(c.count());
  for (auto const& g : generators) {
    if (g.size() != c.count()) throw InvalidArgument("generator is not a chamber permutation");
    for (std::size_t k = 0; k < c.count(); ++k) uf.unite(k, g[k]);
  }
  auto const orbits = classes_of(uf, c.count());
  std::vector<std::size_t> orbit_of(c.count());
  for (std::size_t o = 0; o < orbits.size(); ++o)
    for (std::size_t x : orbits[o]) orbit_of[x] = o;

  std::vector<std::vector<std::size_t>> labels;
  for (std::size_t i = 0; i < c.rank(); ++i) {
    UnionFind panels(orbits.size());
    for (auto const& panel : c.panels(i))
      for (std::size_t x : panel) panels.unite(orbit_of[panel.front()], orbit_of[x]);
    std::vector<std::size_t> l(orbits.size());
    for (std::size_t o = 0; o < orbits.size(); ++o) l[o] = panels.find(o);
    labels.push_back(std::move(l));
  }
  return InducedSystem{ChamberSystem(orbits.size(), std::move(labels)), std::move(orbit_of)};
}

InducedSystem quotient(ChamberSystem const& c, Subgroup const& h) {
  std::vector<std::vector<std::size_t>> gens;
  for (Elem x : h.gens) gens.push_back(action_of(c, x));
  return quotient(c, gens);
}

std::vector<std::vector<std::size_t>> induced_action(ChamberSystem const& c, InducedSystem const& sub,
                                                     Subgroup const& h) {
  std::vector<std::vector<std::size_t>> out;
  for (Elem x : h.gens) {
    auto const full = action_of(c, x);
    std::vector<std::size_t> perm(sub.map.size());
    for (std::size_t k = 0; k < sub.map.size(); ++k) {
      auto it = std::lower_bound(sub.map.begin(), sub.map.end(), full[sub.map[k]]);
      if (it == sub.map.end() || *it != full[sub.map[k]])
        throw InvalidArgument("group does not preserve the subsystem");
      perm[k] = static_cast<std::size_t>(it - sub.map.begin());
    }
    out.push_back(std::move(perm));
  }
  return out;
}

// ---------------------------------------------------------------- Rep(P, C)

namespace {

using Tuple = std::vector<Elem>;

std::vector<Tuple> injections(Subgroup const& p, Subgroup const& b, Limits const& limits) {
  auto const& amb = *b.ambient;
  std::vector<std::vector<Elem>> candidates;
  for (Elem x : p.gens) {
    std::vector<Elem> c;
    b.members.for_each([&](Elem y) {
      if (amb.element_order(y) == amb.element_order(x)) c.push_back(y);
    });
    candidates.push_back(std::move(c));
  }
  std::vector<Tuple> out;
  std::size_t tried = 0;
  Tuple current(p.gens.size());
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == p.gens.size()) {
      if (++tried > limits.injections)
        throw CapExceeded("injection cap: more than " + std::to_string(limits.injections) +
                          " candidate maps P -> B");
      std::vector<std::pair<Elem, Elem>> pairs;
      for (std::size_t j = 0; j < current.size(); ++j) pairs.emplace_back(p.gens[j], current[j]);
      auto f = extend_homomorphism(p, b, pairs);
      if (f && f->is_injective()) out.push_back(current);
      return;
    }
    for (Elem y : candidates[k]) {
      current[k] = y;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// Smallest conjugate of the tuple under K.
Tuple canonical(Tuple const& t, Subgroup const& k) {
  auto const& amb = *k.ambient;
  Tuple best = t, cur(t.size());
  k.members.for_each([&](Elem g) {
    for (std::size_t j = 0; j < t.size(); ++j) cur[j] = amb.conj(g, t[j]);
    if (cur < best) best = cur;
  });
  return best;
}

Subgroup image_subgroup(Subgroup const& b, Tuple const& t) { return generate(b.ambient, t); }

}  // namespace

RepSystem rep_chamber_system(Subgroup const& p, Subgroup const& b, std::vector<Subgroup> const& parabolics,
                             Limits const& limits) {
  if (!is_subgroup_of(p, b)) throw NotSubgroupChain("P is not contained in B");
  for (auto const& gi : parabolics)
    if (!is_subgroup_of(b, gi)) throw NotSubgroupChain("B is not contained in a parabolic");

  std::set<Tuple> classes;
  for (auto const& t : injections(p, b, limits)) classes.insert(canonical(t, b));
  RepSystem out;
  out.images.assign(classes.begin(), classes.end());
  std::vector<std::vector<std::size_t>> labels;
  for (auto const& gi : parabolics) {
    std::map<Tuple, std::size_t> ids;
    std::vector<std::size_t> l;
    for (auto const& t : out.images) l.push_back(ids.try_emplace(canonical(t, gi), ids.size()).first->second);
    labels.push_back(std::move(l));
  }
  out.system = ChamberSystem(out.images.size(), std::move(labels));
  Tuple incl = canonical(Tuple(p.gens.begin(), p.gens.end()), b);
  out.inclusion = static_cast<std::size_t>(
      std::lower_bound(out.images.begin(), out.images.end(), incl) - out.images.begin());
  for (auto const& comp : connected_components(out.system))
    if (std::binary_search(comp.begin(), comp.end(), out.inclusion)) out.marked = comp;
  return out;
}

Verdict rep_component_bijection(Subgroup const& p, Subgroup const& b,
                                std::vector<Subgroup> const& parabolics, Subgroup const& g,
                                Limits const& limits) {
  ChamberSystem c = from_parabolic(g, b, parabolics, limits);
  RepSystem rep = rep_chamber_system(p, b, parabolics, limits);
  std::unordered_set<ElementSet, ElementSetHash> checked;
  for (auto const& t : rep.images) {
    Subgroup q = image_subgroup(b, t);
    if (!checked.insert(q.members).second) continue;
    if (!fixed_points(c, q).system.connected())
      throw PreconditionFailed("fixed points of a conjugate of P are disconnected");
  }

  auto const comps = connected_components(rep.system);
  std::map<Tuple, std::size_t> class_to_component;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    std::set<Tuple> seen;
    for (std::size_t x : comps[k]) seen.insert(canonical(rep.images[x], g));
    if (seen.size() != 1)
      return fail("rep_component_bijection",
                  Json{{"reason", "component meets several G-classes"}, {"component", k}});
    auto [it, fresh] = class_to_component.try_emplace(*seen.begin(), k);
    if (!fresh)
      return fail("rep_component_bijection", Json{{"reason", "two components map to one G-class"},
                                                  {"components", {it->second, k}}});
  }
  return pass("rep_component_bijection",
              Json{{"chambers", rep.system.count()}, {"components", comps.size()},
                   {"classes", class_to_component.size()}});
}

Verdict rep_fixed_point_isomorphism(ChamberSystem const& c, Subgroup const& p, Limits const& limits) {
  auto const& prov = provenance_of(c);
  auto const& amb = *prov.group.ambient;
  InducedSystem fixed = fixed_points(c, p);
  Subgroup cent = centralizer(prov.group, p);
  InducedSystem orbits = quotient(fixed.system, induced_action(c, fixed, cent));
  RepSystem rep = rep_chamber_system(p, prov.borel, prov.parabolics, limits);
  InducedSystem marked = induced(rep.system, rep.marked);

  std::vector<std::size_t> map(orbits.system.count(), SIZE_MAX);
  for (std::size_t k = 0; k < fixed.map.size(); ++k) {
    Elem g = prov.reps[fixed.map[k]];
    Elem gi = amb.inv(g);
    Tuple t;
    for (Elem x : p.gens) t.push_back(amb.conj(gi, x));
    t = canonical(t, prov.borel);
    std::size_t chamber = static_cast<std::size_t>(
        std::lower_bound(rep.images.begin(), rep.images.end(), t) - rep.images.begin());
    auto it = std::lower_bound(marked.map.begin(), marked.map.end(), chamber);
    if (it == marked.map.end() || *it != chamber)
      return fail("rep_fixed_point_isomorphism",
                  Json{{"reason", "image outside the inclusion component"}, {"chamber", fixed.map[k]}});
    std::size_t image = static_cast<std::size_t>(it - marked.map.begin());
    std::size_t o = orbits.map[k];
    if (map[o] != SIZE_MAX && map[o] != image)
      return fail("rep_fixed_point_isomorphism",
                  Json{{"reason", "orbit maps to two classes"}, {"chamber", fixed.map[k]}});
    map[o] = image;
  }
  Json w{{"fixed_chambers", fixed.system.count()},
         {"orbits", orbits.system.count()},
         {"component_chambers", marked.system.count()}};
  return is_isomorphism(orbits.system, marked.system, map) ? pass("rep_fixed_point_isomorphism", w)
                                                           : fail("rep_fixed_point_isomorphism", w);
}

// ---------------------------------------------------------------- morphisms

bool is_morphism(CSMorphism const& f) {
  if (f.map.size() != f.source.count() || f.source.rank() != f.target.rank()) return false;
  for (std::size_t x : f.map)
    if (x >= f.target.count()) return false;
  for (std::size_t i = 0; i < f.source.rank(); ++i)
    for (auto const& panel : f.source.panels(i))
      for (std::size_t x : panel)
        if (!f.target.adjacent(i, f.map[panel.front()], f.map[x])) return false;
  return true;
}

bool is_isomorphism(ChamberSystem const& a, ChamberSystem const& b, std::vector<std::size_t> const& map) {
  if (a.count() != b.count() || map.size() != a.count()) return false;
  std::vector<std::size_t> inv(b.count(), SIZE_MAX);
  for (std::size_t x = 0; x < map.size(); ++x) {
    if (map[x] >= b.count() || inv[map[x]] != SIZE_MAX) return false;
    inv[map[x]] = x;
  }
  return is_morphism(CSMorphism{a, b, map}) && is_morphism(CSMorphism{b, a, inv});
}

namespace {

/// Joint colour refinement of two systems: start from panel and rank-2 residue
/// sizes, then split by the colours seen in each panel. Colours are comparable
/// across the two systems.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_colours(ChamberSystem const& a,
                                                                             ChamberSystem const& b) {
  std::size_t const r = a.rank();
  auto initial = [&](ChamberSystem const& c) {
    std::vector<std::vector<std::size_t>> sig(c.count());
    for (std::size_t x = 0; x < c.count(); ++x)
      for (std::size_t i = 0; i < r; ++i) sig[x].push_back(c.panel(i, x).size());
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j)
        for (auto const& comp : connected_components(c, {i, j}))
          for (std::size_t x : comp) sig[x].push_back(comp.size());
    return sig;
  };
  auto sa = initial(a), sb = initial(b);
  std::vector<std::size_t> ca(a.count()), cb(b.count());
  std::size_t classes = 0;
  auto relabel = [&](std::vector<std::vector<std::size_t>> const& xa,
                     std::vector<std::vector<std::size_t>> const& xb) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    for (auto const& s : xa) ids.emplace(s, 0);
    for (auto const& s : xb) ids.emplace(s, 0);
    std::size_t k = 0;
    for (auto& [s, id] : ids) id = k++;
    for (std::size_t x = 0; x < xa.size(); ++x) ca[x] = ids[xa[x]];
    for (std::size_t x = 0; x < xb.size(); ++x) cb[x] = ids[xb[x]];
    return ids.size();
  };
  classes = relabel(sa, sb);
  for (;;) {
    auto step = [&](ChamberSystem const& c, std::vector<std::size_t> const& col) {
      std::vector<std::vector<std::size_t>> sig(c.count());
      for (std::size_t x = 0; x < c.count(); ++x) {
        sig[x].push_back(col[x]);
        for (std::size_t i = 0; i < r; ++i) {
          std::vector<std::size_t> seen;
          for (std::size_t y : c.panel(i, x)) seen.push_back(col[y]);
          std::sort(seen.begin(), seen.end());
          sig[x].push_back(SIZE_MAX);
          sig[x].insert(sig[x].end(), seen.begin(), seen.end());
        }
      }
      return sig;
    };
    auto na = step(a, ca), nb = step(b, cb);
    std::size_t next = relabel(na, nb);
    if (next == classes) break;
    classes = next;
  }
  return {ca, cb};
}

}  // namespace

std::optional<std::vector<std::size_t>> find_isomorphism(ChamberSystem const& a, ChamberSystem const& b,
                                                         std::size_t budget) {
  std::size_t const n = a.count(), r = a.rank();
  if (n != b.count() || r != b.rank()) return std::nullopt;
  if (n == 0) return std::vector<std::size_t>{};
  auto [ca, cb] = refine_colours(a, b);
  {
    std::vector<std::size_t> ha = ca, hb = cb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return std::nullopt;
  }

  std::vector<std::size_t> f(n, SIZE_MAX), used(n, 0);
  std::vector<std::vector<std::size_t>> amap(r), bmap(r), acount(r);
  for (std::size_t i = 0; i < r; ++i) {
    amap[i].assign(a.panels(i).size(), SIZE_MAX);
    bmap[i].assign(b.panels(i).size(), SIZE_MAX);
    acount[i].assign(a.panels(i).size(), 0);
  }
  std::size_t nodes = 0;

  auto fits = [&](std::size_t y, std::size_t t) {
    if (used[t] || ca[y] != cb[t]) return false;
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t pa = a.panel_of(i, y), pb = b.panel_of(i, t);
      if (amap[i][pa] != SIZE_MAX && amap[i][pa] != pb) return false;
      if (bmap[i][pb] != SIZE_MAX && bmap[i][pb] != pa) return false;
    }
    return true;
  };
  auto assign = [&](std::size_t y, std::size_t t) {
    f[y] = t;
    used[t] = 1;
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t pa = a.panel_of(i, y), pb = b.panel_of(i, t);
      if (acount[i][pa]++ == 0) {
        amap[i][pa] = pb;
        bmap[i][pb] = pa;
      }
    }
  };
  auto unassign = [&](std::size_t y) {
    std::size_t t = f[y];
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t pa = a.panel_of(i, y), pb = b.panel_of(i, t);
      if (--acount[i][pa] == 0) {
        amap[i][pa] = SIZE_MAX;
        bmap[i][pb] = SIZE_MAX;
      }
    }
    used[t] = 0;
    f[y] = SIZE_MAX;
  };
  // Candidates for y: inside the image of some already mapped panel of y, else everything.
  auto candidates = [&](std::size_t y) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t pb = amap[i][a.panel_of(i, y)];
      if (pb == SIZE_MAX) continue;
      for (std::size_t t : b.panels(i)[pb])
        if (fits(y, t)) out.push_back(t);
      return std::pair{out, true};
    }
    for (std::size_t t = 0; t < n; ++t)
      if (fits(y, t)) out.push_back(t);
    return std::pair{out, false};
  };

  std::size_t assigned = 0;
  auto rec = [&](auto&& self) -> bool {
    if (assigned == n) return true;
    if (++nodes > budget) throw SearchExhausted("chamber isomorphism search passed its node budget");
    // Most constrained chamber next to the mapped region; a fresh component otherwise.
    std::size_t best = SIZE_MAX, fresh = SIZE_MAX;
    std::vector<std::size_t> best_cands;
    for (std::size_t y = 0; y < n && !(best != SIZE_MAX && best_cands.size() == 1); ++y) {
      if (f[y] != SIZE_MAX) continue;
      if (fresh == SIZE_MAX) fresh = y;
      auto [cands, anchored] = candidates(y);
      if (!anchored) continue;
      if (cands.empty()) return false;
      if (best == SIZE_MAX || cands.size() < best_cands.size()) {
        best = y;
        best_cands = std::move(cands);
      }
    }
    if (best == SIZE_MAX) {
      best = fresh;
      best_cands = candidates(fresh).first;
    }
    for (std::size_t t : best_cands) {
      assign(best, t);
      ++assigned;
      if (self(self)) return true;
      --assigned;
      unassign(best);
    }
    return false;
  };
  if (!rec(rec)) return std::nullopt;
  return f;
}

// ---------------------------------------------------------------- coverings

Verdict is_2_covering(CSMorphism const& f) {
  std::string const name = "2_covering";
  if (!is_morphism(f)) return fail(name, Json{{"reason", "not a type-preserving morphism"}});
  std::vector<char> hit(f.target.count(), 0);
  for (std::size_t x : f.map) hit[x] = 1;
  for (std::size_t t = 0; t < hit.size(); ++t)
    if (!hit[t]) return fail(name, Json{{"reason", "not surjective"}, {"missing", t}});

  auto check = [&](std::vector<std::size_t> const& types) -> std::optional<Json> {
    auto const src = connected_components(f.source, types);
    auto const dst = connected_components(f.target, types);
    std::vector<std::size_t> comp_of(f.target.count());
    for (std::size_t k = 0; k < dst.size(); ++k)
      for (std::size_t x : dst[k]) comp_of[x] = k;
    for (auto const& res : src) {
      std::set<std::size_t> image;
      for (std::size_t x : res) image.insert(f.map[x]);
      std::size_t target_size = dst[comp_of[f.map[res.front()]]].size();
      if (image.size() != res.size() || image.size() != target_size)
        return Json{{"reason", image.size() != res.size() ? "residue collapsed" : "residue not onto"},
                    {"rank", types.size()},
                    {"types", types},
                    {"chamber", res.front()},
                    {"residue_size", res.size()},
                    {"image_size", image.size()},
                    {"target_residue_size", target_size}};
    }
    return std::nullopt;
  };
  std::size_t const r = f.source.rank();
  for (std::size_t i = 0; i < r; ++i)
    if (auto w = check({i})) return fail(name, *w);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (auto w = check({i, j})) return fail(name, *w);
  return pass(name, Json{{"source_chambers", f.source.count()}, {"target_chambers", f.target.count()}});
}

namespace {

void require_covering(CSMorphism const& f) {
  auto v = is_2_covering(f);
  if (!v.holds) throw NotCovering(v.witness.value("reason", std::string("not a 2-covering")));
}

/// The chamber of the source i-panel of `from` lying over `over`.
std::size_t lift_step(CSMorphism const& f, std::size_t from, std::size_t type, std::size_t over) {
  for (std::size_t y : f.source.panel(type, from))
    if (f.map[y] == over) return y;
  throw NotCovering("panel is not mapped onto its image");
}

}  // namespace

Gallery lift_gallery(CSMorphism const& f, Gallery const& gamma, std::size_t start) {
  require_covering(f);
  if (gamma.chambers.empty() || gamma.types.size() + 1 != gamma.chambers.size())
    throw InvalidArgument("malformed gallery");
  if (start >= f.source.count() || f.map[start] != gamma.chambers.front())
    throw InvalidArgument("start chamber does not lie over the gallery's start");
  Gallery out{{start}, gamma.types};
  for (std::size_t k = 0; k < gamma.types.size(); ++k) {
    std::size_t t = gamma.types[k];
    if (t >= f.target.rank() || !f.target.adjacent(t, gamma.chambers[k], gamma.chambers[k + 1]))
      throw InvalidArgument("consecutive gallery chambers are not adjacent");
    out.chambers.push_back(lift_step(f, out.chambers.back(), t, gamma.chambers[k + 1]));
  }
  return out;
}

LiftResult lift_morphism(CSMorphism const& f, CSMorphism const& g, std::size_t base, std::size_t base_lift) {
  require_covering(f);
  if (!(g.target == f.target)) throw InvalidArgument("g does not map into the covering's target");
  if (!is_morphism(g)) throw InvalidArgument("g is not a morphism");
  if (base >= g.source.count() || base_lift >= f.source.count() || f.map[base_lift] != g.map[base])
    throw InvalidArgument("base chambers are not compatible");

  std::size_t const n = g.source.count();
  std::vector<std::size_t> lift(n, SIZE_MAX), parent(n, SIZE_MAX), via(n, 0), queue{base};
  lift[base] = base_lift;
  auto path_to = [&](std::size_t x) {
    Gallery gal;
    for (; x != base; x = parent[x]) {
      gal.chambers.push_back(x);
      gal.types.push_back(via[x]);
    }
    gal.chambers.push_back(base);
    std::reverse(gal.chambers.begin(), gal.chambers.end());
    std::reverse(gal.types.begin(), gal.types.end());
    return gal;
  };
  auto gallery_json = [](Gallery const& gal) {
    return Json{{"chambers", gal.chambers}, {"types", gal.types}};
  };
  for (std::size_t h = 0; h < queue.size(); ++h) {
    std::size_t x = queue[h];
    for (std::size_t i = 0; i < g.source.rank(); ++i)
      for (std::size_t y : g.source.panel(i, x)) {
        std::size_t ly = lift_step(f, lift[x], i, g.map[y]);
        if (lift[y] == SIZE_MAX) {
          lift[y] = ly;
          parent[y] = x;
          via[y] = i;
          queue.push_back(y);
        } else if (lift[y] != ly) {
          Gallery other = path_to(x);
          other.chambers.push_back(y);
          other.types.push_back(i);
          return LiftResult{std::nullopt,
                            Json{{"reason", "two galleries lift to different endpoints"},
                                 {"first", gallery_json(path_to(y))},
                                 {"second", gallery_json(other)},
                                 {"endpoints", {lift[y], ly}}}};
        }
      }
  }
  if (queue.size() != n) throw InvalidArgument("source of g is not connected");
  return LiftResult{CSMorphism{g.source, f.source, std::move(lift)}, Json{{"lifted", n}}};
}

std::vector<std::vector<std::size_t>> deck_group(CSMorphism const& f) {
  require_covering(f);
  if (!f.source.connected()) throw InvalidArgument("deck group needs a connected source");
  std::size_t const n = f.source.count();
  CSMorphism self{f.source, f.target, f.map};
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t t = 0; t < n; ++t) {
    if (f.map[t] != f.map[0]) continue;
    auto r = lift_morphism(f, self, 0, t);
    if (r.lift && is_isomorphism(f.source, f.source, r.lift->map)) out.push_back(r.lift->map);
  }
  std::sort(out.begin(), out.end());
  std::set<std::vector<std::size_t>> elems(out.begin(), out.end());
  for (auto const& a : out)
    for (auto const& b : out) {
      std::vector<std::size_t> ab(n);
      for (std::size_t x = 0; x < n; ++x) ab[x] = a[b[x]];
      if (!elems.count(ab)) throw std::logic_error("deck transformations are not closed");
    }
  return out;
}

// ---------------------------------------------------------------- rank two and diagrams

Rank2Class classify_rank2(ChamberSystem const& c) {
  if (c.rank() != 2) throw InvalidArgument("classify_rank2 needs a rank-2 system");
  Rank2Class out;
  if (!c.connected()) {
    out.witness = Json{{"reason", "disconnected"}};
    return out;
  }
  if (c.provenance && c.provenance->parabolics.size() == 2) {
    auto const& prov = *c.provenance;
    if (product_set_equals(prov.group, prov.parabolics[0], prov.parabolics[1])) {
      out.kind = Rank2Kind::Digon;
      out.m = 2;
      out.witness = Json{{"criterion", "product"}, {"chambers", c.count()}};
      return out;
    }
  }
  std::size_t const n0 = c.panels(0).size(), n1 = c.panels(1).size();
  for (std::size_t i = 0; i < 2; ++i)
    for (auto const& p : c.panels(i))
      if (p.size() < 2) {
        out.witness = Json{{"reason", "thin panel"}, {"type", i}, {"chamber", p.front()}};
        return out;
      }
  // Incidence graph: one edge per chamber between its two panels.
  std::size_t const v = n0 + n1;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(v);
  for (std::size_t x = 0; x < c.count(); ++x) {
    std::size_t a = c.panel_of(0, x), b = n0 + c.panel_of(1, x);
    adj[a].emplace_back(b, x);
    adj[b].emplace_back(a, x);
  }
  std::size_t girth = SIZE_MAX, diameter = 0;
  for (std::size_t root = 0; root < v; ++root) {
    std::vector<std::size_t> dist(v, SIZE_MAX), edge(v, SIZE_MAX);
    std::deque<std::size_t> q{root};
    dist[root] = 0;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      diameter = std::max(diameter, dist[u]);
      for (auto [w, e] : adj[u]) {
        if (e == edge[u]) continue;
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[u] + 1;
          edge[w] = e;
          q.push_back(w);
        } else {
          girth = std::min(girth, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  out.witness = Json{{"criterion", "incidence graph"},
                     {"girth", girth == SIZE_MAX ? Json("inf") : Json(girth)},
                     {"diameter", diameter},
                     {"panels", {n0, n1}}};
  if (girth != SIZE_MAX && girth % 2 == 0 && diameter == girth / 2) {
    out.m = girth / 2;
    out.kind = out.m == 2 ? Rank2Kind::Digon : Rank2Kind::MGon;
  }
  return out;
}

namespace {

/// Finite Coxeter type of a connected diagram on `nodes`, if any.
std::optional<std::string> finite_type(CoxeterDiagram const& d, std::vector<std::size_t> const& nodes) {
  std::size_t const n = nodes.size();
  if (n == 1) return "A1";
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  std::size_t edges = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::size_t m = d.m[nodes[a]][nodes[b]];
      if (m == CoxeterDiagram::kInfinity) return std::nullopt;
      if (m > 2) {
        adj[a].emplace_back(b, m);
        adj[b].emplace_back(a, m);
        ++edges;
      }
    }
  if (edges != n - 1) return std::nullopt;
  if (n == 2) {
    std::size_t m = adj[0][0].second;
    if (m == 3) return "A2";
    if (m == 4) return "C2";
    if (m == 6) return "G2";
    return "I2(" + std::to_string(m) + ")";
  }
  std::size_t branch = SIZE_MAX;
  for (std::size_t a = 0; a < n; ++a) {
    if (adj[a].size() > 3) return std::nullopt;
    if (adj[a].size() == 3) {
      if (branch != SIZE_MAX) return std::nullopt;
      branch = a;
    }
  }
  std::string const rank = std::to_string(n);
  if (branch != SIZE_MAX) {
    std::vector<std::size_t> arms;
    for (auto [start, m] : adj[branch]) {
      if (m != 3) return std::nullopt;
      std::size_t len = 1, prev = branch, cur = start;
      while (adj[cur].size() == 2) {
        auto [next, mm] = adj[cur][0].first == prev ? adj[cur][1] : adj[cur][0];
        if (mm != 3) return std::nullopt;
        prev = cur;
        cur = next;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return "D" + rank;
    if (arms[0] == 1 && arms[1] == 2 && arms[2] <= 4) return "E" + rank;
    return std::nullopt;
  }
  // A path: read the bond labels from one end.
  std::size_t end = 0;
  while (adj[end].size() != 1) ++end;
  std::vector<std::size_t> bonds;
  for (std::size_t prev = SIZE_MAX, cur = end;;) {
    auto it = std::find_if(adj[cur].begin(), adj[cur].end(), [&](auto const& e) { return e.first != prev; });
    if (it == adj[cur].end()) break;
    bonds.push_back(it->second);
    prev = cur;
    cur = it->first;
  }
  std::size_t big = 0, where = 0;
  for (std::size_t k = 0; k < bonds.size(); ++k)
    if (bonds[k] != 3) {
      ++big;
      where = k;
    }
  if (big == 0) return "A" + rank;
  if (big > 1) return std::nullopt;
  bool at_end = where == 0 || where + 1 == bonds.size();
  std::size_t m = bonds[where];
  if (m == 4 && at_end) return "C" + rank;
  if (m == 4 && n == 4) return "F4";
  if (m == 5 && at_end && n <= 4) return "H" + rank;
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<std::string>> CoxeterDiagram::spherical_types() const {
  std::size_t const n = size();
  UnionFind uf(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (m[a][b] != 2) uf.unite(a, b);
  std::vector<std::string> out;
  for (auto const& comp : classes_of(uf, n)) {
    auto t = finite_type(*this, comp);
    if (!t) return std::nullopt;
    out.push_back(*t);
  }
  return out;
}

std::string CoxeterDiagram::render() const {
  std::size_t const n = size();
  auto bond = [&](std::size_t v) -> std::string {
    if (v == kInfinity) return "-inf-";
    if (v == 3) return "---";
    if (v == 4) return "===";
    return "-" + std::to_string(v) + "-";
  };
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && m[a][b] != 2) adj[a].push_back(b);
  UnionFind uf(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b : adj[a]) uf.unite(a, b);
  std::vector<std::string> parts;
  for (auto const& comp : classes_of(uf, n)) {
    bool path = comp.size() == 1;
    std::size_t end = SIZE_MAX, links = 0;
    for (std::size_t a : comp) {
      links += adj[a].size();
      if (adj[a].size() == 1 && end == SIZE_MAX) end = a;
    }
    if (end == SIZE_MAX) end = comp.front();
    if (!path) {
      path = links == 2 * (comp.size() - 1);
      for (std::size_t a : comp) path = path && adj[a].size() <= 2;
    }
    std::string s;
    if (path) {
      s = std::to_string(end + 1);
      for (std::size_t prev = SIZE_MAX, cur = end;;) {
        auto it = std::find_if(adj[cur].begin(), adj[cur].end(), [&](std::size_t x) { return x != prev; });
        if (it == adj[cur].end()) break;
        s += bond(m[cur][*it]) + std::to_string(*it + 1);
        prev = cur;
        cur = *it;
      }
    } else {
      for (std::size_t a : comp)
        for (std::size_t b : adj[a])
          if (a < b) s += (s.empty() ? "" : ", ") + std::to_string(a + 1) + bond(m[a][b]) + std::to_string(b + 1);
    }
    parts.push_back(s);
  }
  std::string out;
  for (auto const& p : parts) out += (out.empty() ? "" : "   ") + p;
  return out;
}

Json CoxeterDiagram::to_json() const {
  Json rows = Json::array();
  for (auto const& row : m) {
    Json r = Json::array();
    for (std::size_t v : row) r.push_back(v == kInfinity ? Json("inf") : Json(v));
    rows.push_back(r);
  }
  auto types = spherical_types();
  return Json{{"m", rows}, {"spherical", types.has_value()}, {"types", types ? Json(*types) : Json::array()}};
}

DiagramResult diagram(ChamberSystem const& c, bool strict, std::size_t p) {
  std::size_t const r = c.rank();
  if (c.count() == 0) throw InvalidArgument("empty chamber system");
  DiagramResult out;
  out.diagram.m.assign(r, std::vector<std::size_t>(r, 2));
  for (std::size_t i = 0; i < r; ++i) out.diagram.m[i][i] = 1;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      InducedSystem res = residue(c, 0, {i, j});
      Rank2Class cls = classify_rank2(res.system);
      Json entry{{"types", {i + 1, j + 1}},
                 {"chambers", res.system.count()},
                 {"kind", cls.kind == Rank2Kind::Digon  ? "digon"
                          : cls.kind == Rank2Kind::MGon ? "m-gon"
                                                        : "other"},
                 {"m", cls.m},
                 {"witness", cls.witness}};
      if (cls.kind == Rank2Kind::Other) {
        if (strict)
          throw UnclassifiedResidue("residue of types " + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + " is neither a digon nor a generalized polygon");
        out.diagram.m[i][j] = out.diagram.m[j][i] = CoxeterDiagram::kInfinity;
      } else {
        out.diagram.m[i][j] = out.diagram.m[j][i] = cls.m;
      }
      if (p != 0 && res.system.provenance && cls.kind == Rank2Kind::MGon) {
        Subgroup const& gij = res.system.provenance->group;
        auto q = quotient_action(gij, core_p(gij, p));
        auto label = identify_lie_type(whole(Group::make(q.group)), p);
        entry["lie_type"] = label ? label->name : "combinatorial m-gon, Lie type unrecognized";
      }
      out.residues.push_back(std::move(entry));
    }
  return out;
}

// ---------------------------------------------------------------- colimits

namespace {

/// Shortest words for all elements of H over the given generator symbols.
std::map<Elem, Word> cayley_words(Subgroup const& h, std::vector<std::pair<Elem, int>> const& gens) {
  auto const& amb = *h.ambient;
  std::map<Elem, Word> words{{amb.identity(), {}}};
  std::deque<Elem> q{amb.identity()};
  while (!q.empty()) {
    Elem x = q.front();
    q.pop_front();
    for (auto [s, symbol] : gens) {
      Elem y = amb.mul(x, s);
      if (words.count(y)) continue;
      Word w = words[x];
      w.push_back(symbol);
      words.emplace(y, std::move(w));
      q.push_back(y);
    }
  }
  return words;
}

void add_cayley_relators(Subgroup const& h, std::vector<std::pair<Elem, int>> const& gens,
                         std::set<Word>& relators) {
  auto const& amb = *h.ambient;
  auto words = cayley_words(h, gens);
  if (words.size() != h.order()) throw InvalidArgument("generators do not generate the group");
  for (auto const& [x, wx] : words)
    for (auto [s, symbol] : gens) {
      Word r = wx;
      r.push_back(symbol);
      r = concat(r, invert(words.at(amb.mul(x, s))));
      if (!r.empty()) relators.insert(r);
    }
}

}  // namespace

ColimitPresentation colimit_presentation(Subgroup const& b, std::vector<Subgroup> const& parabolics,
                                         std::map<std::pair<std::size_t, std::size_t>, Subgroup> const& pairs) {
  std::size_t const r = parabolics.size();
  if (r == 0) throw InvalidArgument("no parabolic subgroups");
  ColimitPresentation out;
  std::vector<std::vector<std::pair<Elem, int>>> gens(r);
  for (std::size_t i = 0; i < r; ++i) {
    if (!is_subgroup_of(b, parabolics[i])) throw NonCommutingSquares("B is not contained in a parabolic");
    for (std::size_t k = 0; k < parabolics[i].gens.size(); ++k) {
      out.presentation.symbols.push_back("g" + std::to_string(i + 1) + "_" + std::to_string(k + 1));
      gens[i].emplace_back(parabolics[i].gens[k], static_cast<int>(out.presentation.symbols.size()));
    }
  }
  std::set<Word> relators;
  for (std::size_t i = 0; i < r; ++i) add_cayley_relators(parabolics[i], gens[i], relators);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      auto it = pairs.find({i, j});
      if (it == pairs.end()) throw InvalidArgument("missing rank-2 group");
      Subgroup const& gij = it->second;
      if (!is_subgroup_of(parabolics[i], gij) || !is_subgroup_of(parabolics[j], gij))
        throw NonCommutingSquares("a parabolic is not contained in its rank-2 group");
      if (!(join(parabolics[i], parabolics[j]) == gij))
        throw InvalidArgument("rank-2 group is not generated by its two parabolics");
      auto both = gens[i];
      both.insert(both.end(), gens[j].begin(), gens[j].end());
      add_cayley_relators(gij, both, relators);
    }
  // Identify the copies of B inside the different parabolics.
  std::vector<std::map<Elem, Word>> words;
  for (std::size_t i = 0; i < r; ++i) words.push_back(cayley_words(parabolics[i], gens[i]));
  for (Elem x : b.gens) {
    out.borel_words.push_back(words[0].at(x));
    for (std::size_t i = 1; i < r; ++i) {
      Word rel = concat(words[0].at(x), invert(words[i].at(x)));
      if (!rel.empty()) relators.insert(rel);
    }
  }
  out.presentation.relators.assign(relators.begin(), relators.end());
  return out;
}

ColimitPresentation colimit_presentation(Subgroup const& b, std::vector<Subgroup> const& parabolics) {
  std::map<std::pair<std::size_t, std::size_t>, Subgroup> pairs;
  for (std::size_t i = 0; i < parabolics.size(); ++i)
    for (std::size_t j = i + 1; j < parabolics.size(); ++j)
      pairs.emplace(std::pair{i, j}, join(parabolics[i], parabolics[j]));
  return colimit_presentation(b, parabolics, pairs);
}

}  // namespace parafusion
