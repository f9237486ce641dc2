#include "parafusion/subgroup.hpp"

#include <algorithm>

#include "parafusion/errors.hpp"

namespace parafusion {

bool subgroup_less(Subgroup const& a, Subgroup const& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return lex_less(a.members, b.members);
}

Subgroup whole(GroupPtr const& g) {
  ElementSet all(g->order());
  for (Elem e = 0; e < g->order(); ++e) all.insert(e);
  return Subgroup{g, std::move(all), g->generators()};
}

Subgroup trivial(GroupPtr const& g) {
  ElementSet one(g->order());
  one.insert(g->identity());
  return Subgroup{g, std::move(one), {}};
}

Subgroup generate(GroupPtr const& g, std::span<Elem const> gens) {
  std::vector<Elem> kept;
  for (Elem x : gens)
    if (x != g->identity() && std::find(kept.begin(), kept.end(), x) == kept.end())
      kept.push_back(x);

  ElementSet members(g->order());
  std::vector<Elem> queue{g->identity()};
  members.insert(g->identity());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (Elem s : kept) {
      Elem y = g->mul(queue[head], s);
      if (!members.contains(y)) {
        members.insert(y);
        queue.push_back(y);
      }
    }
  }
  return Subgroup{g, std::move(members), std::move(kept)};
}

Subgroup generate(GroupPtr const& g, std::span<Perm const> gens) {
  std::vector<Elem> idx;
  idx.reserve(gens.size());
  for (auto const& p : gens) idx.push_back(g->index(p));
  return generate(g, idx);
}

Subgroup from_closed_set(GroupPtr const& g, ElementSet members) {
  Subgroup h = trivial(g);
  members.for_each([&](Elem x) {
    if (!h.contains(x)) h = join_element(h, x);
  });
  if (!(h.members == members)) throw InvalidArgument("element set is not a subgroup");
  return h;
}

Subgroup join_element(Subgroup const& a, Elem x) {
  if (a.contains(x)) return a;
  std::vector<Elem> gens = a.gens;
  gens.push_back(x);
  return generate(a.ambient, gens);
}

Subgroup join(Subgroup const& a, Subgroup const& b) {
  Subgroup out = a;
  for (Elem x : b.gens) out = join_element(out, x);
  return out;
}

Subgroup intersect(Subgroup const& a, Subgroup const& b) {
  return from_closed_set(a.ambient, a.members & b.members);
}

bool is_subgroup_of(Subgroup const& a, Subgroup const& b) {
  return a.ambient == b.ambient && a.members.is_subset_of(b.members);
}

bool is_normal_in(Subgroup const& n, Subgroup const& h) {
  if (!is_subgroup_of(n, h)) return false;
  auto const& g = *h.ambient;
  for (Elem s : h.gens)
    for (Elem x : n.gens)
      if (!n.contains(g.conj(s, x))) return false;
  return true;
}

ElementSet conjugate_set(GroupPtr const& g, ElementSet const& s, Elem x) {
  ElementSet out(g->order());
  s.for_each([&](Elem y) { out.insert(g->conj(x, y)); });
  return out;
}

Subgroup conjugate(Subgroup const& h, Elem g) {
  std::vector<Elem> gens;
  gens.reserve(h.gens.size());
  for (Elem x : h.gens) gens.push_back(h.ambient->conj(g, x));
  return Subgroup{h.ambient, conjugate_set(h.ambient, h.members, g), std::move(gens)};
}

ElementSet transporter(Subgroup const& h, Subgroup const& p, Subgroup const& q) {
  auto const& g = *h.ambient;
  ElementSet out(g.order());
  if (p.order() > q.order()) return out;
  h.members.for_each([&](Elem x) {
    for (Elem y : p.gens)
      if (!q.contains(g.conj(x, y))) return;
    out.insert(x);
  });
  return out;
}

Subgroup normalizer(Subgroup const& h, Subgroup const& p) {
  return from_closed_set(h.ambient, transporter(h, p, p));
}

Subgroup centralizer(Subgroup const& h, Subgroup const& p) {
  auto const& g = *h.ambient;
  ElementSet out(g.order());
  h.members.for_each([&](Elem x) {
    for (Elem y : p.gens)
      if (g.mul(x, y) != g.mul(y, x)) return;
    out.insert(x);
  });
  return from_closed_set(h.ambient, std::move(out));
}

Subgroup center(Subgroup const& h) { return centralizer(h, h); }

Subgroup normal_closure(Subgroup const& h, Subgroup const& k) {
  auto const& g = *h.ambient;
  Subgroup out = k;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Elem s : h.gens) {
      for (std::size_t i = 0; i < out.gens.size(); ++i) {
        Elem c = g.conj(s, out.gens[i]);
        if (!out.contains(c)) {
          out = join_element(out, c);
          changed = true;
        }
      }
    }
  }
  return out;
}

Subgroup derived_subgroup(Subgroup const& h) {
  auto const& g = *h.ambient;
  std::vector<Elem> comms;
  for (Elem a : h.gens)
    for (Elem b : h.gens) {
      Elem c = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
      comms.push_back(c);
    }
  return normal_closure(h, generate(h.ambient, comms));
}

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_p_power(std::size_t n, std::size_t p) {
  if (n == 0) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

std::size_t p_part(std::size_t n, std::size_t p) {
  std::size_t out = 1;
  while (n % p == 0) {
    n /= p;
    out *= p;
  }
  return out;
}

bool is_p_group(Subgroup const& h, std::size_t p) { return is_p_power(h.order(), p); }

Subgroup sylow(Subgroup const& h, std::size_t p) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  auto const& g = *h.ambient;
  std::size_t const target = p_part(h.order(), p);
  Subgroup s = trivial(h.ambient);
  while (s.order() < target) {
    // A p-subgroup that is not Sylow has p dividing |N_H(P) : P|, so some
    // p-element of the normalizer lies outside P and extends it.
    Subgroup n = normalizer(h, s);
    Elem pick = 0;
    bool found = false;
    n.members.for_each([&](Elem x) {
      if (found || s.contains(x) || !is_p_power(g.element_order(x), p)) return;
      pick = x;
      found = true;
    });
    if (!found) throw InvalidArgument("Sylow extension failed");
    s = join_element(s, pick);
  }
  return s;
}

bool is_sylow(Subgroup const& h, Subgroup const& s, std::size_t p) {
  return is_subgroup_of(s, h) && is_p_group(s, p) && s.order() == p_part(h.order(), p);
}

Subgroup core_p(Subgroup const& h, std::size_t p) {
  Subgroup s = sylow(h, p);
  ElementSet core = s.members;
  h.members.for_each([&](Elem x) { core &= conjugate_set(h.ambient, s.members, x); });
  return from_closed_set(h.ambient, std::move(core));
}

Subgroup residual_pprime(Subgroup const& h, std::size_t p) {
  return normal_closure(h, sylow(h, p));
}

bool is_pprime_reduced_pconstrained(Subgroup const& h, std::size_t p) {
  Subgroup o = core_p(h, p);
  return is_subgroup_of(centralizer(h, o), o);
}

std::vector<ElementSet> left_cosets(Subgroup const& h, Subgroup const& k) {
  if (!is_subgroup_of(k, h)) throw NotSubgroupChain("coset subgroup is not contained in the group");
  auto const& g = *h.ambient;
  std::vector<ElementSet> out;
  ElementSet covered(g.order());
  auto const ks = k.elements();
  h.members.for_each([&](Elem x) {
    if (covered.contains(x)) return;
    ElementSet c(g.order());
    for (Elem y : ks) c.insert(g.mul(x, y));
    covered |= c;
    out.push_back(std::move(c));
  });
  return out;
}

Perm const& QuotientAction::image_of(Elem h) const {
  auto it = std::lower_bound(domain.begin(), domain.end(), h);
  if (it == domain.end() || *it != h) throw InvalidArgument("element outside the acting group");
  return image[static_cast<std::size_t>(it - domain.begin())];
}

QuotientAction quotient_action(Subgroup const& h, Subgroup const& n) {
  if (!is_normal_in(n, h)) throw NotNormal("subgroup is not normal");
  auto const& g = *h.ambient;
  QuotientAction out;
  out.cosets = left_cosets(h, n);
  std::vector<Elem> rep;
  std::vector<std::uint32_t> coset_of(g.order(), 0);
  for (std::size_t i = 0; i < out.cosets.size(); ++i) {
    rep.push_back(out.cosets[i].to_vector().front());
    out.cosets[i].for_each([&](Elem x) { coset_of[x] = static_cast<std::uint32_t>(i); });
  }
  out.domain = h.elements();
  auto act = [&](Elem x) {
    std::vector<Point> images(rep.size());
    for (std::size_t i = 0; i < rep.size(); ++i)
      images[i] = static_cast<Point>(coset_of[g.mul(x, rep[i])]);
    return Perm(std::move(images));
  };
  out.image.reserve(out.domain.size());
  for (Elem x : out.domain) out.image.push_back(act(x));
  std::vector<Perm> gens;
  for (Elem x : h.gens) gens.push_back(act(x));
  out.group = PermGroup(rep.size(), std::move(gens));
  return out;
}

bool product_set_equals(Subgroup const& h, Subgroup const& a, Subgroup const& b) {
  if (!is_subgroup_of(a, h) || !is_subgroup_of(b, h)) return false;
  std::size_t const meet = (a.members & b.members).size();
  return a.order() * b.order() == h.order() * meet;
}

bool strongly_p_embedded_exists(Subgroup const& h, std::size_t p) {
  Subgroup q = sylow(h, p);
  if (q.is_trivial()) return false;
  auto const& g = *h.ambient;
  // Any such M contains every x with xQx^-1 meeting Q nontrivially, and the
  // subgroup those elements generate is itself a valid M when proper.
  auto const qs = q.elements();
  Subgroup m = q;
  h.members.for_each([&](Elem x) {
    if (m.contains(x)) return;
    for (Elem y : qs)
      if (y != g.identity() && q.contains(g.conj(x, y))) {
        m = join_element(m, x);
        return;
      }
  });
  return m.order() < h.order();
}

}  // namespace parafusion
