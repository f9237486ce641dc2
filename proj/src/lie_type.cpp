#include "parafusion/lie_type.hpp"

#include <algorithm>
#include <unordered_set>

#include "parafusion/errors.hpp"

namespace parafusion {

std::vector<Subgroup> normal_subgroups(Subgroup const& h) {
  auto const& g = *h.ambient;
  std::vector<Subgroup> found;
  std::unordered_set<ElementSet, ElementSetHash> seen;
  auto add = [&](Subgroup s) {
    if (seen.insert(s.members).second) found.push_back(std::move(s));
  };
  add(trivial(h.ambient));

  ElementSet covered(g.order());
  auto const xs = h.elements();
  for (Elem x : xs) {
    if (covered.contains(x)) continue;
    for (Elem y : xs) covered.insert(g.conj(y, x));
    Elem gens[] = {x};
    add(normal_closure(h, generate(h.ambient, gens)));
  }
  // every normal subgroup is a join of normal closures of single elements
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t j = 1; j < i; ++j) add(join(found[i], found[j]));
  std::sort(found.begin(), found.end(), subgroup_less);
  return found;
}

namespace {

Subgroup perfect_core(Subgroup const& h) {
  Subgroup cur = h;
  for (;;) {
    Subgroup next = derived_subgroup(cur);
    if (next.order() == cur.order()) return cur;
    cur = std::move(next);
  }
}

std::size_t max_element_order(Subgroup const& h) {
  std::size_t m = 1;
  h.members.for_each([&](Elem x) { m = std::max(m, h.ambient->element_order(x)); });
  return m;
}

LieTypeLabel label(std::string name, std::string type, std::size_t rank, std::size_t q,
                   std::size_t m = 0) {
  return LieTypeLabel{std::move(name), std::move(type), rank, q, m};
}

std::optional<LieTypeLabel> rank_one(Subgroup const& h, std::size_t p) {
  std::size_t const n = h.order();
  if (n < 6 || !center(h).is_trivial()) return std::nullopt;
  Subgroup k = perfect_core(h);

  if (k.is_trivial()) {
    Subgroup d = derived_subgroup(h);
    if (n == 6 && p == 2) return label("L2(2)", "A1(2)", 1, 2);
    if (n == 12 && d.order() == 4 && p == 3) return label("L2(3)", "A1(3)", 1, 3);
    if (n == 24 && d.order() == 12 && derived_subgroup(d).order() == 4 && p == 3)
      return label("PGL2(3)", "A1(3)", 1, 3);
    return std::nullopt;
  }

  std::size_t const kn = k.order();
  if (kn == n) {
    if (n == 60 && p == 2) return label("L2(4)", "A1(4)", 1, 4);
    if (n == 60 && p == 5) return label("L2(5)", "A1(5)", 1, 5);
    if (n == 168 && p == 7) return label("L2(7)", "A1(7)", 1, 7);
    if (n == 504 && p == 2) return label("L2(8)", "A1(8)", 1, 8);
    if (n == 360 && p == 3) return label("L2(9)", "A1(9)", 1, 9);
    if (n == 6048 && p == 3) return label("U3(3)", "2A2(3)", 1, 3);
    return std::nullopt;
  }

  // extensions of a cataloged simple group acting faithfully
  if (!centralizer(h, k).is_trivial()) return std::nullopt;
  std::size_t const idx = n / kn;
  if (kn == 60 && idx == 2 && p == 2) return label("PGammaL2(4)", "A1(4)", 1, 4);
  if (kn == 60 && idx == 2 && p == 5) return label("PGL2(5)", "A1(5)", 1, 5);
  if (kn == 168 && idx == 2 && p == 7) return label("PGL2(7)", "A1(7)", 1, 7);
  if (kn == 504 && idx == 3 && p == 2) return label("PGammaL2(8)", "A1(8)", 1, 8);
  if (kn == 360 && (idx == 2 || idx == 4) && p == 3) {
    std::string name = idx == 4 ? "PGammaL2(9)" : "L2(9).2";
    return label(name, "A1(9)", 1, 9);
  }
  if (kn == 6048 && idx == 2 && p == 3) return label("U3(3).2", "2A2(3)", 1, 3);
  return std::nullopt;
}

std::optional<LieTypeLabel> rank_two(Subgroup const& h, std::size_t p) {
  std::size_t const n = h.order();
  if (n < 168 || !center(h).is_trivial()) return std::nullopt;
  Subgroup k = perfect_core(h);
  std::size_t const kn = k.order();
  if (kn == n) {
    if (n == 168 && p == 2) return label("L3(2)", "A2(2)", 2, 2, 3);
    if (n == 5616 && p == 3) return label("L3(3)", "A2(3)", 2, 3, 3);
    if (n == 360 && p == 2) return label("Sp4(2)'", "B2(2)'", 2, 2, 4);
    if (n == 6048 && p == 2) return label("G2(2)'", "G2(2)'", 2, 2, 6);
    return std::nullopt;
  }
  if (!centralizer(h, k).is_trivial() || n / kn != 2 || p != 2) return std::nullopt;
  // S6 is the only degree-two extension of A6 without elements of order 8 or 10
  if (kn == 360 && max_element_order(h) == 6) return label("Sp4(2)", "B2(2)", 2, 2, 4);
  if (kn == 6048) return label("G2(2)", "G2(2)", 2, 2, 6);
  return std::nullopt;
}

}  // namespace

std::optional<LieTypeLabel> identify_lie_type(Subgroup const& h, std::size_t p) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (auto r = rank_two(h, p)) return r;
  if (auto r = rank_one(h, p)) return r;

  // direct products of two rank-one members
  if (h.order() < 36) return std::nullopt;
  auto normals = normal_subgroups(h);
  for (auto const& a : normals) {
    if (a.is_trivial() || a.order() == h.order()) continue;
    for (auto const& b : normals) {
      if (b.order() * a.order() != h.order() || subgroup_less(b, a)) continue;
      if ((a.members & b.members).size() != 1) continue;
      auto la = rank_one(a, p);
      auto lb = rank_one(b, p);
      if (la && lb)
        return label(la->name + "x" + lb->name, la->type + "x" + lb->type, 2,
                     std::max(la->q, lb->q), 2);
    }
  }
  return std::nullopt;
}

}  // namespace parafusion
