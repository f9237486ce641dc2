#include "parafusion/corpus.hpp"

#include <algorithm>

#include "parafusion/errors.hpp"
#include "parafusion/io.hpp"
#include "parafusion/isomorphism.hpp"
#include "parafusion/lattice.hpp"

namespace parafusion {

namespace {

std::string cycle(std::size_t from, std::size_t to) {
  std::string out = "(";
  for (std::size_t i = from; i <= to; ++i) out += std::to_string(i) + (i < to ? " " : ")");
  return out;
}

CorpusEntry group_entry(std::string name, std::string builder, std::size_t degree, std::vector<std::string> gens,
                        std::size_t order) {
  CorpusEntry e;
  e.name = std::move(name);
  e.builder = std::move(builder);
  e.degree = degree;
  e.generators = std::move(gens);
  e.order = order;
  return e;
}

CorpusEntry cyclic(std::size_t n) {
  return group_entry("c" + std::to_string(n), "cyclic(" + std::to_string(n) + ")", n, {cycle(1, n)}, n);
}

CorpusEntry symmetric(std::size_t n, std::size_t order) {
  return group_entry("s" + std::to_string(n), "symmetric(" + std::to_string(n) + ")", n, {"(1 2)", cycle(1, n)},
                     order);
}

CorpusEntry alternating(std::size_t n, std::size_t order) {
  std::vector<std::string> gens;
  for (std::size_t k = 3; k <= n; ++k) gens.push_back(cycle(k - 2, k));
  return group_entry("a" + std::to_string(n), "alternating(" + std::to_string(n) + ")", n, gens, order);
}

CorpusEntry with_system(CorpusEntry base, std::string name, std::size_t prime, std::vector<std::string> parabolics,
                        std::size_t chambers, std::vector<std::string> diagram) {
  base.name = std::move(name);
  base.prime = prime;
  base.borel = "B";
  base.parabolics = std::move(parabolics);
  base.chambers = chambers;
  base.diagram = std::move(diagram);
  return base;
}

std::vector<CorpusEntry> make_corpus() {
  std::vector<CorpusEntry> out;
  out.push_back(group_entry("trivial", "trivial", 1, {}, 1));
  out.push_back(cyclic(2));
  out.push_back(cyclic(3));
  out.push_back(cyclic(4));
  out.push_back(group_entry("c6", "cyclic(6)", 5, {"(1 2 3)(4 5)"}, 6));
  out.push_back(group_entry("v4", "direct_product(cyclic(2), cyclic(2))", 4, {"(1 2)", "(3 4)"}, 4));
  out.push_back(group_entry("d8", "dihedral(4)", 4, {"(1 2 3 4)", "(2 4)"}, 8));
  out.push_back(symmetric(3, 6));

  auto s4 = symmetric(4, 24);
  s4.pinned = {{"B", "(1 2 3 4), (1 3)"}, {"V4", "(1 2)(3 4), (1 3)(2 4)"}};
  out.push_back(s4);
  out.push_back(symmetric(5, 120));
  out.push_back(alternating(4, 12));
  out.push_back(alternating(5, 60));
  out.push_back(alternating(6, 360));

  auto a7 = alternating(7, 2520);
  a7.pinned = {{"B", "(4 5)(6 7), (4 6)(5 7), (2 3)(6 7)"},
               {"X1", "(4 5)(6 7), (4 6)(5 7), (2 3)(6 7), (5 6 7)"},
               {"X2", "(4 5)(6 7), (4 6)(5 7), (2 3)(6 7), (2 4)(3 5)"},
               {"X3", "(4 5)(6 7), (4 6)(5 7), (2 3)(6 7), (1 2)(5 6)"},
               {"X4", "(4 5)(6 7), (4 6)(5 7), (2 3)(6 7), (1 2)(5 7)"}};
  out.push_back(a7);

  auto l3 = group_entry("l3-2", "psl_action(3, 2)", 7, {"(1 2 3 4 5 6 7)", "(2 3)(4 7)"}, 168);
  l3.pinned = {{"B", "(3 5)(6 7), (3 6)(5 7), (2 4)(5 6)"},
               {"P1", "(3 5)(6 7), (3 6)(5 7), (2 4)(5 6), (2 3)(4 7)"},
               {"P2", "(3 5)(6 7), (3 6)(5 7), (2 4)(5 6), (1 2)(5 7)"}};
  out.push_back(with_system(l3, "l3-2", 2, {"P1", "P2"}, 21, {"A2"}));

  auto s3xs3 = group_entry("s3xs3", "direct_product(symmetric(3), symmetric(3))", 6,
                           {"(1 2)", "(1 2 3)", "(4 5)", "(4 5 6)"}, 36);
  s3xs3.pinned = {{"B", "(5 6), (2 3)"}, {"G1", "(5 6), (2 3), (4 5)"}, {"G2", "(5 6), (2 3), (1 2)"}};
  out.push_back(s3xs3);

  out.push_back(with_system(a7, "a7-a3", 2, {"X3", "X2", "X4"}, 315, {"A3"}));
  out.push_back(with_system(a7, "a7-c3", 2, {"X1", "X2", "X3"}, 315, {"C3"}));
  out.push_back(with_system(a7, "a7-c3b", 2, {"X1", "X2", "X4"}, 315, {"C3"}));
  out.push_back(with_system(s3xs3, "digon", 2, {"G1", "G2"}, 9, {"A1", "A1"}));

  auto rank1 = s4;
  rank1.pinned.push_back({"G1", "(1 2), (1 2 3 4)"});
  out.push_back(with_system(rank1, "rank1", 2, {"G1"}, 3, {"A1"}));

  auto disconnected = s4;
  disconnected.pinned = {{"B", "(3 4)"}, {"G1", "(3 4), (2 3)"}, {"G2", "(3 4), (1 3)"}};
  out.push_back(with_system(disconnected, "disconnected", 2, {"G1", "G2"}, 12, {}));

  auto hat = symmetric(5, 120);
  hat.pinned = {{"B", "(3 4 5), (4 5)"}, {"G1", "(3 4 5), (4 5), (2 3)"}, {"G2", "(3 4 5), (4 5), (1 3)"}};
  out.push_back(with_system(hat, "hat", 3, {"G1", "G2"}, 20, {}));
  return out;
}

}  // namespace

std::vector<CorpusEntry> const& corpus() {
  static std::vector<CorpusEntry> const entries = make_corpus();
  return entries;
}

CorpusEntry const* find_corpus(std::string_view name) {
  for (auto const& e : corpus())
    if (e.name == name) return &e;
  return nullptr;
}

GroupPtr build_group(CorpusEntry const& e) {
  std::vector<Perm> gens;
  for (auto const& g : e.generators) gens.push_back(Perm::parse(g, e.degree));
  return Group::make(PermGroup(e.degree, std::move(gens)));
}

Subgroup resolve_subgroup(CorpusEntry const* e, GroupPtr const& g, std::string_view text) {
  if (e)
    for (auto const& [name, gens] : e->pinned)
      if (name == text) return parse_subgroup(g, gens);
  if (text == "G") return whole(g);
  return parse_subgroup(g, text);
}

ParabolicSystemInput corpus_system(CorpusEntry const& e) {
  if (!e.has_system()) throw InvalidArgument(e.name + " has no parabolic system");
  auto g = build_group(e);
  std::vector<Subgroup> parabolics;
  for (auto const& name : e.parabolics) parabolics.push_back(resolve_subgroup(&e, g, name));
  return ParabolicSystemInput::make(whole(g), resolve_subgroup(&e, g, e.borel), std::move(parabolics), e.prime);
}

Verdict self_test(CorpusEntry const& e) {
  auto g = build_group(e);
  Json facts{{"order", g->order()}};
  if (g->order() != e.order) return fail(e.name, Json{{"expected_order", e.order}, {"order", g->order()}});
  for (auto const& [name, gens] : e.pinned) resolve_subgroup(&e, g, name);

  if (e.name.rfind("a7", 0) == 0) {
    auto a7 = whole(g);
    auto b = resolve_subgroup(&e, g, "B");
    if (!(b == sylow(a7, 2))) return fail(e.name, Json{{"reason", "pinned B is not the canonical Sylow 2-subgroup"}});
    auto s4 = whole(Group::make(PermGroup(4, {Perm::parse("(1 2)", 4), Perm::parse("(1 2 3 4)", 4)})));
    std::vector<Subgroup> xs;
    for (auto const& h : overgroups(a7, b))
      if (h.order() == 24 && isomorphism(h, s4)) xs.push_back(h);
    if (xs.size() != 4) return fail(e.name, Json{{"reason", "expected four S4 overgroups"}, {"found", xs.size()}});
    for (std::size_t i = 0; i < 4; ++i)
      if (!(xs[i] == resolve_subgroup(&e, g, "X" + std::to_string(i + 1))))
        return fail(e.name, Json{{"reason", "pinned X" + std::to_string(i + 1) + " is out of canonical order"}});
    facts["s4_overgroups"] = 4;
  }

  if (e.has_system()) {
    auto in = corpus_system(e);
    auto c = from_parabolic(in.group, in.borel, in.parabolics);
    facts["chambers"] = c.count();
    if (c.count() != e.chambers)
      return fail(e.name, Json{{"expected_chambers", e.chambers}, {"chambers", c.count()}});
    auto types = diagram(c, false).diagram.spherical_types();
    if (types.value_or(std::vector<std::string>{}) != e.diagram)
      return fail(e.name, Json{{"expected_diagram", e.diagram}, {"diagram", types ? Json(*types) : Json(nullptr)}});
    facts["diagram"] = e.diagram;
  }
  return pass(e.name, facts);
}

}  // namespace parafusion
