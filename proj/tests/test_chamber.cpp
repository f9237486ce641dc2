#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <set>

#include "parafusion/chamber.hpp"
#include "parafusion/errors.hpp"
#include "parafusion/isomorphism.hpp"
#include "parafusion/lattice.hpp"
#include "test_groups.hpp"

using namespace parafusion;
using namespace parafusion::testing;

namespace {

struct Instance {
  Subgroup g, b;
  std::vector<Subgroup> parabolics;
};

Instance l3_2() {
  auto g = make_group(7, {"(1 2 3 4 5 6 7)", "(2 3)(4 7)"});
  auto b = sub(g, {"(3 5)(6 7)", "(3 6)(5 7)", "(2 4)(5 6)"});
  return {whole(g), b, {join_element(b, g->index(Perm::parse("(2 3)(4 7)", 7))),
                        join_element(b, g->index(Perm::parse("(1 2)(5 7)", 7)))}};
}

/// The four S4 overgroups of the Sylow 2-subgroup of A7, in canonical order.
std::vector<Subgroup> a7_parabolics(Subgroup const& a7, Subgroup const& b) {
  auto s4 = whole(symmetric(4));
  std::vector<Subgroup> xs;
  for (auto const& h : overgroups(a7, b))
    if (h.order() == 24 && isomorphism(h, s4)) xs.push_back(h);
  return xs;
}

/// Chambers gB with g^-1 P g <= B, counted element by element.
std::size_t brute_fixed_count(Subgroup const& g, Subgroup const& b, Subgroup const& p) {
  auto const& amb = *g.ambient;
  std::size_t hits = 0;
  g.members.for_each([&](Elem x) {
    bool inside = true;
    p.members.for_each([&](Elem y) { inside = inside && b.contains(amb.conj(amb.inv(x), y)); });
    hits += inside;
  });
  return hits / b.order();
}

/// Thin system of an elementary abelian 2-group: chambers are bit vectors, the
/// i-panel of v is {v, v ^ gens[i]}.
ChamberSystem cayley_system(std::size_t bits, std::vector<std::size_t> const& gens) {
  std::size_t const n = std::size_t{1} << bits;
  std::vector<std::vector<std::size_t>> labels;
  for (std::size_t s : gens) {
    std::vector<std::size_t> l(n);
    for (std::size_t v = 0; v < n; ++v) l[v] = std::min(v, v ^ s);
    labels.push_back(l);
  }
  return ChamberSystem(n, labels);
}

/// C2^3 -> C2^2 sending e1, e2, e3 to a, b, a+b.
CSMorphism double_cover() {
  auto source = cayley_system(3, {1, 2, 4});
  auto target = cayley_system(2, {1, 2, 3});
  std::vector<std::size_t> map(8);
  for (std::size_t v = 0; v < 8; ++v)
    map[v] = ((v & 1) ? 1 : 0) ^ ((v & 2) ? 2 : 0) ^ ((v & 4) ? 3 : 0);
  return CSMorphism{source, target, map};
}

}  // namespace

TEST_CASE("L3(2) flag system") {
  auto in = l3_2();
  REQUIRE(in.g.order() == 168);
  REQUIRE(is_dihedral_of_order_8(in.b));
  auto c = from_parabolic(in.g, in.b, in.parabolics);
  CHECK(c.count() == 21);
  CHECK(c.rank() == 2);
  CHECK(c.connected());
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(c.panels(i).size() == 7);
    for (auto const& p : c.panels(i)) CHECK(p.size() == 3);
  }
  auto cls = classify_rank2(c);
  CHECK(cls.kind == Rank2Kind::MGon);
  CHECK(cls.m == 3);
  CHECK(cls.witness["girth"] == 6);

  auto d = diagram(c, true, 2);
  CHECK(d.diagram.m[0][1] == 3);
  CHECK(d.diagram.spherical_types() == std::vector<std::string>{"A2"});
  CHECK(d.residues[0]["lie_type"] == "L3(2)");
  CHECK(c.to_json()["chambers"] == 21);

  // Chamber action: left multiplication permutes chambers and fixes chamber 0 exactly on B.
  for (Elem x : in.g.gens) {
    auto perm = action_of(c, x);
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) CHECK(sorted[k] == k);
  }
  in.g.members.for_each([&](Elem x) { CHECK((action_of(c, x)[0] == 0) == in.b.contains(x)); });
}

TEST_CASE("residues carry their coset data") {
  auto in = l3_2();
  auto c = from_parabolic(in.g, in.b, in.parabolics);
  for (std::size_t i = 0; i < 2; ++i) {
    auto r = residue(c, 0, {i});
    CHECK(r.system.count() == 3);
    REQUIRE(r.system.provenance);
    CHECK(r.system.provenance->group == in.parabolics[i]);
    CHECK(r.map == c.panel(i, 0));
  }
  auto whole_res = residue(c, 5, {0, 1});
  CHECK(whole_res.system.count() == 21);
  CHECK(!whole_res.system.provenance);
  CHECK_THROWS_AS(residue(c, 0, {2}), InvalidArgument);
}

TEST_CASE("fixed points agree with a direct count") {
  auto in = l3_2();
  auto c = from_parabolic(in.g, in.b, in.parabolics);
  auto reps = subgroup_class_reps(in.g, in.b);
  for (auto const& p : reps) {
    auto fp = fixed_points(c, p);
    CHECK(fp.system.count() == brute_fixed_count(in.g, in.b, p));
    CHECK(fp.system.connected());
  }
  CHECK(fixed_points(c, in.b).system.count() == 1);
  CHECK(fixed_points(c, trivial(in.g.ambient)).system.count() == 21);

  ChamberSystem bare(3, {{0, 0, 1}});
  CHECK_THROWS_AS(fixed_points(bare, in.b), NoProvenance);
}

TEST_CASE("fixed points can be disconnected") {
  auto s4 = symmetric(4);
  auto b = sub(s4, {"(3 4)"});
  std::vector<Subgroup> parabolics{sub(s4, {"(3 4)", "(2 3)"}), sub(s4, {"(3 4)", "(1 3)"})};
  auto c = from_parabolic(whole(s4), b, parabolics);
  CHECK(c.count() == 12);
  CHECK(c.connected());
  auto fp = fixed_points(c, b);
  CHECK(fp.system.count() == brute_fixed_count(whole(s4), b, b));
  CHECK(fp.system.count() == 2);
  CHECK(!fp.system.connected());
  CHECK(connected_components(fp.system).size() == 2);
}

TEST_CASE("quotients") {
  auto in = l3_2();
  auto c = from_parabolic(in.g, in.b, in.parabolics);
  auto same = quotient(c, trivial(in.g.ambient));
  CHECK(same.system == c);
  auto point = quotient(c, in.g);
  CHECK(point.system.count() == 1);
  auto by_borel = quotient(c, in.b);
  // B-orbits on G/B are the double cosets BgB: 1 + 2 + 2 + 4 + 4 + 8 = 21.
  CHECK(by_borel.system.count() == 6);

  auto fp = fixed_points(c, in.b);
  auto action = induced_action(c, fp, in.b);
  CHECK(action.size() == in.b.gens.size());
  // N_G(Z)-orbits on C^Z, against orbits traced element by element.
  auto centre = center(in.b);
  auto n = normalizer(in.g, centre);
  auto fixed = fixed_points(c, centre);
  auto orbits = quotient(fixed.system, induced_action(c, fixed, n));
  std::set<std::set<std::size_t>> traced;
  for (std::size_t k : fixed.map) {
    std::set<std::size_t> orbit;
    n.members.for_each([&](Elem x) { orbit.insert(action_of(c, x)[k]); });
    traced.insert(orbit);
  }
  CHECK(orbits.system.count() == traced.size());
}

TEST_CASE("Rep chamber systems") {
  auto s4 = whole(symmetric(4));
  auto b = sylow(s4, 2);
  std::vector<Subgroup> rank1{s4};

  auto one = rep_chamber_system(trivial(s4.ambient), b, rank1);
  CHECK(one.system.count() == 1);
  CHECK(one.marked == std::vector<std::size_t>{0});

  auto in = l3_2();
  auto c = from_parabolic(in.g, in.b, in.parabolics);
  for (auto const& p : subgroup_class_reps(in.g, in.b)) {
    auto v = rep_component_bijection(p, in.b, in.parabolics, in.g);
    CHECK_MESSAGE(v.holds, v.witness.dump());
    auto w = rep_fixed_point_isomorphism(c, p);
    CHECK_MESSAGE(w.holds, w.witness.dump());
  }
  auto cs4 = from_parabolic(s4, b, rank1);
  for (auto const& p : subgroup_class_reps(s4, b)) {
    CHECK(rep_component_bijection(p, b, rank1, s4).holds);
    CHECK(rep_fixed_point_isomorphism(cs4, p).holds);
  }
}

TEST_CASE("isomorphism search") {
  auto in = l3_2();
  auto c = from_parabolic(in.g, in.b, in.parabolics);
  Elem x = in.g.ambient->index(Perm::parse("(1 2 3 4 5 6 7)", 7));
  auto b2 = conjugate(in.b, x);
  auto c2 = from_parabolic(in.g, b2, {conjugate(in.parabolics[0], x), conjugate(in.parabolics[1], x)});
  auto iso = find_isomorphism(c, c2);
  REQUIRE(iso);
  CHECK(is_isomorphism(c, c2, *iso));

  auto swapped = from_parabolic(in.g, in.b, {in.parabolics[1], in.parabolics[0]});
  auto iso2 = find_isomorphism(c, swapped);
  // The Fano plane is self-dual, so exchanging the two types gives an isomorphic system.
  CHECK(iso2.has_value());

  auto cover = double_cover();
  CHECK(!find_isomorphism(cover.source, cover.target));
}

TEST_CASE("A7 diagrams") {
  auto a7 = whole(alternating(7));
  auto b = sylow(a7, 2);
  REQUIRE(is_dihedral_of_order_8(b));
  auto x = a7_parabolics(a7, b);
  REQUIRE(x.size() == 4);

  auto start = std::chrono::steady_clock::now();
  auto a3 = from_parabolic(a7, b, {x[2], x[1], x[3]});
  auto c3 = from_parabolic(a7, b, {x[0], x[1], x[2]});
  auto c3b = from_parabolic(a7, b, {x[0], x[1], x[3]});
  for (auto const* c : {&a3, &c3, &c3b}) {
    CHECK(c->count() == 315);
    CHECK(c->connected());
  }
  auto da3 = diagram(a3, true, 2);
  CHECK(da3.diagram.spherical_types() == std::vector<std::string>{"A3"});
  CHECK(da3.diagram.render() == "1---2---3");
  auto dc3 = diagram(c3, true, 2);
  CHECK(dc3.diagram.spherical_types() == std::vector<std::string>{"C3"});
  CHECK(diagram(c3b).diagram.spherical_types() == std::vector<std::string>{"C3"});
  CHECK(dc3.diagram.m[0][1] == 4);

  auto iso = find_isomorphism(c3, c3b);
  REQUIRE(iso);
  CHECK(is_isomorphism(c3, c3b, *iso));
  CHECK(!find_isomorphism(a3, c3));

  auto mixed = from_parabolic(a7, b, {x[0], x[2], x[3]});
  CHECK(diagram(mixed).diagram.spherical_types() == std::vector<std::string>({"A1", "A1", "A1"}));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 120.0);
}

TEST_CASE("digon from a direct product") {
  auto g = make_group(6, {"(1 2)", "(1 2 3)", "(4 5)", "(4 5 6)"});
  auto b = sub(g, {"(5 6)", "(2 3)"});
  std::vector<Subgroup> parabolics{sub(g, {"(5 6)", "(2 3)", "(4 5)"}), sub(g, {"(5 6)", "(2 3)", "(1 2)"})};
  auto c = from_parabolic(whole(g), b, parabolics);
  CHECK(c.count() == 9);
  auto cls = classify_rank2(c);
  CHECK(cls.kind == Rank2Kind::Digon);
  CHECK(cls.m == 2);
  CHECK(cls.witness["criterion"] == "product");

  // Without coset data the incidence graph decides: a 3x3 grid has girth 4.
  std::vector<std::vector<std::size_t>> labels(2, std::vector<std::size_t>(9));
  for (std::size_t k = 0; k < 9; ++k) {
    labels[0][k] = c.panel_of(0, k);
    labels[1][k] = c.panel_of(1, k);
  }
  auto plain = classify_rank2(ChamberSystem(9, labels));
  CHECK(plain.kind == Rank2Kind::Digon);
  CHECK(plain.witness["criterion"] == "incidence graph");
  CHECK(diagram(c).diagram.spherical_types() == std::vector<std::string>({"A1", "A1"}));
}

TEST_CASE("Coxeter catalog and rendering") {
  auto path = [](std::vector<std::size_t> bonds) {
    std::size_t n = bonds.size() + 1;
    CoxeterDiagram d;
    d.m.assign(n, std::vector<std::size_t>(n, 2));
    for (std::size_t i = 0; i < n; ++i) d.m[i][i] = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) d.m[i][i + 1] = d.m[i + 1][i] = bonds[i];
    return d;
  };
  auto type = [](CoxeterDiagram const& d) {
    auto t = d.spherical_types();
    return t && t->size() == 1 ? t->front() : std::string("none");
  };
  CHECK(type(path({3, 3, 3})) == "A4");
  CHECK(type(path({4, 3, 3})) == "C4");
  CHECK(type(path({3, 3, 4})) == "C4");
  CHECK(type(path({3, 4, 3})) == "F4");
  CHECK(type(path({5, 3})) == "H3");
  CHECK(type(path({6})) == "G2");
  CHECK(type(path({8})) == "I2(8)");
  CHECK(type(path({4, 4})) == "none");
  CHECK(type(path({3, 3, 3, 3, 3, 3, 4, 3})) == "none");

  auto d4 = path({3, 3, 2});
  d4.m[1][3] = d4.m[3][1] = 3;
  CHECK(type(d4) == "D4");
  auto e6 = path({3, 3, 3, 3, 2});
  e6.m[2][5] = e6.m[5][2] = 3;
  CHECK(type(e6) == "E6");
  auto affine = path({3, 3});
  affine.m[0][2] = affine.m[2][0] = 3;
  CHECK(!affine.spherical());

  CHECK(path({3, 4}).render() == "1---2===3");
  CHECK(path({5}).render() == "1-5-2");
  auto inf = path({CoxeterDiagram::kInfinity});
  CHECK(inf.render() == "1-inf-2");
  CHECK(!inf.spherical());
  CHECK(path({2, 2}).render() == "1   2   3");
  CHECK(path({3, 4}).to_json()["types"] == Json::array({"C3"}));
}

TEST_CASE("two-coverings") {
  auto f = double_cover();
  auto v = is_2_covering(f);
  CHECK_MESSAGE(v.holds, v.witness.dump());
  CHECK(f.source.connected());

  // Identifying e1 and e2 collapses the {1,2}-residues.
  auto collapsed = cayley_system(2, {1, 1, 2});
  std::vector<std::size_t> map(8);
  for (std::size_t x = 0; x < 8; ++x) map[x] = ((x & 1) ^ ((x >> 1) & 1)) | ((x & 4) ? 2 : 0);
  auto bad = is_2_covering(CSMorphism{f.source, collapsed, map});
  CHECK(!bad.holds);
  CHECK(bad.witness["reason"] == "residue collapsed");
  CHECK(bad.witness["types"] == Json::array({0, 1}));

  // The closed gallery a, b, a+b in the target lifts to an open one.
  Gallery loop{{0, 1, 3, 0}, {0, 1, 2}};
  auto lifted = lift_gallery(f, loop, 0);
  CHECK(lifted.chambers == std::vector<std::size_t>{0, 1, 3, 7});
  CHECK(lift_gallery(f, loop, 0).chambers == lifted.chambers);
  auto from_seven = lift_gallery(f, loop, 7);
  CHECK(from_seven.chambers.back() == 0);

  auto deck = deck_group(f);
  CHECK(deck.size() == 2);
  CHECK(deck.size() * f.target.count() == f.source.count());
  CHECK(deck[1][0] == 7);

  CSMorphism identity{f.target, f.target, {0, 1, 2, 3}};
  auto r = lift_morphism(f, identity, 0, 0);
  CHECK(!r.lift);
  CHECK(r.witness["reason"] == "two galleries lift to different endpoints");
  CHECK(r.witness["first"]["chambers"].front() == 0);
  CHECK(r.witness["second"]["chambers"].front() == 0);
  CHECK(r.witness["first"]["chambers"].back() == r.witness["second"]["chambers"].back());

  // The cover lifts along itself.
  auto self = lift_morphism(f, f, 0, 7);
  REQUIRE(self.lift);
  CHECK(self.lift->map[0] == 7);

  CSMorphism not_onto{f.source, cayley_system(3, {1, 2, 4}), std::vector<std::size_t>(8, 0)};
  CHECK(!is_2_covering(not_onto).holds);
}

TEST_CASE("colimit coset enumeration") {
  auto in = l3_2();
  auto col = colimit_presentation(in.b, in.parabolics);
  auto res = coset_enumeration(col.presentation, col.borel_words, 100000);
  CHECK(res.finite);
  CHECK(res.index == 21);

  auto a7 = whole(alternating(7));
  auto b = sylow(a7, 2);
  auto x = a7_parabolics(a7, b);
  auto start = std::chrono::steady_clock::now();
  auto a3 = colimit_presentation(b, {x[2], x[1], x[3]});
  auto r3 = coset_enumeration(a3.presentation, a3.borel_words, 100000);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(r3.finite);
  CHECK(r3.index == 315);
  CHECK(secs < 120.0);

  std::map<std::pair<std::size_t, std::size_t>, Subgroup> wrong{{{0, 1}, in.g}};
  CHECK_NOTHROW(colimit_presentation(in.b, in.parabolics, wrong));
  wrong[{0, 1}] = in.parabolics[0];
  CHECK_THROWS_AS(colimit_presentation(in.b, in.parabolics, wrong), NonCommutingSquares);
}
