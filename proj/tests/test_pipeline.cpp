#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "parafusion/corpus.hpp"
#include "parafusion/errors.hpp"
#include "parafusion/io.hpp"
#include "parafusion/lattice.hpp"
#include "parafusion/pipeline.hpp"
#include "test_groups.hpp"

using namespace parafusion;
using namespace parafusion::testing;

namespace {

ParabolicSystemInput instance(char const* name) { return corpus_system(*find_corpus(name)); }

bool holds(FamilyReport const& r, std::string const& name) {
  auto const* v = r.find(name);
  REQUIRE_MESSAGE(v, name);
  return v->holds;
}

Json witness(FamilyReport const& r, std::string const& name) { return r.find(name)->witness; }

std::vector<FusionSystem> member_systems(ContextPtr const& ctx, std::vector<Subgroup> const& gs) {
  std::vector<FusionSystem> out;
  for (auto const& g : gs) out.push_back(fusion_of_group(ctx, g));
  return out;
}

DiagramRealizers realizers(ParabolicSystemInput const& in) {
  DiagramRealizers r{in.sylow, in.p, normalizer(in.borel, in.sylow), in.parabolics, {}};
  for (std::size_t i = 0; i < in.parabolics.size(); ++i)
    for (std::size_t j = i + 1; j < in.parabolics.size(); ++j)
      r.pairs.emplace(std::pair{i, j}, join(in.parabolics[i], in.parabolics[j]));
  return r;
}

}  // namespace

TEST_CASE("corpus self-test") {
  for (auto const& e : corpus()) {
    auto v = self_test(e);
    CHECK_MESSAGE(v.holds, e.name << " " << v.witness.dump());
  }
  CHECK(find_corpus("a7-a3")->parabolics == std::vector<std::string>{"X3", "X2", "X4"});
  CHECK(find_corpus("nope") == nullptr);
  auto g = build_group(*find_corpus("a7"));
  CHECK(resolve_subgroup(find_corpus("a7"), g, "X2").order() == 24);
  CHECK(resolve_subgroup(nullptr, g, "(1 2 3)").order() == 3);
  CHECK_THROWS_AS(resolve_subgroup(nullptr, g, "(1 2)"), NotSubgroupChain);
}

TEST_CASE("input validation") {
  auto s4 = symmetric(4);
  auto b = sub(s4, {"(1 2)"});
  CHECK_THROWS_AS(ParabolicSystemInput::make(whole(s4), b, {sub(s4, {"(3 4)"})}, 2), NotSubgroupChain);
  CHECK_THROWS_AS(ParabolicSystemInput::make(whole(s4), b, {}, 4), InvalidArgument);
  auto in = ParabolicSystemInput::make(whole(s4), b, {sub(s4, {"(1 2)", "(2 3)"})}, 2);
  CHECK(in.sylow == b);
  CHECK(in.join_of({}) == b);
}

TEST_CASE("parabolic system axioms") {
  auto l3 = check_parabolic_system(instance("l3-2"));
  CHECK(l3.all_hold());
  CHECK(l3.derived["chambers"] == 21);
  CHECK(check_parabolic_system(instance("a7-a3")).all_hold());

  auto rank1 = check_parabolic_system(instance("rank1"));
  CHECK(!holds(rank1, "core_free"));
  CHECK(witness(rank1, "core_free")["core_order"] == 4);

  // Adding a redundant parabolic breaks minimality with a witness subset.
  auto in = instance("l3-2");
  in.parabolics.push_back(in.group);
  auto red = check_parabolic_system(in);
  CHECK(!holds(red, "generation"));
  CHECK(witness(red, "generation")["J"] == Json{3});
  CHECK(!holds(red, "intersections"));
}

TEST_CASE("saturation criterion closed loop") {
  for (auto const* name : {"l3-2", "a7-a3", "a7-c3", "digon", "rank1"}) {
    auto r = saturation_criterion_check(instance(name));
    CHECK_MESSAGE(r.all_hold(), name << " " << r.to_json().dump());
    auto in = instance(name);
    CHECK(is_saturated(fusion_of_group(in.group, in.sylow, in.p)).holds);
  }
}

TEST_CASE("disconnected fixed points are witnessed") {
  auto in = instance("disconnected");
  auto r = saturation_criterion_check(in);
  CHECK(!holds(r, "fixed_points_connected"));
  CHECK(holds(r, "conclusion_consistent"));
  auto w = witness(r, "fixed_points_connected");
  CHECK(w["components"] == 2);

  // Replay: rebuild the witness subgroup from its generators.
  std::string gens;
  for (auto const& g : w["subgroup"]) gens += (gens.empty() ? "" : ",") + g.get<std::string>();
  auto p = parse_subgroup(in.group.ambient, gens);
  auto fp = fixed_points(from_parabolic(in.group, in.borel, in.parabolics), p);
  CHECK(fp.system.count() == w["fixed_chambers"]);
  CHECK(connected_components(fp.system).size() == 2);
  CHECK(fp.map == w["chambers"].get<std::vector<std::size_t>>());
}

TEST_CASE("A7 families are not minimally generated") {
  for (auto const* name : {"a7-a3", "a7-c3", "a7-c3b"}) {
    auto in = instance(name);
    auto r = family_criterion_check(in);
    CHECK(!holds(r, "family.minimal_generation"));
    auto j = witness(r, "family.minimal_generation")["J"].get<std::vector<std::size_t>>();
    REQUIRE(j.size() == 2);

    auto ctx = PGroupContext::make(in.sylow, in.p);
    auto f = fusion_of_group(ctx, in.group);
    auto members = member_systems(ctx, in.parabolics);
    CHECK(generate({members[j[0] - 1], members[j[1] - 1]}) == f);
    for (std::size_t i = 0; i < 3; ++i) CHECK(!(members[i] == f));
    CHECK(holds(r, "op_trivial"));
    CHECK(holds(r, "saturated"));
  }
}

TEST_CASE("family axioms on rank two and rank one") {
  auto l3 = family_criterion_check(instance("l3-2"));
  CHECK(holds(l3, "family.minimal_generation"));
  CHECK(holds(l3, "family.pairwise_intersections"));
  CHECK(holds(l3, "family.borel_proper_subsystem"));
  CHECK(holds(l3, "family.member_1.essential_rank_one"));
  // The join of the two members is the whole, unconstrained, system.
  CHECK(!holds(l3, "family.saturated_constrained_joins"));

  auto rank1 = family_criterion_check(instance("rank1"));
  CHECK(holds(rank1, "family.minimal_generation"));
  CHECK(rank1.derived["rank_one_family"] == true);
  CHECK(!holds(rank1, "op_trivial"));
  CHECK_THROWS_AS(family_criterion_check(instance("disconnected")), NotSylow);
}

TEST_CASE("factorization along galleries") {
  auto in = instance("a7-a3");
  auto const& amb = *in.group.ambient;
  auto c = from_parabolic(in.group, in.borel, in.parabolics);
  auto lattice = subgroup_lattice(in.sylow);
  std::mt19937 rng(20240917);
  std::uniform_int_distribution<std::size_t> pick_sub(0, lattice.size() - 1);
  std::uniform_int_distribution<Elem> pick_elem(0, static_cast<Elem>(in.group.order() - 1));

  std::size_t samples = 0, longest = 0;
  while (samples < 100) {
    auto const& p = lattice.subgroups[pick_sub(rng)];
    Elem g = pick_elem(rng);
    if (!is_subgroup_of(conjugate(p, g), in.sylow)) continue;
    ++samples;
    auto steps = factor_morphism(in, c, p, g);
    REQUIRE(!steps.empty());
    longest = std::max(longest, steps.size());
    Elem product = amb.identity();
    CHECK(steps.front().source == p);
    for (std::size_t k = 0; k < steps.size(); ++k) {
      auto const& s = steps[k];
      CHECK(in.parabolics[s.parabolic].contains(s.h));
      CHECK(is_subgroup_of(s.source, in.sylow));
      CHECK(is_subgroup_of(s.target, in.sylow));
      CHECK(conjugate(s.source, amb.inv(s.h)) == s.target);
      if (k > 0) CHECK(steps[k - 1].target == s.source);
      product = amb.mul(product, s.h);
    }
    CHECK(product == amb.inv(g));
    CHECK(steps.back().target == conjugate(p, g));
    // The composite agrees with c_g pointwise.
    p.members.for_each([&](Elem x) {
      Elem y = x;
      for (auto const& s : steps) y = amb.conj(amb.inv(s.h), y);
      CHECK(y == amb.conj(g, x));
    });
  }
  CHECK(longest >= 2);

  auto bad = instance("disconnected");
  auto b = bad.borel;
  Elem swap = bad.group.ambient->index(Perm::parse("(1 2)", 4));
  CHECK_THROWS_AS(factor_morphism(bad, b, swap), DisconnectedFixedPoints);
}

TEST_CASE("hat reduction") {
  auto a3 = hat_reduction(instance("a7-a3"));
  CHECK(a3.report.all_hold());
  CHECK(a3.hat_group.order() == 2520);
  CHECK(a3.report.derived["deck_group_order"] == 1);

  auto in = instance("hat");
  auto h = hat_reduction(in);
  CHECK(h.hat_group.order() == 60);
  CHECK(h.hat_borel.order() == 3);
  CHECK(h.hat_chambers.count() == 20);
  for (auto const* name : {"normal_in_G", "product_with_borel", "hat_parabolic_system", "2_covering",
                           "fibre_sizes", "product_formula", "hat_fusion_saturated", "hat_fusion_normal"})
    CHECK_MESSAGE(holds(h.report, name), name);
  CHECK(!holds(h.report, "hat_op_trivial"));
  // Fibres have size |B cap G^ : B^|, which is 1 here although |G:G^| = 2.
  CHECK(witness(h.report, "fibre_sizes")["fibre"] == 1);
  CHECK(witness(h.report, "fibre_sizes")["index"] == 2);
  CHECK(is_morphism(h.phi));

  // Product formula against an explicit count.
  auto const& hij = h.hat_pairs.at({0, 1});
  ElementSet prod = in.group.ambient->empty_set();
  hij.members.for_each([&](Elem x) {
    in.borel.members.for_each([&](Elem y) { prod.insert(in.group.ambient->mul(x, y)); });
  });
  CHECK(prod.size() * intersect(hij, in.borel).order() == hij.order() * in.borel.order());

  CHECK_THROWS_AS(hat_reduction(instance("rank1")), HypothesisFailed);
}

TEST_CASE("diagrams of groups") {
  for (auto const* name : {"l3-2", "rank1"}) {
    auto in = instance(name);
    auto ctx = PGroupContext::make(in.sylow, in.p);
    auto f = fusion_of_group(ctx, in.group);
    auto members = member_systems(ctx, in.parabolics);
    auto d = build_diagram_of_groups(f, members, realizers(in));
    CHECK_MESSAGE(holds(d.report, "identity_on_S_isomorphisms"), name);
    CHECK_MESSAGE(holds(d.report, "squares_commute"), name);
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto tag = "G" + std::to_string(i + 1);
      CHECK(holds(d.report, tag + ".p_reduced_constrained"));
      CHECK(holds(d.report, tag + ".realizes"));
      auto const& psi = d.psi[i];
      CHECK(psi.is_homomorphism());
      CHECK(psi.is_injective());
      in.sylow.members.for_each([&](Elem s) { CHECK(psi(s) == s); });
    }
    CHECK(d.psi_pair.size() == members.size() * (members.size() - 1));
    for (auto const& [key, phi] : d.psi_pair) {
      CHECK(phi.is_homomorphism());
      CHECK(phi.is_injective());
    }
  }
  // L3(2) is simple, so it cannot be a constrained model of the join.
  auto in = instance("l3-2");
  auto ctx = PGroupContext::make(in.sylow, in.p);
  auto d = build_diagram_of_groups(fusion_of_group(ctx, in.group), member_systems(ctx, in.parabolics),
                                   realizers(in));
  CHECK(!holds(d.report, "G12.p_reduced_constrained"));
  CHECK(holds(d.report, "G12.generated"));

  // In A7 the commuting pair generates a group of order 72 that is not a constrained
  // model, and its preimage of Aut(U_1) is too large to be isomorphic to X_3.
  auto a3 = instance("a7-a3");
  auto actx = PGroupContext::make(a3.sylow, a3.p);
  auto da3 = build_diagram_of_groups(fusion_of_group(actx, a3.group), member_systems(actx, a3.parabolics),
                                     realizers(a3));
  CHECK(holds(da3.report, "G1.p_reduced_constrained"));
  CHECK(!holds(da3.report, "G13.p_reduced_constrained"));
  CHECK(!holds(da3.report, "identity_on_S_isomorphisms"));
  CHECK(witness(da3.report, "identity_on_S_isomorphisms")["missing"][0]["map"] == "G1 -> G1^(3)");
  CHECK(da3.report.derived["G_i^(j)"][1]["order"] == 72);
  CHECK(da3.psi_pair.count({0, 1}) == 1);
}

TEST_CASE("classical families") {
  auto a3 = classical_family_check(instance("a7-a3"));
  CHECK(a3.derived["render"] == "1---2---3");
  CHECK(holds(a3, "spherical"));
  CHECK(holds(a3, "diagram_matches_chambers"));
  CHECK(holds(a3, "member_1.rank_one_lie_type"));
  CHECK(witness(a3, "pair_12.rank_two_type")["name"] == "L3(2)");
  CHECK(witness(a3, "pair_13.rank_two_type")["kind"] == "product");
  CHECK(!holds(a3, "family.minimal_generation"));
  CHECK(!a3.all_hold());
  CHECK(!a3.derived.contains("conclusion"));

  auto c3 = classical_family_check(instance("a7-c3"));
  CHECK(c3.derived["diagram"]["types"] == Json{"C3"});
  CHECK(c3.derived["diagram"]["m"][0][1] == 4);
  CHECK(witness(c3, "pair_12.rank_two_type")["name"] == "Sp4(2)'");

  auto digon = classical_family_check(instance("digon"));
  CHECK(witness(digon, "pair_12.rank_two_type")["kind"] == "product");
  CHECK(digon.derived["diagram"]["m"][0][1] == 2);
  CHECK(!holds(digon, "rank_at_least_three"));

  auto l3 = classical_family_check(instance("l3-2"));
  CHECK(l3.derived["render"] == "1---2");
  CHECK(holds(l3, "spherical"));
}

TEST_CASE("reports serialize deterministically") {
  auto in = instance("l3-2");
  auto first = saturation_criterion_check(in).to_json().dump();
  auto second = saturation_criterion_check(instance("l3-2")).to_json().dump();
  CHECK(first == second);
  auto j = Json::parse(first);
  REQUIRE(j.is_array());
  CHECK(j[0].contains("axiom"));
  CHECK(j[0].contains("holds"));
  CHECK(j[0].contains("witness"));
}
