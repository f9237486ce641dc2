#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "parafusion/errors.hpp"
#include "parafusion/fusion.hpp"
#include "test_groups.hpp"

using namespace parafusion;
using namespace parafusion::testing;

namespace {

Subgroup lift(FusionSystem const& f, std::size_t id) {
  std::vector<Elem> gens;
  for (Elem x : f.ctx()->sub(id).gens) gens.push_back(f.provenance->to_ambient[x]);
  return generate(f.provenance->group.ambient, gens);
}

FusionSystem system_of(Subgroup const& g, std::size_t p) {
  return fusion_of_group(g, sylow(g, p), p);
}

std::size_t id_where(FusionSystem const& f, auto pred) {
  for (std::size_t id : f.objects())
    if (pred(f.ctx()->sub(id))) return id;
  throw std::runtime_error("no such subgroup");
}

bool is_klein(Subgroup const& h) {
  return h.order() == 4 && center(h).order() == 4 && h.ambient->element_order(h.gens[0]) == 2 &&
         std::all_of(h.gens.begin(), h.gens.end(),
                     [&](Elem x) { return h.ambient->element_order(x) == 2; });
}

/// The system on C2 x C2 generated by one isomorphism between two order-2 subgroups.
FusionSystem single_iso_system(ContextPtr const& ctx) {
  std::vector<std::size_t> order2;
  for (std::size_t id = 0; id < ctx->count(); ++id)
    if (ctx->sub(id).order() == 2) order2.push_back(id);
  Elem a = ctx->sub(order2[0]).gens[0];
  Elem b = ctx->sub(order2[1]).gens[0];
  Map phi(ctx->order(), kOff);
  phi[0] = 0;
  phi[a] = static_cast<std::uint8_t>(b);
  return generate_from_maps(ctx, ctx->whole_id(), {phi});
}

}  // namespace

TEST_CASE("fusion system of S4 at 2") {
  auto s4 = whole(symmetric(4));
  auto f = system_of(s4, 2);
  auto const& ctx = f.ctx();
  CHECK(ctx->order() == 8);
  CHECK(ctx->count() == 10);

  std::size_t normal_v = id_where(f, [&](Subgroup const& h) {
    return is_klein(h) && is_normal_in(lift(f, ctx->id_of(h.members)), s4);
  });
  std::size_t other_v = id_where(f, [&](Subgroup const& h) {
    return is_klein(h) && !is_normal_in(lift(f, ctx->id_of(h.members)), s4);
  });
  std::size_t c4 = id_where(f, [&](Subgroup const& h) { return h.order() == 4 && !is_klein(h); });

  SUBCASE("morphisms match the transporter scan") {
    for (std::size_t p : f.objects())
      for (std::size_t q : f.objects()) {
        std::size_t n = transporter(s4, lift(f, p), lift(f, q)).size();
        CHECK((n > 0) == !f.hom(p, q).empty());
      }
    CHECK(f.hom(normal_v, other_v).empty());
    CHECK(f.aut(normal_v).size() == 6);
    CHECK(f.aut(other_v).size() == 2);
  }

  SUBCASE("classification") {
    auto v = classify(f, normal_v);
    CHECK(v.centric);
    CHECK(v.radical);
    CHECK(v.essential);
    CHECK(v.fully_normalized);
    auto c = classify(f, c4);
    CHECK(c.centric);
    CHECK_FALSE(c.essential);
    auto whole_flags = classify(f, ctx->whole_id());
    CHECK(whole_flags.fully_normalized);
    CHECK(whole_flags.fully_centralized);
    CHECK(whole_flags.centric);
    CHECK_FALSE(whole_flags.essential);
    CHECK(essential_subgroups(f) == std::vector<std::size_t>{normal_v});
  }

  SUBCASE("saturation and cores") {
    CHECK(is_saturated(f).holds);
    CHECK(is_saturated(f, SaturationMode::CentricOnly).holds);
    CHECK(op_core(f) == normal_v);
    CHECK(is_constrained(f));
    CHECK(normalizer_system(f, normal_v) == f);
    auto d8 = fusion_of_group(ctx, lift(f, ctx->whole_id()));
    CHECK(normalizer_system(f, ctx->whole_id()) == d8);
    CHECK(constrained_core_centric_check(f, normal_v).holds);
  }

  SUBCASE("O^{2'} and Frattini") {
    auto o = opprime_subsystem(f);
    CHECK(o.system == f);
    CHECK(o.minimality_verified);
    auto g = opprime_subsystem(f, OpprimeRoute::Generated);
    CHECK(g.system == f);
    CHECK(frattini_check(f).holds);
    CHECK(is_normal_subsystem(f, f).holds);
  }

  SUBCASE("realizing overgroups") {
    auto inner = fusion_of_group(ctx, lift(f, ctx->whole_id()));
    auto h = realizing_overgroup(inner, s4);
    REQUIRE(h);
    CHECK(h->order() == 8);
    auto whole_h = realizing_overgroup(f, s4);
    REQUIRE(whole_h);
    CHECK(*whole_h == s4);
  }

  SUBCASE("Alperin factorization recomposes") {
    for (std::size_t p : f.objects())
      for (auto const& phi : f.homs(p)) {
        auto factors = alperin_decompose(f, phi);
        CHECK(recompose(ctx, p, factors) == phi);
      }
    // An automorphism of S is a single factor.
    for (auto const& a : f.aut(ctx->whole_id())) {
      if (a == ctx->inclusion(ctx->whole_id())) continue;
      auto factors = alperin_decompose(f, a);
      CHECK(factors.size() == 1);
    }
    // Automorphisms of V not restricted from S must pass through Aut_F(V).
    for (auto const& phi : f.aut(normal_v)) {
      bool from_s = false;
      for (auto const& a : f.aut(ctx->whole_id())) from_s |= ctx->restrict(a, normal_v) == phi;
      if (from_s) continue;
      bool through_v = false;
      for (auto const& fac : alperin_decompose(f, phi)) through_v |= fac.subgroup == normal_v;
      CHECK(through_v);
    }
  }
}

TEST_CASE("inner fusion systems") {
  auto d8 = whole(dihedral(4));
  auto f = system_of(d8, 2);
  auto inner = inner_system(f.ctx(), f.ctx()->whole_id());
  CHECK(f == inner);
  CHECK(is_saturated(f).holds);
  CHECK(op_core(f) == f.ctx()->whole_id());
  CHECK(is_constrained(f));
  CHECK(opprime_subsystem(f).system == f);
  CHECK(frattini_check(f).holds);
  CHECK(generate({f, f}) == f);
  CHECK(intersect(f, f) == f);
  CHECK(essential_subgroups(f).empty());
}

TEST_CASE("Sylow checks") {
  auto s4 = whole(symmetric(4));
  auto v = sub(symmetric(4), {"(1 2)(3 4)", "(1 3)(2 4)"});
  CHECK_THROWS_AS(fusion_of_group(s4, v, 2), NotSylow);
  auto ctx = PGroupContext::make(v, 2);
  CHECK_THROWS_AS(fusion_of_group(ctx, s4), NotSylow);
  CHECK_THROWS_AS(PGroupContext::make(s4, 2), InvalidArgument);
  Limits tight;
  tight.fusion = 4;
  CHECK_THROWS_AS(PGroupContext::make(sylow(s4, 2), 2, tight), CapExceeded);
}

TEST_CASE("single isomorphism on C2 x C2 is not saturated") {
  auto v = sub(symmetric(4), {"(1 2)(3 4)", "(1 3)(2 4)"});
  auto ctx = PGroupContext::make(v, 2);
  auto f = single_iso_system(ctx);
  CHECK(f.morphism_count() == 7);
  auto verdict = is_saturated(f);
  CHECK_FALSE(verdict.holds);
  CHECK(verdict.witness["axiom"] == "II");
  CHECK(verdict.witness["n_phi_order"] == 4);
  CHECK(verdict.witness["reason"] == "phi has no extension to N_phi");
  CHECK_THROWS_AS(opprime_subsystem(f), NotSaturated);
  CHECK_THROWS_AS(frattini_check(f), NotSaturated);

  SUBCASE("inside F(A4) it is a subsystem but not normal") {
    auto a4 = whole(alternating(4));
    auto big = fusion_of_group(ctx, a4);
    REQUIRE(is_subsystem(f, big));
    CHECK_FALSE(is_normal_subsystem(f, big).holds);
    CHECK_THROWS_AS(is_normal_subsystem(big, f), NotSubsystem);
    CHECK(is_saturated(big).holds);
    for (auto const& phi : big.aut(ctx->whole_id())) CHECK(n_phi(big, phi) == ctx->whole_id());
    CHECK(intersect(f, big) == f);
    CHECK(generate({f, big}) == big);
  }
}

TEST_CASE("O^{2'} of C6 at 2") {
  auto c6 = whole(cyclic(6));
  auto f = system_of(c6, 2);
  auto o = opprime_subsystem(f);
  CHECK(o.system == inner_system(f.ctx(), f.ctx()->whole_id()));
  CHECK(o.minimality_verified);
}

TEST_CASE("O^{p'} matches the group only for constrained models") {
  auto s4 = whole(symmetric(4));
  REQUIRE(is_pprime_reduced_pconstrained(s4, 2));
  auto f = system_of(s4, 2);
  CHECK(opprime_subsystem(f).system == fusion_of_group(f.ctx(), residual_pprime(s4, 2)));

  // S5 at 3: O^{3'}(S5) = A5 still swaps the generators of a Sylow 3-subgroup.
  auto s5 = whole(symmetric(5));
  CHECK_FALSE(is_pprime_reduced_pconstrained(s5, 3));
  auto g = system_of(s5, 3);
  auto o = opprime_subsystem(g).system;
  CHECK(o == inner_system(g.ctx(), g.ctx()->whole_id()));
  CHECK_FALSE(o == fusion_of_group(g.ctx(), residual_pprime(s5, 3)));
}

TEST_CASE("n_phi sandwich") {
  for (auto g : {whole(symmetric(4)), whole(alternating(5)), whole(alternating(6))}) {
    auto f = system_of(g, 2);
    auto const& ctx = f.ctx();
    for (std::size_t p : f.objects()) {
      auto lower = (ctx->sub(p).members | ctx->centralizer_set(p));
      for (auto const& phi : f.homs(p)) {
        auto const& n = ctx->sub(n_phi(f, phi)).members;
        CHECK(n.is_subset_of(ctx->normalizer_set(p)));
        CHECK(lower.is_subset_of(n));
      }
      CHECK(ctx->sub(n_phi(f, ctx->inclusion(p))).members == ctx->normalizer_set(p));
    }
  }
}

TEST_CASE("corpus saturation and the Sylow criteria") {
  struct Case {
    GroupPtr g;
    std::size_t p;
  };
  std::vector<Case> cases{{symmetric(3), 2},   {symmetric(3), 3},    {symmetric(4), 2},
                          {symmetric(4), 3},   {alternating(4), 2},  {alternating(5), 2},
                          {alternating(5), 3}, {alternating(5), 5},  {dihedral(4), 2},
                          {symmetric(5), 2},   {alternating(6), 2},  {alternating(6), 3},
                          {alternating(7), 2}, {cyclic(6), 2}};
  for (auto const& c : cases) {
    auto g = whole(c.g);
    auto f = system_of(g, c.p);
    auto const& ctx = f.ctx();
    INFO("order " << g.order() << " p=" << c.p);
    CHECK(is_saturated(f).holds);
    std::size_t mismatches = 0;
    for (std::size_t p : f.objects()) {
      Subgroup pa = lift(f, p);
      auto flags = classify(f, p);
      auto ns = ctx->normalizer_set(p).size();
      auto cs = ctx->centralizer_set(p).size();
      bool normal_sylow = ns == p_part(normalizer(g, pa).order(), c.p);
      bool central_sylow = cs == p_part(centralizer(g, pa).order(), c.p);
      mismatches += flags.fully_normalized != normal_sylow;
      mismatches += flags.fully_centralized != central_sylow;
      if (flags.essential) CHECK(flags.centric);
      if (flags.centric && flags.radical) CHECK(ctx->le(op_core(f), p));
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("A7 at 2") {
  auto a7 = whole(alternating(7));
  auto f = system_of(a7, 2);
  auto const& ctx = f.ctx();
  REQUIRE(is_dihedral_of_order_8(ctx->sub(ctx->whole_id())));

  std::size_t found = 0;
  for (std::size_t id : f.objects()) {
    if (!is_klein(ctx->sub(id))) continue;
    Subgroup v = lift(f, id);
    std::size_t induced = normalizer(a7, v).order() / centralizer(a7, v).order();
    CHECK(f.aut(id).size() == induced);
    if (induced == 6) ++found;
  }
  CHECK(found == 2);
  CHECK(op_core(f) == 0);
  CHECK_FALSE(is_constrained(f));
  CHECK(frattini_check(f).holds);
  CHECK(essential_subgroups(f).size() == 2);
  for (std::size_t e : essential_subgroups(f))
    if (classify(f, e).fully_normalized) CHECK(constrained_core_centric_check(f, e).holds);

  SUBCASE("Alperin factorization on random morphisms") {
    std::vector<Map> all;
    for (std::size_t p : f.objects())
      for (auto const& m : f.homs(p)) all.push_back(m);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int i = 0; i < 50; ++i) {
      Map const& phi = all[pick(rng)];
      std::size_t src = ctx->source_id(phi);
      CHECK(recompose(ctx, src, alperin_decompose(f, phi)) == phi);
    }
  }
}

TEST_CASE("generation properties") {
  auto a6 = whole(alternating(6));
  auto f = system_of(a6, 2);
  auto const& ctx = f.ctx();
  auto inner = inner_system(ctx, ctx->whole_id());
  CHECK(is_subsystem(inner, f));
  CHECK_FALSE(is_subsystem(f, inner));
  CHECK(generate({f}) == f);
  CHECK(generate({inner, f}) == f);
  CHECK(intersect(inner, f) == inner);
  // Monotone: adding one more automorphism never shrinks the closure.
  for (std::size_t p : f.objects())
    for (auto const& m : f.aut(p)) {
      auto g = generate_from_maps(ctx, ctx->whole_id(), {m});
      CHECK(is_subsystem(inner, g));
      CHECK(is_subsystem(g, f));
    }
  auto json = f.to_json();
  CHECK(json["order"] == 8);
  CHECK(json["subgroups"].size() == ctx->count());
}
