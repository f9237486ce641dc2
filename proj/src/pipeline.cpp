#include "parafusion/pipeline.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "parafusion/errors.hpp"
#include "parafusion/io.hpp"
#include "parafusion/lattice.hpp"
#include "parafusion/lie_type.hpp"

namespace parafusion {

namespace {

Json gens_json(Subgroup const& h) { return Json(generator_strings(h)); }

Json one_based(std::vector<std::size_t> const& idx) {
  Json out = Json::array();
  for (std::size_t i : idx) out.push_back(i + 1);
  return out;
}

/// Proper subsets of {0..r-1} by increasing size, then lexicographically.
std::vector<std::vector<std::size_t>> proper_subsets(std::size_t r) {
  if (r > 16) throw CapExceeded("rank above 16");
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask + 1 < (1u << r); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < r; ++i)
      if (mask >> i & 1u) s.push_back(i);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

/// Translates between the local elements of S and the ambient group of G.
struct LocalMap {
  ContextPtr ctx;
  GroupPtr ambient;
  std::vector<Elem> to_ambient;
  std::unordered_map<Elem, Elem> to_local;

  LocalMap(ContextPtr c, GroupPtr amb) : ctx(std::move(c)), ambient(std::move(amb)) {
    for (Elem x = 0; x < ctx->order(); ++x) {
      Elem a = ambient->index(ctx->perm(x));
      to_ambient.push_back(a);
      to_local.emplace(a, x);
    }
  }
  Subgroup lift(std::size_t id) const {
    std::vector<Elem> gens;
    for (Elem x : ctx->sub(id).gens) gens.push_back(to_ambient[x]);
    return generate(ambient, gens);
  }
  /// c_n restricted to the local subgroup id (n must normalize it).
  Map conjugation(Elem n, std::size_t id) const {
    Map m(ctx->order(), kOff);
    ctx->sub(id).members.for_each([&](Elem x) {
      m[x] = static_cast<std::uint8_t>(to_local.at(ambient->conj(n, to_ambient[x])));
    });
    return m;
  }
};

Subgroup core_of(Subgroup const& g, Subgroup const& b) {
  ElementSet core = b.members;
  for (auto const& coset : left_cosets(g, b)) {
    core &= conjugate_set(g.ambient, b.members, coset.to_vector().front());
    if (core.size() == 1) break;
  }
  return from_closed_set(g.ambient, core);
}

std::size_t product_set_size(Subgroup const& a, Subgroup const& b) {
  auto const& amb = *a.ambient;
  ElementSet prod = amb.empty_set();
  a.members.for_each([&](Elem x) { b.members.for_each([&](Elem y) { prod.insert(amb.mul(x, y)); }); });
  return prod.size();
}

std::size_t component_count(ChamberSystem const& c) { return connected_components(c).size(); }

/// Every p-subgroup of S up to G-conjugacy has connected fixed points; if S is not
/// Sylow in G a Sylow subgroup of G (with empty fixed points) is the witness.
Verdict fixed_points_verdict(ParabolicSystemInput const& in, ChamberSystem const& c, Limits const& limits) {
  std::string const name = "fixed_points_connected";
  std::size_t checked = 0;
  for (auto const& p : subgroup_class_reps(in.group, in.sylow, limits)) {
    auto fp = fixed_points(c, p);
    ++checked;
    if (!fp.system.connected())
      return fail(name, Json{{"subgroup", gens_json(p)},
                             {"order", p.order()},
                             {"fixed_chambers", fp.system.count()},
                             {"components", component_count(fp.system)},
                             {"chambers", fp.map}});
  }
  if (!is_sylow(in.group, in.sylow, in.p)) {
    auto t = sylow(in.group, in.p);
    auto fp = fixed_points(c, t);
    return fail(name, Json{{"subgroup", gens_json(t)},
                           {"order", t.order()},
                           {"fixed_chambers", fp.system.count()},
                           {"components", component_count(fp.system)},
                           {"reason", "a Sylow p-subgroup of G is not conjugate into B"}});
  }
  return pass(name, Json{{"classes_checked", checked}});
}

/// Aut_G(P) transitive on C^P / C_G(P), for every F-centric fully normalized P.
Verdict transitivity_verdict(ParabolicSystemInput const& in, ChamberSystem const& c, FusionSystem const& f,
                             LocalMap const& lm) {
  std::string const name = "transitive_on_fixed_quotient";
  std::size_t checked = 0;
  for (std::size_t id : f.objects()) {
    auto flags = classify(f, id);
    if (!flags.centric || !flags.fully_normalized) continue;
    Subgroup p = lm.lift(id);
    auto fp = fixed_points(c, p);
    auto orbits = quotient(fp.system, induced_action(c, fp, normalizer(in.group, p)));
    ++checked;
    if (orbits.system.count() != 1)
      return fail(name, Json{{"subgroup", gens_json(p)},
                             {"order", p.order()},
                             {"fixed_chambers", fp.system.count()},
                             {"orbits", orbits.system.count()}});
  }
  return pass(name, Json{{"subgroups_checked", checked}});
}

/// (C^P / C_G(P))^R connected for F-centric P and p-subgroups R of Aut_G(P).
Verdict fixed_quotient_verdict(ParabolicSystemInput const& in, ChamberSystem const& c, FusionSystem const& f,
                               LocalMap const& lm, Limits const& limits) {
  std::string const name = "fixed_quotient_connected";
  std::size_t checked = 0;
  for (std::size_t id : f.objects()) {
    if (!classify(f, id).centric) continue;
    Subgroup p = lm.lift(id);
    Subgroup n = normalizer(in.group, p);
    Subgroup cent = centralizer(in.group, p);
    auto fp = fixed_points(c, p);
    auto orbits = quotient(fp.system, induced_action(c, fp, cent));
    auto qa = quotient_action(n, cent);
    auto aut = whole(Group::make(qa.group, limits));
    std::map<Perm, Elem> preimage;
    for (std::size_t k = 0; k < qa.domain.size(); ++k) preimage.emplace(qa.image[k], qa.domain[k]);

    for (auto const& r : subgroup_class_reps(aut, sylow(aut, in.p), limits)) {
      ++checked;
      std::vector<Elem> lifts;
      for (Elem x : r.gens) lifts.push_back(preimage.at(aut.ambient->perm(x)));
      std::vector<char> fixed(orbits.system.count(), 1);
      for (Elem x : lifts) {
        auto act = action_of(c, x);
        for (std::size_t k = 0; k < fp.map.size(); ++k) {
          auto it = std::lower_bound(fp.map.begin(), fp.map.end(), act[fp.map[k]]);
          std::size_t image = static_cast<std::size_t>(it - fp.map.begin());
          if (orbits.map[image] != orbits.map[k]) fixed[orbits.map[k]] = 0;
        }
      }
      std::vector<std::size_t> keep;
      for (std::size_t o = 0; o < fixed.size(); ++o)
        if (fixed[o]) keep.push_back(o);
      auto sub = induced(orbits.system, keep);
      if (!sub.system.connected()) {
        Json lifted = Json::array();
        for (Elem x : lifts) lifted.push_back(in.group.ambient->perm(x).to_string());
        return fail(name, Json{{"subgroup", gens_json(p)},
                               {"R_order", r.order()},
                               {"R_lifts", lifted},
                               {"fixed_orbits", sub.system.count()},
                               {"components", component_count(sub.system)}});
      }
    }
  }
  return pass(name, Json{{"pairs_checked", checked}});
}

Verdict essentials_centric_verdict(ParabolicSystemInput const& in, FusionSystem const& f, LocalMap const& lm) {
  std::string const name = "essentials_centric";
  std::size_t checked = 0;
  for (std::size_t i = 0; i < in.parabolics.size(); ++i) {
    if (!is_sylow(in.parabolics[i], in.sylow, in.p))
      return fail(name, Json{{"parabolic", i + 1}, {"reason", "S is not a Sylow p-subgroup of the parabolic"}});
    auto fi = fusion_of_group(f.ctx(), in.parabolics[i]);
    for (std::size_t e : essential_subgroups(fi)) {
      ++checked;
      if (!classify(f, e).centric)
        return fail(name, Json{{"parabolic", i + 1}, {"subgroup", gens_json(lm.lift(e))}});
    }
  }
  return pass(name, Json{{"essentials_checked", checked}});
}

Verdict skipped(std::string name, std::string reason) { return fail(std::move(name), Json{{"skipped", reason}}); }

}  // namespace

// ---------------------------------------------------------------- inputs and reports

ParabolicSystemInput ParabolicSystemInput::make(Subgroup group, Subgroup borel, std::vector<Subgroup> parabolics,
                                                std::size_t p) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (borel.ambient != group.ambient || !is_subgroup_of(borel, group))
    throw NotSubgroupChain("B is not contained in G");
  for (std::size_t i = 0; i < parabolics.size(); ++i)
    if (parabolics[i].ambient != group.ambient || !is_subgroup_of(borel, parabolics[i]) ||
        !is_subgroup_of(parabolics[i], group))
      throw NotSubgroupChain("parabolic " + std::to_string(i + 1) + " does not lie between B and G");
  Subgroup s = parafusion::sylow(borel, p);
  return ParabolicSystemInput{std::move(group), std::move(borel), std::move(parabolics), p, std::move(s)};
}

Subgroup ParabolicSystemInput::join_of(std::vector<std::size_t> const& j) const {
  Subgroup out = borel;
  for (std::size_t i : j) out = join(out, parabolics.at(i));
  return out;
}

bool FamilyReport::all_hold() const {
  return std::all_of(axioms.begin(), axioms.end(), [](Verdict const& v) { return v.holds; });
}

Verdict const* FamilyReport::find(std::string const& name) const {
  for (auto const& v : axioms)
    if (v.property == name) return &v;
  return nullptr;
}

Json FamilyReport::to_json() const {
  Json out = Json::array();
  for (auto const& v : axioms) out.push_back(Json{{"axiom", v.property}, {"holds", v.holds}, {"witness", v.witness}});
  return out;
}

// ---------------------------------------------------------------- parabolic systems

FamilyReport check_parabolic_system(ParabolicSystemInput const& in, Limits const& limits) {
  FamilyReport rep;
  std::size_t const r = in.parabolics.size();
  std::vector<std::size_t> all(r);
  for (std::size_t i = 0; i < r; ++i) all[i] = i;

  Subgroup generated = in.join_of(all);
  if (!(generated == in.group)) {
    rep.add(fail("generation", Json{{"reason", "the parabolics do not generate G"},
                                    {"generated_order", generated.order()},
                                    {"order", in.group.order()}}));
  } else {
    std::optional<Json> witness;
    for (auto const& j : proper_subsets(r)) {
      Subgroup gj = in.join_of(j);
      if (gj == in.group) {
        witness = Json{{"reason", "a proper subset generates G"}, {"J", one_based(j)}};
        break;
      }
    }
    rep.add(witness ? fail("generation", *witness) : pass("generation", Json{{"order", in.group.order()}}));
  }

  std::optional<Json> bad_pair;
  for (std::size_t i = 0; i < r && !bad_pair; ++i)
    for (std::size_t j = i + 1; j < r && !bad_pair; ++j) {
      Subgroup meet = intersect(in.parabolics[i], in.parabolics[j]);
      if (!(meet == in.borel))
        bad_pair = Json{{"pair", {i + 1, j + 1}}, {"intersection_order", meet.order()}, {"borel_order", in.borel.order()}};
    }
  rep.add(bad_pair ? fail("intersections", *bad_pair) : pass("intersections", Json{{"pairs", r * (r - 1) / 2}}));

  std::optional<std::size_t> equal;
  for (std::size_t i = 0; i < r && !equal; ++i)
    if (in.parabolics[i] == in.borel) equal = i;
  rep.add(equal ? fail("proper_borel", Json{{"parabolic", *equal + 1}})
                : pass("proper_borel", Json{{"borel_order", in.borel.order()}}));

  Subgroup core = core_of(in.group, in.borel);
  rep.add(core.is_trivial() ? pass("core_free", Json::object())
                            : fail("core_free", Json{{"core_order", core.order()}, {"core", gens_json(core)}}));

  rep.derived = Json{{"rank", r}, {"chambers", in.group.order() / in.borel.order()}};
  (void)limits;
  return rep;
}

// ---------------------------------------------------------------- parabolic families

FamilyReport check_parabolic_family(FusionSystem const& f, std::vector<FusionSystem> const& members) {
  FamilyReport rep;
  auto const& ctx = f.ctx();
  std::size_t const whole_id = ctx->whole_id();
  if (f.base() != whole_id) throw InvalidArgument("F must live on the whole p-group");
  for (auto const& fi : members)
    if (fi.ctx() != ctx || fi.base() != whole_id) throw InvalidArgument("members must share F's p-group");
  std::size_t const r = members.size();

  Json units = Json::array();
  for (std::size_t i = 0; i < r; ++i) {
    std::string const tag = "member_" + std::to_string(i + 1) + ".";
    auto sat = is_saturated(members[i]);
    sat.property = tag + "saturated";
    rep.add(sat);
    std::size_t u = op_core(members[i]);
    units.push_back(ctx->describe(u));
    bool constrained = is_constrained(members[i]);
    Json w{{"O_p", ctx->describe(u)}};
    rep.add(constrained ? pass(tag + "constrained", w) : fail(tag + "constrained", w));

    std::set<std::vector<std::size_t>> classes;
    Json ess = Json::array();
    for (std::size_t e : essential_subgroups(members[i])) {
      classes.insert(members[i].conjugates(e));
      ess.push_back(ctx->describe(e));
    }
    Json we{{"classes", classes.size()}, {"essentials", ess}};
    rep.add(classes.size() == 1 ? pass(tag + "essential_rank_one", we) : fail(tag + "essential_rank_one", we));
  }

  for (std::size_t i = 0; i < r; ++i)
    if (!is_subsystem(members[i], f)) {
      rep.add(fail("members_in_F", Json{{"member", i + 1}}));
      break;
    }
  if (!rep.find("members_in_F")) rep.add(pass("members_in_F", Json::object()));

  FusionSystem borel = normalizer_system(f, whole_id);
  {
    std::optional<Json> bad;
    for (std::size_t i = 0; i < r && !bad; ++i) {
      if (!is_subsystem(borel, members[i]))
        bad = Json{{"member", i + 1}, {"reason", "N_F(S) is not contained in the member"}};
      else if (borel == members[i])
        bad = Json{{"member", i + 1}, {"reason", "the member equals N_F(S)"}};
    }
    rep.add(bad ? fail("borel_proper_subsystem", *bad)
                : pass("borel_proper_subsystem", Json{{"borel_morphisms", borel.morphism_count()}}));
  }

  {
    FusionSystem gen = r == 0 ? inner_system(ctx, whole_id) : generate(members);
    if (!(gen == f)) {
      rep.add(fail("minimal_generation", Json{{"reason", "the members do not generate F"},
                                              {"generated_morphisms", gen.morphism_count()},
                                              {"morphisms", f.morphism_count()}}));
    } else {
      std::optional<Json> witness;
      for (auto const& j : proper_subsets(r)) {
        std::vector<FusionSystem> part;
        for (std::size_t i : j) part.push_back(members[i]);
        FusionSystem g = part.empty() ? inner_system(ctx, whole_id) : generate(part);
        if (g == f) {
          witness = Json{{"reason", "a proper subset generates F"}, {"J", one_based(j)}};
          break;
        }
      }
      Json ok{{"rank", r}};
      if (r == 1) ok["rank_one_family"] = true;
      rep.add(witness ? fail("minimal_generation", *witness) : pass("minimal_generation", ok));
    }
  }

  {
    std::optional<Json> bad;
    for (std::size_t i = 0; i < r && !bad; ++i)
      for (std::size_t j = i + 1; j < r && !bad; ++j)
        if (!(intersect(members[i], members[j]) == borel))
          bad = Json{{"pair", {i + 1, j + 1}},
                     {"intersection_morphisms", intersect(members[i], members[j]).morphism_count()},
                     {"borel_morphisms", borel.morphism_count()}};
    Json ok{{"pairs", r * (r - 1) / 2}};
    if (r < 2) ok["vacuous"] = true;
    rep.add(bad ? fail("pairwise_intersections", *bad) : pass("pairwise_intersections", ok));
  }

  {
    std::optional<Json> bad;
    Json pair_units = Json::array();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) {
        FusionSystem fij = generate({members[i], members[j]});
        bool sat = is_saturated(fij).holds;
        bool con = is_constrained(fij);
        pair_units.push_back(Json{{"pair", {i + 1, j + 1}}, {"O_p", ctx->describe(op_core(fij))}});
        if ((!sat || !con) && !bad) bad = Json{{"pair", {i + 1, j + 1}}, {"saturated", sat}, {"constrained", con}};
      }
    rep.add(bad ? fail("saturated_constrained_joins", *bad)
                : pass("saturated_constrained_joins", Json{{"pairs", r * (r - 1) / 2}}));
    rep.derived["U_ij"] = pair_units;
  }
  rep.derived["U_i"] = units;
  rep.derived["rank"] = r;
  if (r == 1) rep.derived["rank_one_family"] = true;
  return rep;
}

// ---------------------------------------------------------------- saturation criteria

FamilyReport saturation_criterion_check(ParabolicSystemInput const& in, Limits const& limits) {
  FamilyReport rep;
  ChamberSystem c = from_parabolic(in.group, in.borel, in.parabolics, limits);
  bool const sylow_ok = is_sylow(in.group, in.sylow, in.p);
  rep.add(sylow_ok ? pass("sylow_in_group", Json{{"order", in.sylow.order()}})
                   : fail("sylow_in_group", Json{{"order", in.sylow.order()},
                                                 {"p_part", p_part(in.group.order(), in.p)}}));
  rep.add(fixed_points_verdict(in, c, limits));

  auto ctx = PGroupContext::make(in.sylow, in.p, limits);
  if (!sylow_ok) {
    for (auto const* n : {"transitive_on_fixed_quotient", "fixed_quotient_connected", "essentials_centric",
                          "saturated"})
      rep.add(skipped(n, "S is not a Sylow p-subgroup of G"));
  } else {
    LocalMap lm(ctx, in.group.ambient);
    FusionSystem f = fusion_of_group(ctx, in.group);
    rep.add(transitivity_verdict(in, c, f, lm));
    rep.add(fixed_quotient_verdict(in, c, f, lm, limits));
    rep.add(essentials_centric_verdict(in, f, lm));
    auto sat = is_saturated(f);
    sat.property = "saturated";
    rep.add(sat);
  }
  bool hypotheses = true;
  for (auto const* n : {"fixed_points_connected", "transitive_on_fixed_quotient", "fixed_quotient_connected",
                        "essentials_centric"})
    hypotheses = hypotheses && rep.find(n)->holds;
  bool const concl = rep.find("saturated")->holds;
  Json w{{"hypotheses_hold", hypotheses}, {"saturated", concl}};
  rep.add(!hypotheses || concl ? pass("conclusion_consistent", w) : fail("conclusion_consistent", w));
  rep.derived = Json{{"chambers", c.count()}, {"rank", c.rank()}};
  return rep;
}

FamilyReport family_criterion_check(ParabolicSystemInput const& in, Limits const& limits) {
  FamilyReport rep;
  for (auto& v : check_parabolic_system(in, limits).axioms) {
    v.property = "system." + v.property;
    rep.add(std::move(v));
  }
  if (!is_sylow(in.group, in.sylow, in.p)) throw NotSylow("S is not a Sylow p-subgroup of G");
  auto ctx = PGroupContext::make(in.sylow, in.p, limits);
  LocalMap lm(ctx, in.group.ambient);
  FusionSystem f = fusion_of_group(ctx, in.group);
  std::vector<FusionSystem> members;
  for (auto const& gi : in.parabolics) members.push_back(fusion_of_group(ctx, gi));
  auto fam = check_parabolic_family(f, members);
  for (auto& v : fam.axioms) {
    v.property = "family." + v.property;
    rep.add(std::move(v));
  }
  std::size_t core = op_core(f);
  rep.add(ctx->sub(core).is_trivial() ? pass("op_trivial", Json::object())
                                      : fail("op_trivial", Json{{"O_p", gens_json(lm.lift(core))}}));

  ChamberSystem c = from_parabolic(in.group, in.borel, in.parabolics, limits);
  rep.add(fixed_points_verdict(in, c, limits));
  rep.add(fixed_quotient_verdict(in, c, f, lm, limits));
  auto sat = is_saturated(f);
  sat.property = "saturated";
  rep.add(sat);
  bool hypotheses = rep.find("fixed_points_connected")->holds && rep.find("fixed_quotient_connected")->holds;
  Json w{{"hypotheses_hold", hypotheses}, {"saturated", sat.holds}};
  rep.add(!hypotheses || sat.holds ? pass("conclusion_consistent", w) : fail("conclusion_consistent", w));
  rep.derived = fam.derived;
  rep.derived["chambers"] = c.count();
  return rep;
}

// ---------------------------------------------------------------- factorization

std::vector<FactorStep> factor_morphism(ParabolicSystemInput const& in, ChamberSystem const& c, Subgroup const& p,
                                        Elem g) {
  auto const& amb = *in.group.ambient;
  if (!in.group.contains(g)) throw InvalidArgument("g is not in G");
  if (!is_subgroup_of(p, in.sylow)) throw PreconditionFailed("P is not contained in S");
  Subgroup q = conjugate(p, g);
  if (!is_subgroup_of(q, in.sylow)) throw PreconditionFailed("gPg^-1 is not contained in S");
  auto const& prov = *c.provenance;

  Elem const ginv = amb.inv(g);
  std::size_t const start = prov.chamber_of[amb.identity()];
  std::size_t const goal = prov.chamber_of[ginv];
  if (start == goal) return {FactorStep{ginv, 0, p, q}};

  auto fp = fixed_points(c, p);
  auto local = [&](std::size_t chamber) {
    auto it = std::lower_bound(fp.map.begin(), fp.map.end(), chamber);
    if (it == fp.map.end() || *it != chamber) throw PreconditionFailed("chamber is not fixed by P");
    return static_cast<std::size_t>(it - fp.map.begin());
  };
  std::size_t const ls = local(start), lg = local(goal);
  std::size_t const n = fp.system.count();
  std::vector<std::size_t> parent(n, SIZE_MAX), via(n, 0);
  std::deque<std::size_t> queue{ls};
  parent[ls] = ls;
  while (!queue.empty() && parent[lg] == SIZE_MAX) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < fp.system.rank(); ++i)
      for (std::size_t y : fp.system.panel(i, x))
        if (parent[y] == SIZE_MAX) {
          parent[y] = x;
          via[y] = i;
          queue.push_back(y);
        }
  }
  if (parent[lg] == SIZE_MAX)
    throw DisconnectedFixedPoints("no gallery in C^P joins B and g^-1 B");

  std::vector<std::size_t> chambers{lg}, types;
  for (std::size_t x = lg; x != ls; x = parent[x]) {
    types.push_back(via[x]);
    chambers.push_back(parent[x]);
  }
  std::reverse(chambers.begin(), chambers.end());
  std::reverse(types.begin(), types.end());

  std::size_t const len = types.size();
  std::vector<Elem> x(len + 1), b(len + 1, amb.identity());
  x[0] = amb.identity();
  x[len] = ginv;
  for (std::size_t k = 1; k < len; ++k) x[k] = prov.reps[fp.map[chambers[k]]];
  for (std::size_t k = 1; k < len; ++k) {
    Subgroup pk = conjugate(p, amb.inv(x[k]));
    bool found = false;
    in.borel.members.for_each([&](Elem y) {
      if (!found && is_subgroup_of(conjugate(pk, amb.inv(y)), in.sylow)) {
        b[k] = y;
        found = true;
      }
    });
    if (!found) throw std::logic_error("no Borel element conjugates P into S");
  }
  std::vector<FactorStep> out;
  for (std::size_t k = 1; k <= len; ++k) {
    Elem y = amb.mul(amb.inv(x[k - 1]), x[k]);
    Elem h = amb.mul(amb.mul(amb.inv(b[k - 1]), y), b[k]);
    std::size_t j = types[k - 1];
    if (!in.parabolics[j].contains(h)) throw std::logic_error("gallery step left its parabolic");
    Subgroup src = conjugate(p, amb.inv(amb.mul(x[k - 1], b[k - 1])));
    Subgroup dst = conjugate(p, amb.inv(amb.mul(x[k], b[k])));
    out.push_back(FactorStep{h, j, std::move(src), std::move(dst)});
  }
  return out;
}

std::vector<FactorStep> factor_morphism(ParabolicSystemInput const& in, Subgroup const& p, Elem g) {
  return factor_morphism(in, from_parabolic(in.group, in.borel, in.parabolics), p, g);
}

// ---------------------------------------------------------------- diagrams of groups

DiagramOfGroups build_diagram_of_groups(FusionSystem const& f, std::vector<FusionSystem> const& members,
                                        DiagramRealizers const& r, Limits const& limits) {
  DiagramOfGroups out;
  auto& rep = out.report;
  auto const& ctx = f.ctx();
  GroupPtr const& amb = r.borel.ambient;
  LocalMap lm(ctx, amb);
  std::size_t const n = r.parabolics.size();
  if (members.size() != n) throw InvalidArgument("one realizer per member is required");

  std::vector<std::pair<Elem, Elem>> pin_s;
  for (Elem s : r.sylow.gens) pin_s.emplace_back(s, s);

  auto realizer_checks = [&](std::string const& tag, Subgroup const& x, FusionSystem const& expected) {
    bool red = is_pprime_reduced_pconstrained(x, r.p);
    rep.add(red ? pass(tag + ".p_reduced_constrained", Json{{"order", x.order()}})
                : fail(tag + ".p_reduced_constrained", Json{{"order", x.order()}, {"O_p", gens_json(core_p(x, r.p))}}));
    bool same = fusion_of_group(ctx, x) == expected;
    rep.add(same ? pass(tag + ".realizes", Json::object())
                 : fail(tag + ".realizes", Json{{"reason", "fusion system differs"}}));
  };
  realizer_checks("B", r.borel, normalizer_system(f, ctx->whole_id()));
  for (std::size_t i = 0; i < n; ++i) realizer_checks("G" + std::to_string(i + 1), r.parabolics[i], members[i]);

  // An identity-on-S isomorphism, the identity map when the groups coincide.
  auto pinned_iso = [&](Subgroup const& a, Subgroup const& b) -> std::optional<GroupMap> {
    if (a == b) return identity_map(a);
    return isomorphism(a, b, pin_s, limits);
  };
  auto embed = [&](GroupMap const& iso, Subgroup const& into) {
    return GroupMap{iso.source, into, iso.images};
  };

  bool all_found = true;
  Json missing = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Subgroup bi = normalizer(r.parabolics[i], r.sylow);
    auto alpha = pinned_iso(r.borel, bi);
    if (!alpha) {
      all_found = false;
      missing.push_back(Json{{"map", "B -> G" + std::to_string(i + 1)}});
      out.psi.push_back(GroupMap{r.borel, r.parabolics[i], {}});
      continue;
    }
    out.psi.push_back(embed(*alpha, r.parabolics[i]));
  }

  Json pair_info = Json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto it = r.pairs.find({std::min(i, j), std::max(i, j)});
      if (it == r.pairs.end()) throw InvalidArgument("missing realizer for a pair");
      Subgroup const& gij = it->second;
      if (i < j) {
        std::string tag = "G" + std::to_string(i + 1) + std::to_string(j + 1);
        realizer_checks(tag, gij, generate({members[i], members[j]}));
        bool gen = join(r.parabolics[i], r.parabolics[j]) == gij;
        rep.add(gen ? pass(tag + ".generated", Json::object())
                    : fail(tag + ".generated", Json{{"join_order", join(r.parabolics[i], r.parabolics[j]).order()},
                                                    {"order", gij.order()}}));
      }
      // G_i^(j): elements of N_{G_ij}(U_i) inducing automorphisms from F_i.
      std::size_t u = op_core(members[i]);
      Subgroup ui = lm.lift(u);
      auto auts = members[i].aut(u);
      std::set<Map> allowed(auts.begin(), auts.end());
      Subgroup nu = normalizer(gij, ui);
      ElementSet keep = amb->empty_set();
      nu.members.for_each([&](Elem x) {
        if (allowed.count(lm.conjugation(x, u))) keep.insert(x);
      });
      Subgroup gi_j = from_closed_set(amb, keep);
      pair_info.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"order", gi_j.order()}, {"U_i", gens_json(ui)}});
      auto phi = pinned_iso(r.parabolics[i], gi_j);
      if (!phi) {
        all_found = false;
        missing.push_back(Json{{"map", "G" + std::to_string(i + 1) + " -> G" + std::to_string(i + 1) + "^(" +
                                           std::to_string(j + 1) + ")"}});
        continue;
      }
      out.psi_pair.emplace(std::pair{i, j}, embed(*phi, gij));
    }
  rep.add(all_found ? pass("identity_on_S_isomorphisms", Json::object())
                    : fail("identity_on_S_isomorphisms", Json{{"missing", missing}}));

  std::optional<Json> bad;
  std::size_t squares = 0;
  for (std::size_t i = 0; i < n && all_found; ++i)
    for (std::size_t j = i + 1; j < n && !bad; ++j) {
      ++squares;
      auto const& a = out.psi_pair.at({i, j});
      auto const& b = out.psi_pair.at({j, i});
      r.borel.members.for_each([&](Elem x) {
        if (!bad && a(out.psi[i](x)) != b(out.psi[j](x)))
          bad = Json{{"pair", {i + 1, j + 1}}, {"element", amb->perm(x).to_string()}};
      });
    }
  if (!all_found)
    rep.add(skipped("squares_commute", "some maps are missing"));
  else
    rep.add(bad ? fail("squares_commute", *bad) : pass("squares_commute", Json{{"squares", squares}}));
  rep.derived = Json{{"G_i^(j)", pair_info}};
  return out;
}

// ---------------------------------------------------------------- hat reduction

HatReduction hat_reduction(ParabolicSystemInput const& in, Limits const& limits) {
  auto sys = check_parabolic_system(in, limits);
  for (auto const& v : sys.axioms)
    if (!v.holds) throw HypothesisFailed("not a parabolic system: " + v.property + " fails");
  std::size_t const r = in.parabolics.size();

  HatReduction out;
  auto& rep = out.report;
  Subgroup hat_b = trivial(in.group.ambient);
  for (auto const& gi : in.parabolics) {
    out.residuals.push_back(residual_pprime(gi, in.p));
    hat_b = join(hat_b, normalizer(out.residuals.back(), in.sylow));
  }
  out.hat_borel = hat_b;
  Subgroup hat_g = hat_b;
  for (auto const& gi : out.residuals) {
    out.hat_parabolics.push_back(join(gi, hat_b));
    hat_g = join(hat_g, out.hat_parabolics.back());
  }
  out.hat_group = hat_g;

  rep.add(is_normal_in(hat_g, in.group) ? pass("normal_in_G", Json{{"index", in.group.order() / hat_g.order()}})
                                        : fail("normal_in_G", Json{{"order", hat_g.order()}}));
  Subgroup meet = intersect(hat_g, in.borel);
  std::size_t prod = hat_g.order() * in.borel.order() / meet.order();
  Json pw{{"product_order", prod}, {"order", in.group.order()}};
  rep.add(prod == in.group.order() ? pass("product_with_borel", pw) : fail("product_with_borel", pw));

  auto hat_in = ParabolicSystemInput::make(hat_g, hat_b, out.hat_parabolics, in.p);
  auto hat_sys = check_parabolic_system(hat_in, limits);
  Json failed = Json::array();
  for (auto const& v : hat_sys.axioms)
    if (!v.holds) failed.push_back(v.to_json());
  rep.add(failed.empty() ? pass("hat_parabolic_system", Json::object())
                         : fail("hat_parabolic_system", Json{{"failed", failed}}));

  out.chambers = from_parabolic(in.group, in.borel, in.parabolics, limits);
  out.hat_chambers = from_parabolic(hat_g, hat_b, out.hat_parabolics, limits);
  std::vector<std::size_t> map;
  for (Elem rep_elem : out.hat_chambers.provenance->reps)
    map.push_back(out.chambers.provenance->chamber_of[rep_elem]);
  out.phi = CSMorphism{out.hat_chambers, out.chambers, std::move(map)};
  rep.add(is_2_covering(out.phi));

  std::vector<std::size_t> fibre(out.chambers.count(), 0);
  for (std::size_t x : out.phi.map) ++fibre[x];
  std::size_t const expected = meet.order() / hat_b.order();
  bool uniform = std::all_of(fibre.begin(), fibre.end(), [&](std::size_t s) { return s == expected; });
  Json fw{{"fibre", expected}, {"index", in.group.order() / hat_g.order()}, {"borel_order", in.borel.order()},
          {"hat_borel_order", hat_b.order()}};
  rep.add(uniform ? pass("fibre_sizes", fw) : fail("fibre_sizes", fw));

  Json per_pair = Json::array();
  bool formula = true;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      Subgroup hij = join(join(out.residuals[i], out.residuals[j]), hat_b);
      out.hat_pairs.emplace(std::pair{i, j}, hij);
      std::size_t lhs = product_set_size(hij, in.borel) * intersect(hij, in.borel).order();
      std::size_t rhs = hij.order() * in.borel.order();
      formula = formula && lhs == rhs;
      per_pair.push_back(Json{{"pair", {i + 1, j + 1}},
                              {"lhs", lhs},
                              {"rhs", rhs},
                              {"meet_is_hat_borel", intersect(hij, in.borel) == hat_b}});
    }
  rep.add(formula ? pass("product_formula", Json{{"pairs", per_pair}})
                  : fail("product_formula", Json{{"pairs", per_pair}}));

  if (!is_sylow(hat_g, in.sylow, in.p)) {
    for (auto const* n : {"hat_fusion_saturated", "hat_fusion_normal", "hat_op_trivial"})
      rep.add(skipped(n, "S is not a Sylow p-subgroup of the hat group"));
  } else {
    auto ctx = PGroupContext::make(in.sylow, in.p, limits);
    FusionSystem hat_f = fusion_of_group(ctx, hat_g);
    auto sat = is_saturated(hat_f);
    sat.property = "hat_fusion_saturated";
    rep.add(sat);
    if (is_sylow(in.group, in.sylow, in.p)) {
      auto normal = is_normal_subsystem(hat_f, fusion_of_group(ctx, in.group));
      normal.property = "hat_fusion_normal";
      rep.add(normal);
    } else {
      rep.add(skipped("hat_fusion_normal", "S is not a Sylow p-subgroup of G"));
    }
    std::size_t core = op_core(hat_f);
    LocalMap lm(ctx, in.group.ambient);
    rep.add(ctx->sub(core).is_trivial() ? pass("hat_op_trivial", Json::object())
                                        : fail("hat_op_trivial", Json{{"O_p", gens_json(lm.lift(core))}}));
  }

  rep.derived = Json{{"hat_group_order", hat_g.order()},
                     {"hat_borel_order", hat_b.order()},
                     {"hat_chambers", out.hat_chambers.count()},
                     {"chambers", out.chambers.count()}};
  if (out.hat_chambers.connected()) rep.derived["deck_group_order"] = deck_group(out.phi).size();
  return out;
}

// ---------------------------------------------------------------- classical families

FamilyReport classical_family_check(ParabolicSystemInput const& in, Limits const& limits) {
  FamilyReport rep;
  if (!is_sylow(in.group, in.sylow, in.p)) throw NotSylow("S is not a Sylow p-subgroup of G");
  auto ctx = PGroupContext::make(in.sylow, in.p, limits);
  FusionSystem f = fusion_of_group(ctx, in.group);
  std::vector<FusionSystem> members;
  for (auto const& gi : in.parabolics) members.push_back(fusion_of_group(ctx, gi));
  auto fam = check_parabolic_family(f, members);
  for (auto& v : fam.axioms) {
    v.property = "family." + v.property;
    rep.add(std::move(v));
  }
  std::size_t const r = in.parabolics.size();

  for (std::size_t i = 0; i < r; ++i) {
    std::size_t u = op_core(members[i]);
    auto out_group = outer_automorphism_group(members[i], u);
    auto label = identify_lie_type(whole(out_group), in.p);
    std::string const name = "member_" + std::to_string(i + 1) + ".rank_one_lie_type";
    Json w{{"U", ctx->describe(u)}, {"out_order", out_group->order()}};
    if (label) {
      w["name"] = label->name;
      w["type"] = label->type;
    }
    rep.add(label && label->rank == 1 ? pass(name, w) : fail(name, w));
  }

  CoxeterDiagram m;
  m.m.assign(r, std::vector<std::size_t>(r, 2));
  for (std::size_t i = 0; i < r; ++i) m.m[i][i] = 1;
  bool recognized = true;
  bool classical = core_p(in.borel, in.p) == in.sylow;
  Json classical_w = Json::array();
  auto cham = from_parabolic(in.group, in.borel, in.parabolics, limits);
  auto chamber_diagram = diagram(cham, false, in.p).diagram;
  bool agree = true;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      Subgroup gij = join(in.parabolics[i], in.parabolics[j]);
      auto q = quotient_action(gij, core_p(gij, in.p));
      auto label = identify_lie_type(whole(Group::make(q.group, limits)), in.p);
      FusionSystem fij = generate({members[i], members[j]});
      std::size_t uij = op_core(fij);
      std::string const name = "pair_" + std::to_string(i + 1) + std::to_string(j + 1) + ".rank_two_type";
      Json w{{"order", gij.order()}, {"quotient_order", q.group.elements(limits).size()},
             {"U", ctx->describe(uij)}, {"out_order", outer_automorphism_group(fij, uij)->order()}};
      std::size_t bond = CoxeterDiagram::kInfinity;
      if (product_set_equals(gij, in.parabolics[i], in.parabolics[j])) {
        w["kind"] = "product";
        bond = 2;
      } else if (label && label->rank == 2) {
        w["kind"] = "lie_type";
        w["name"] = label->name;
        w["type"] = label->type;
        bond = label->coxeter_m;
      } else {
        w["kind"] = "unrecognized";
        recognized = false;
      }
      bool const ok = bond != CoxeterDiagram::kInfinity;
      m.m[i][j] = m.m[j][i] = bond;
      if (ok && chamber_diagram.m[i][j] != bond) agree = false;
      rep.add(ok ? pass(name, w) : fail(name, w));
      if (!is_sylow(gij, in.sylow, in.p)) {
        classical = false;
        classical_w.push_back(Json{{"pair", {i + 1, j + 1}}});
      }
    }
  rep.add(classical ? pass("sylow_is_core_of_borel", Json::object())
                    : fail("sylow_is_core_of_borel", Json{{"O_p(B)_order", core_p(in.borel, in.p).order()},
                                                          {"pairs_without_S_sylow", classical_w}}));
  rep.add(agree ? pass("diagram_matches_chambers", Json{{"chamber_diagram", chamber_diagram.to_json()}})
                : fail("diagram_matches_chambers", Json{{"chamber_diagram", chamber_diagram.to_json()}}));
  auto types = m.spherical_types();
  if (!recognized)
    rep.add(fail("spherical", Json{{"reason", "an edge is unrecognized, sphericity not asserted"}}));
  else
    rep.add(types ? pass("spherical", Json{{"types", *types}}) : fail("spherical", Json{{"types", Json::array()}}));
  rep.add(r >= 3 ? pass("rank_at_least_three", Json{{"rank", r}}) : fail("rank_at_least_three", Json{{"rank", r}}));

  rep.derived = fam.derived;
  rep.derived["diagram"] = m.to_json();
  rep.derived["render"] = m.render();
  if (rep.all_hold() && types)
    rep.derived["conclusion"] = "consistent with the fusion system of a finite simple group of Lie type " +
                                (types->size() == 1 ? types->front() : std::string("(reducible diagram)"));
  return rep;
}

}  // namespace parafusion
