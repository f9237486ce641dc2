#include "parafusion/fusion.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "parafusion/errors.hpp"

namespace parafusion {

// ---------------------------------------------------------------- context

std::shared_ptr<PGroupContext const> PGroupContext::make(Subgroup const& s, std::size_t p,
                                                         Limits const& limits) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (!is_p_group(s, p)) throw InvalidArgument("S is not a p-group");
  if (s.order() > limits.fusion)
    throw CapExceeded("fusion cap: |S| = " + std::to_string(s.order()) + " exceeds " +
                      std::to_string(limits.fusion));
  if (s.order() > kOff) throw CapExceeded("p-group too large for byte morphism tables");

  auto ctx = std::make_shared<PGroupContext>();
  std::vector<Perm> gens;
  for (Elem x : s.gens) gens.push_back(s.ambient->perm(x));
  ctx->group_ = Group::make(PermGroup(s.ambient->degree(), std::move(gens)), limits);
  ctx->p_ = p;
  Subgroup all = whole(ctx->group_);
  ctx->lattice_ = subgroup_lattice(all, limits);
  for (auto const& h : ctx->lattice_.subgroups) {
    ctx->normalizers_.push_back(normalizer(all, h).members);
    ctx->centralizers_.push_back(centralizer(all, h).members);
  }
  return ctx;
}

std::size_t PGroupContext::id_of(ElementSet const& members) const {
  auto id = lattice_.find(members);
  if (!id) throw InvalidArgument("element set is not a subgroup of S");
  return *id;
}

std::size_t PGroupContext::join_id(std::size_t a, std::size_t b) const {
  return id_of(join(sub(a), sub(b)).members);
}

Map PGroupContext::inclusion(std::size_t id) const {
  Map m(order(), kOff);
  sub(id).members.for_each([&](Elem x) { m[x] = static_cast<std::uint8_t>(x); });
  return m;
}

Map PGroupContext::conjugation(Elem s, std::size_t id) const {
  Map m(order(), kOff);
  sub(id).members.for_each(
      [&](Elem x) { m[x] = static_cast<std::uint8_t>(group_->conj(s, x)); });
  return m;
}

Map PGroupContext::restrict(Map const& f, std::size_t id) const {
  Map m(order(), kOff);
  sub(id).members.for_each([&](Elem x) {
    if (f[x] == kOff) throw InvalidArgument("restriction outside the source");
    m[x] = f[x];
  });
  return m;
}

Map PGroupContext::compose(Map const& g, Map const& f) const {
  Map m(order(), kOff);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] == kOff) continue;
    if (g[f[x]] == kOff) throw InvalidArgument("composition outside the source");
    m[x] = g[f[x]];
  }
  return m;
}

Map PGroupContext::invert(Map const& f) const {
  Map m(order(), kOff);
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[x] != kOff) m[f[x]] = static_cast<std::uint8_t>(x);
  return m;
}

ElementSet PGroupContext::source_set(Map const& f) const {
  ElementSet s(order());
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[x] != kOff) s.insert(static_cast<Elem>(x));
  return s;
}

ElementSet PGroupContext::image_set(Map const& f) const {
  ElementSet s(order());
  for (auto y : f)
    if (y != kOff) s.insert(y);
  return s;
}

bool PGroupContext::is_injective_hom(Map const& f) const {
  auto src = source_set(f);
  if (image_set(f).size() != src.size()) return false;
  bool ok = true;
  src.for_each([&](Elem x) {
    src.for_each([&](Elem y) {
      if (ok && f[group_->mul(x, y)] != group_->mul(f[x], f[y])) ok = false;
    });
  });
  return ok;
}

std::size_t PGroupContext::id_of_ambient(Subgroup const& h) const {
  ElementSet s(order());
  h.members.for_each([&](Elem x) {
    auto local = group_->find(h.ambient->perm(x));
    if (!local) throw InvalidArgument("subgroup is not contained in S");
    s.insert(*local);
  });
  return id_of(s);
}

Json PGroupContext::describe(std::size_t id) const {
  Json gens = Json::array();
  for (Elem x : sub(id).gens) gens.push_back(perm(x).to_string());
  return gens;
}

Json PGroupContext::describe(Map const& f) const {
  std::size_t src = source_id(f);
  Json images = Json::array();
  for (Elem x : sub(src).gens) images.push_back({perm(x).to_string(), perm(f[x]).to_string()});
  return Json{{"source", describe(src)}, {"target", describe(image_id(f))}, {"images", images}};
}

// ---------------------------------------------------------------- system

FusionSystem::FusionSystem(ContextPtr ctx, std::size_t base, std::vector<std::vector<Map>> homs)
    : ctx_(std::move(ctx)), base_(base), homs_(std::move(homs)) {
  homs_.resize(ctx_->count());
  for (std::size_t id = 0; id < ctx_->count(); ++id) {
    if (ctx_->le(id, base_)) objects_.push_back(id);
    auto& v = homs_[id];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

std::vector<Map> FusionSystem::hom(std::size_t p, std::size_t q) const {
  std::vector<Map> out;
  auto const& target = ctx_->sub(q).members;
  for (auto const& f : homs_[p])
    if (ctx_->image_set(f).is_subset_of(target)) out.push_back(f);
  return out;
}

bool FusionSystem::contains(Map const& f) const {
  auto const& v = homs_[ctx_->source_id(f)];
  return std::binary_search(v.begin(), v.end(), f);
}

std::size_t FusionSystem::morphism_count() const {
  std::size_t n = 0;
  for (auto const& v : homs_) n += v.size();
  return n;
}

std::vector<std::size_t> FusionSystem::conjugates(std::size_t p) const {
  std::vector<std::size_t> out;
  for (auto const& f : homs_[p]) out.push_back(ctx_->image_id(f));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ElementSet FusionSystem::normalizer_set(std::size_t p) const {
  return ctx_->normalizer_set(p) & base_group().members;
}

ElementSet FusionSystem::centralizer_set(std::size_t p) const {
  return ctx_->centralizer_set(p) & base_group().members;
}

Json FusionSystem::to_json() const {
  Json elems = Json::array();
  for (Elem x = 0; x < ctx_->order(); ++x) elems.push_back(ctx_->perm(x).to_string());
  Json subs = Json::array();
  for (std::size_t id : objects_) subs.push_back(ctx_->describe(id));
  Json morphisms = Json::array();
  for (std::size_t p : objects_) {
    auto const src = ctx_->sub(p).elements();
    std::map<std::size_t, Json> by_target;
    for (auto const& f : homs_[p]) {
      Json table = Json::array();
      for (Elem x : src) table.push_back(f[x]);
      auto [it, fresh] = by_target.try_emplace(ctx_->image_id(f), Json::array());
      it->second.push_back(std::move(table));
    }
    for (auto& [q, maps] : by_target)
      morphisms.push_back(Json{{"source", p}, {"target", q}, {"maps", std::move(maps)}});
  }
  return Json{{"p", ctx_->p()},
              {"order", base_group().order()},
              {"elements", elems},
              {"subgroups", subs},
              {"morphisms", morphisms}};
}

// ---------------------------------------------------------------- construction

FusionSystem fusion_of_group(ContextPtr const& ctx, Subgroup const& g) {
  auto const& amb = *g.ambient;
  std::vector<Elem> to_amb(ctx->order());
  std::vector<std::uint8_t> to_local(amb.order(), kOff);
  for (Elem x = 0; x < ctx->order(); ++x) {
    auto a = amb.find(ctx->perm(x));
    if (!a || !g.contains(*a)) throw NotSylow("S is not contained in G");
    to_amb[x] = *a;
    to_local[*a] = static_cast<std::uint8_t>(x);
  }
  if (ctx->order() != p_part(g.order(), ctx->p()))
    throw NotSylow("|S| = " + std::to_string(ctx->order()) + " is not the " +
                   std::to_string(ctx->p()) + "-part of |G| = " + std::to_string(g.order()));

  auto lift = [&](std::size_t id) {
    std::vector<Elem> gens;
    for (Elem x : ctx->sub(id).gens) gens.push_back(to_amb[x]);
    return generate(g.ambient, gens);
  };
  Subgroup s_amb = lift(ctx->whole_id());
  std::vector<std::vector<Map>> homs(ctx->count());
  for (std::size_t id = 0; id < ctx->count(); ++id) {
    Subgroup p_amb = lift(id);
    auto const src = ctx->sub(id).elements();
    std::set<Map> maps;
    transporter(g, p_amb, s_amb).for_each([&](Elem t) {
      Map m(ctx->order(), kOff);
      for (Elem x : src) m[x] = to_local[amb.conj(t, to_amb[x])];
      maps.insert(std::move(m));
    });
    homs[id].assign(maps.begin(), maps.end());
  }
  FusionSystem f(ctx, ctx->whole_id(), std::move(homs));
  f.provenance = Provenance{g, to_amb};
  return f;
}

FusionSystem fusion_of_group(Subgroup const& g, Subgroup const& s, std::size_t p,
                             Limits const& limits) {
  if (!is_sylow(g, s, p)) throw NotSylow("S is not a Sylow " + std::to_string(p) + "-subgroup of G");
  return fusion_of_group(PGroupContext::make(s, p, limits), g);
}

FusionSystem inner_system(ContextPtr const& ctx, std::size_t base) {
  std::vector<std::vector<Map>> homs(ctx->count());
  auto const elems = ctx->sub(base).elements();
  for (std::size_t id = 0; id < ctx->count(); ++id) {
    if (!ctx->le(id, base)) continue;
    for (Elem s : elems) homs[id].push_back(ctx->conjugation(s, id));
  }
  return FusionSystem(ctx, base, std::move(homs));
}

FusionSystem generate_from_maps(ContextPtr const& ctx, std::size_t base,
                                std::vector<Map> const& maps) {
  std::size_t const n = ctx->count();
  std::vector<std::vector<std::size_t>> maximal(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (ctx->sub(b).order() * ctx->p() == ctx->sub(a).order() && ctx->le(b, a))
        maximal[a].push_back(b);

  std::vector<std::set<Map>> out(n);
  std::vector<std::vector<Map>> into(n);
  std::deque<Map> queue;
  auto add = [&](Map m) {
    std::size_t src = ctx->source_id(m);
    if (out[src].count(m)) return;
    into[ctx->image_id(m)].push_back(m);
    out[src].insert(m);
    queue.push_back(std::move(m));
  };

  auto const& base_members = ctx->sub(base).members;
  add(ctx->inclusion(base));
  for (Elem s : ctx->sub(base).gens) add(ctx->conjugation(s, base));
  for (auto const& m : maps) {
    if (!ctx->source_set(m).is_subset_of(base_members) ||
        !ctx->image_set(m).is_subset_of(base_members))
      throw InvalidArgument("morphism outside the base p-group");
    if (!ctx->is_injective_hom(m)) throw InvalidArgument("morphism is not an injective homomorphism");
    add(m);
  }

  while (!queue.empty()) {
    Map m = std::move(queue.front());
    queue.pop_front();
    std::size_t src = ctx->source_id(m);
    std::size_t dst = ctx->image_id(m);
    add(ctx->invert(m));
    for (std::size_t q : maximal[src]) add(ctx->restrict(m, q));
    std::vector<Map> after(out[dst].begin(), out[dst].end());
    for (auto const& psi : after) add(ctx->compose(psi, m));
    std::vector<Map> before = into[src];
    for (auto const& chi : before) add(ctx->compose(m, chi));
  }

  std::vector<std::vector<Map>> homs(n);
  for (std::size_t id = 0; id < n; ++id) homs[id].assign(out[id].begin(), out[id].end());
  return FusionSystem(ctx, base, std::move(homs));
}

FusionSystem generate(std::vector<FusionSystem> const& parts) {
  if (parts.empty()) throw InvalidArgument("nothing to generate from");
  auto const& ctx = parts.front().ctx();
  std::vector<Map> maps;
  for (auto const& f : parts) {
    if (f.ctx() != ctx) throw InvalidArgument("systems live over different p-groups");
    for (std::size_t id : f.objects())
      for (auto const& m : f.homs(id)) maps.push_back(m);
  }
  return generate_from_maps(ctx, ctx->whole_id(), maps);
}

FusionSystem intersect(FusionSystem const& a, FusionSystem const& b) {
  if (a.ctx() != b.ctx()) throw InvalidArgument("systems live over different p-groups");
  auto const& ctx = a.ctx();
  std::size_t base = ctx->id_of(a.base_group().members & b.base_group().members);
  std::vector<std::vector<Map>> homs(ctx->count());
  for (std::size_t id = 0; id < ctx->count(); ++id) {
    if (!ctx->le(id, base)) continue;
    std::set_intersection(a.homs(id).begin(), a.homs(id).end(), b.homs(id).begin(),
                          b.homs(id).end(), std::back_inserter(homs[id]));
  }
  return FusionSystem(ctx, base, std::move(homs));
}

bool is_subsystem(FusionSystem const& a, FusionSystem const& b) {
  if (a.ctx() != b.ctx() || !a.ctx()->le(a.base(), b.base())) return false;
  for (std::size_t id : a.objects())
    if (!std::includes(b.homs(id).begin(), b.homs(id).end(), a.homs(id).begin(),
                       a.homs(id).end()))
      return false;
  return true;
}

// ---------------------------------------------------------------- automorphisms

namespace {

Perm map_to_perm(Map const& m, std::vector<Elem> const& points) {
  std::vector<Point> images(std::max<std::size_t>(points.size(), 1), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto it = std::lower_bound(points.begin(), points.end(), static_cast<Elem>(m[points[i]]));
    images[i] = static_cast<Point>(it - points.begin());
  }
  return Perm(std::move(images));
}

}  // namespace

Elem AutGroup::element_of(Map const& f) const {
  for (Elem e = 0; e < maps.size(); ++e)
    if (maps[e] == f) return e;
  throw InvalidArgument("map is not an automorphism in the system");
}

AutGroup automorphism_group(FusionSystem const& f, std::size_t p) {
  auto const& ctx = f.ctx();
  auto const points = ctx->sub(p).elements();
  auto const auts = f.aut(p);
  std::unordered_map<Perm, Map, PermHash> by_perm;
  std::vector<Perm> gens;
  for (auto const& m : auts) {
    Perm q = map_to_perm(m, points);
    gens.push_back(q);
    by_perm.emplace(std::move(q), m);
  }
  AutGroup out;
  out.group = Group::make(PermGroup(std::max<std::size_t>(points.size(), 1), std::move(gens)));
  if (out.group->order() != auts.size())
    throw InvalidArgument("automorphisms are not closed under composition");
  for (Elem e = 0; e < out.group->order(); ++e) out.maps.push_back(by_perm.at(out.group->perm(e)));

  auto collect = [&](ElementSet const& conjugators) {
    std::vector<Elem> elems;
    conjugators.for_each([&](Elem s) {
      elems.push_back(out.group->index(map_to_perm(ctx->conjugation(s, p), points)));
    });
    return generate(out.group, elems);
  };
  out.inner = collect(ctx->sub(p).members);
  out.from_base = collect(f.normalizer_set(p));
  return out;
}

GroupPtr outer_automorphism_group(FusionSystem const& f, std::size_t p) {
  AutGroup a = automorphism_group(f, p);
  return Group::make(quotient_action(whole(a.group), a.inner).group);
}

// ---------------------------------------------------------------- classification

namespace {

struct BasicFlags {
  bool fully_centralized = true;
  bool fully_normalized = true;
  bool centric = true;
  std::size_t better_centralized = 0;
  std::size_t better_normalized = 0;
  std::size_t non_centric = 0;
};

BasicFlags basic_flags(FusionSystem const& f, std::size_t p) {
  auto const& ctx = f.ctx();
  BasicFlags b;
  std::size_t const c = f.centralizer_set(p).size();
  std::size_t const n = f.normalizer_set(p).size();
  for (std::size_t q : f.conjugates(p)) {
    if (b.fully_centralized && f.centralizer_set(q).size() > c) {
      b.fully_centralized = false;
      b.better_centralized = q;
    }
    if (b.fully_normalized && f.normalizer_set(q).size() > n) {
      b.fully_normalized = false;
      b.better_normalized = q;
    }
    if (b.centric && !f.centralizer_set(q).is_subset_of(ctx->sub(q).members)) {
      b.centric = false;
      b.non_centric = q;
    }
  }
  return b;
}

}  // namespace

SubgroupFlags classify(FusionSystem const& f, std::size_t p) {
  auto const& ctx = f.ctx();
  BasicFlags b = basic_flags(f, p);
  SubgroupFlags out;
  out.fully_centralized = b.fully_centralized;
  out.fully_normalized = b.fully_normalized;
  out.centric = b.centric;

  AutGroup a = automorphism_group(f, p);
  Subgroup all = whole(a.group);
  out.radical = core_p(all, ctx->p()).order() == a.inner.order();
  GroupPtr outer = Group::make(quotient_action(all, a.inner).group);
  bool embedded = strongly_p_embedded_exists(whole(outer), ctx->p());
  out.essential = out.centric && embedded;

  out.witness = Json{{"subgroup", ctx->describe(p)},
                     {"order", ctx->sub(p).order()},
                     {"aut_order", a.group->order()},
                     {"out_order", outer->order()},
                     {"conjugates", f.conjugates(p).size()},
                     {"out_has_strongly_p_embedded", embedded}};
  if (!b.fully_centralized) out.witness["larger_centralizer"] = ctx->describe(b.better_centralized);
  if (!b.fully_normalized) out.witness["larger_normalizer"] = ctx->describe(b.better_normalized);
  if (!b.centric) out.witness["non_centric_conjugate"] = ctx->describe(b.non_centric);
  return out;
}

std::vector<std::size_t> essential_subgroups(FusionSystem const& f) {
  std::vector<std::size_t> out;
  for (std::size_t id : f.objects())
    if (basic_flags(f, id).centric && classify(f, id).essential) out.push_back(id);
  return out;
}

std::size_t n_phi(FusionSystem const& f, Map const& phi) {
  auto const& ctx = f.ctx();
  auto const& g = *ctx->group();
  std::size_t const p = ctx->source_id(phi);
  std::size_t const q = ctx->image_id(phi);
  Map const inv = ctx->invert(phi);
  std::set<Map> aut_s;
  f.normalizer_set(q).for_each([&](Elem z) { aut_s.insert(ctx->conjugation(z, q)); });
  auto const qs = ctx->sub(q).elements();
  ElementSet out(ctx->order());
  f.normalizer_set(p).for_each([&](Elem x) {
    Map m(ctx->order(), kOff);
    for (Elem y : qs) m[y] = phi[g.conj(x, inv[y])];
    if (aut_s.count(m)) out.insert(x);
  });
  return ctx->id_of(out);
}

Verdict is_saturated(FusionSystem const& f, SaturationMode mode) {
  auto const& ctx = f.ctx();
  std::string const name = mode == SaturationMode::Full ? "saturated" : "saturated(centric)";
  std::vector<BasicFlags> flags;
  for (std::size_t id = 0; id < ctx->count(); ++id)
    flags.push_back(ctx->le(id, f.base()) ? basic_flags(f, id) : BasicFlags{});

  std::size_t checked_subgroups = 0, checked_maps = 0;
  for (std::size_t p : f.objects()) {
    if (mode == SaturationMode::CentricOnly && !flags[p].centric) continue;
    ++checked_subgroups;
    if (flags[p].fully_normalized) {
      if (!flags[p].fully_centralized)
        return fail(name, Json{{"axiom", "I"},
                               {"subgroup", ctx->describe(p)},
                               {"reason", "fully normalized but not fully centralized"},
                               {"larger_centralizer", ctx->describe(flags[p].better_centralized)}});
      std::size_t aut_f = f.aut(p).size();
      std::size_t aut_s = f.normalizer_set(p).size() / f.centralizer_set(p).size();
      if (aut_s != p_part(aut_f, ctx->p()))
        return fail(name, Json{{"axiom", "I"},
                               {"subgroup", ctx->describe(p)},
                               {"reason", "Aut_S(P) is not a Sylow subgroup of Aut_F(P)"},
                               {"aut_s_order", aut_s},
                               {"aut_f_order", aut_f}});
    }
    for (auto const& phi : f.homs(p)) {
      std::size_t q = ctx->image_id(phi);
      if (!flags[q].fully_centralized) continue;
      ++checked_maps;
      std::size_t n = n_phi(f, phi);
      bool extends = false;
      for (auto const& psi : f.homs(n))
        if (ctx->restrict(psi, p) == phi) {
          extends = true;
          break;
        }
      if (!extends)
        return fail(name, Json{{"axiom", "II"},
                               {"subgroup", ctx->describe(p)},
                               {"phi", ctx->describe(phi)},
                               {"n_phi", ctx->describe(n)},
                               {"n_phi_order", ctx->sub(n).order()},
                               {"reason", "phi has no extension to N_phi"}});
    }
  }
  return pass(name, Json{{"subgroups_checked", checked_subgroups},
                         {"morphisms_checked", checked_maps}});
}

// ---------------------------------------------------------------- normalizers and cores

FusionSystem normalizer_system(FusionSystem const& f, std::size_t p) {
  auto const& ctx = f.ctx();
  std::size_t const base = ctx->id_of(f.normalizer_set(p));
  auto const& pm = ctx->sub(p).members;
  std::vector<std::vector<Map>> homs(ctx->count());
  for (std::size_t q = 0; q < ctx->count(); ++q) {
    if (!ctx->le(q, base)) continue;
    std::size_t pq = ctx->join_id(p, q);
    for (auto const& hat : f.homs(pq)) {
      ElementSet img(ctx->order());
      pm.for_each([&](Elem x) { img.insert(hat[x]); });
      if (img == pm) homs[q].push_back(ctx->restrict(hat, q));
    }
  }
  return FusionSystem(ctx, base, std::move(homs));
}

std::size_t op_core(FusionSystem const& f) {
  auto const& ctx = f.ctx();
  std::size_t core = 0;
  for (std::size_t p : f.objects()) {
    if (!(f.normalizer_set(p) == f.base_group().members)) continue;
    if (normalizer_system(f, p) == f) core = ctx->join_id(core, p);
  }
  return core;
}

bool is_constrained(FusionSystem const& f) { return basic_flags(f, op_core(f)).centric; }

Verdict is_normal_subsystem(FusionSystem const& e, FusionSystem const& f) {
  if (!is_subsystem(e, f)) throw NotSubsystem("E is not a subsystem of F");
  auto const& ctx = f.ctx();
  for (std::size_t p : f.objects()) {
    auto const& pm = ctx->sub(p).members;
    for (auto const& phi : f.homs(p)) {
      Map const inv = ctx->invert(phi);
      for (std::size_t q : e.objects()) {
        if (!ctx->le(q, p)) continue;
        Map const back = ctx->restrict(inv, ctx->id_of(ctx->image_set(ctx->restrict(phi, q))));
        for (auto const& psi : e.homs(q)) {
          if (!ctx->image_set(psi).is_subset_of(pm)) continue;
          Map conj = ctx->compose(phi, ctx->compose(psi, back));
          if (!e.contains(conj))
            return fail("normal_subsystem", Json{{"phi", ctx->describe(phi)},
                                                 {"psi", ctx->describe(psi)},
                                                 {"conjugated", ctx->describe(conj)}});
        }
      }
    }
  }
  return pass("normal_subsystem");
}

OpprimeResult opprime_subsystem(FusionSystem const& f, OpprimeRoute route) {
  if (!is_saturated(f).holds) throw NotSaturated("O^{p'}(F) needs a saturated system");
  auto const& ctx = f.ctx();
  if (route == OpprimeRoute::Auto && f.provenance && f.base() == ctx->whole_id() &&
      is_constrained(f) && is_pprime_reduced_pconstrained(f.provenance->group, ctx->p())) {
    Subgroup o = residual_pprime(f.provenance->group, ctx->p());
    return OpprimeResult{fusion_of_group(ctx, o), true, "model"};
  }
  std::vector<Map> maps;
  for (std::size_t p : f.objects()) {
    AutGroup a = automorphism_group(f, p);
    Subgroup r = residual_pprime(whole(a.group), ctx->p());
    for (Elem x : r.gens) maps.push_back(a.maps[x]);
  }
  FusionSystem g = generate_from_maps(ctx, f.base(), maps);
  bool verified = is_saturated(g).holds;
  return OpprimeResult{std::move(g), verified, "generated"};
}

Verdict frattini_check(FusionSystem const& f) {
  if (!is_saturated(f).holds) throw NotSaturated("Frattini check needs a saturated system");
  auto const& ctx = f.ctx();
  OpprimeResult o = opprime_subsystem(f);
  FusionSystem n = normalizer_system(f, f.base());
  std::vector<Map> maps;
  for (auto const* part : {&o.system, &n})
    for (std::size_t id : part->objects())
      for (auto const& m : part->homs(id)) maps.push_back(m);
  FusionSystem g = generate_from_maps(ctx, f.base(), maps);
  Json w{{"opprime_route", o.route},
         {"opprime_morphisms", o.system.morphism_count()},
         {"normalizer_morphisms", n.morphism_count()},
         {"generated_morphisms", g.morphism_count()},
         {"system_morphisms", f.morphism_count()}};
  return g == f ? pass("frattini", w) : fail("frattini", w);
}

// ---------------------------------------------------------------- Alperin

std::vector<AlperinFactor> alperin_decompose(FusionSystem const& f, Map const& phi,
                                             Limits const& limits) {
  if (!is_saturated(f).holds) throw NotSaturated("Alperin factorization needs a saturated system");
  auto const& ctx = f.ctx();
  if (!f.contains(phi)) throw InvalidArgument("morphism is not in the fusion system");
  std::size_t const p = ctx->source_id(phi);
  std::size_t const base = f.base();
  Map const start = ctx->inclusion(p);
  if (phi == start) return {AlperinFactor{base, ctx->inclusion(base), p}};

  struct Gen {
    std::size_t subgroup;
    Map aut;
  };
  std::vector<Gen> gens;
  for (auto const& a : f.aut(base)) gens.push_back({base, a});
  for (std::size_t e : essential_subgroups(f))
    if (basic_flags(f, e).fully_normalized)
      for (auto const& a : f.aut(e)) gens.push_back({e, a});

  std::vector<Map> states{start};
  std::vector<std::pair<std::size_t, std::size_t>> parent{{0, 0}};
  std::map<Map, std::size_t> seen{{start, 0}};
  for (std::size_t head = 0; head < states.size(); ++head) {
    Map const cur = states[head];
    auto const img = ctx->image_set(cur);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      if (!img.is_subset_of(ctx->sub(gens[gi].subgroup).members)) continue;
      Map next = ctx->compose(gens[gi].aut, cur);
      if (seen.count(next)) continue;
      seen.emplace(next, states.size());
      states.push_back(next);
      parent.emplace_back(head, gi);
      if (states.size() > limits.alperin_states)
        throw SearchExhausted("Alperin search passed " + std::to_string(limits.alperin_states) +
                              " states");
      if (next == phi) {
        std::vector<AlperinFactor> out;
        for (std::size_t s = states.size() - 1; s != 0; s = parent[s].first) {
          auto const& [prev, g] = parent[s];
          out.push_back({gens[g].subgroup, gens[g].aut, ctx->image_id(states[prev])});
        }
        std::reverse(out.begin(), out.end());
        return out;
      }
    }
  }
  throw SearchExhausted("no factorization through S and essential subgroups");
}

Map recompose(ContextPtr const& ctx, std::size_t source, std::vector<AlperinFactor> const& factors) {
  Map m = ctx->inclusion(source);
  for (auto const& fac : factors) {
    if (ctx->image_id(m) != fac.restricted_to) throw InvalidArgument("factor chain does not match");
    m = ctx->compose(ctx->restrict(fac.aut, fac.restricted_to), m);
  }
  return m;
}

// ---------------------------------------------------------------- realizations

std::optional<Subgroup> realizing_overgroup(FusionSystem const& e, Subgroup const& g,
                                            Limits const& limits) {
  auto const& ctx = e.ctx();
  std::vector<Perm> gens;
  for (Elem x : ctx->sub(ctx->whole_id()).gens) gens.push_back(ctx->perm(x));
  Subgroup s = generate(g.ambient, std::span<Perm const>(gens));
  for (auto const& h : overgroups(g, s, limits))
    if (fusion_of_group(ctx, h) == e) return h;
  return std::nullopt;
}

Verdict constrained_core_centric_check(FusionSystem const& f, std::size_t p) {
  auto const& ctx = f.ctx();
  if (!is_saturated(f).holds) throw PreconditionFailed("F is not saturated");
  if (!basic_flags(f, p).fully_normalized) throw PreconditionFailed("P is not fully normalized");
  FusionSystem n = normalizer_system(f, p);
  if (!is_constrained(n)) throw PreconditionFailed("N_F(P) is not constrained");
  std::size_t q = op_core(n);
  Json w{{"subgroup", ctx->describe(p)}, {"core", ctx->describe(q)}, {"core_order", ctx->sub(q).order()}};
  return basic_flags(f, q).centric ? pass("core_centric", w) : fail("core_centric", w);
}

}  // namespace parafusion
