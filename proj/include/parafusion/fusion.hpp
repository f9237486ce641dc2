#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "parafusion/lattice.hpp"
#include "parafusion/verdict.hpp"

namespace parafusion {

/// Images of the elements of S under a morphism; kOff outside its source.
using Map = std::vector<std::uint8_t>;
inline constexpr std::uint8_t kOff = 0xFF;

/**
 * A finite p-group S as a standalone enumerated group together with its
 * subgroup lattice. Subgroups are referred to by their lattice index (id).
 * Every fusion system over S, or over a subgroup of S, shares one context.
 */
class PGroupContext {
 public:
  static std::shared_ptr<PGroupContext const> make(Subgroup const& s, std::size_t p,
                                                   Limits const& limits = default_limits());

  GroupPtr const& group() const { return group_; }
  std::size_t p() const { return p_; }
  std::size_t order() const { return group_->order(); }
  Lattice const& lattice() const { return lattice_; }
  std::size_t count() const { return lattice_.size(); }
  Subgroup const& sub(std::size_t id) const { return lattice_.subgroups[id]; }
  std::size_t whole_id() const { return lattice_.size() - 1; }
  std::size_t id_of(ElementSet const& members) const;
  bool le(std::size_t a, std::size_t b) const {
    return sub(a).members.is_subset_of(sub(b).members);
  }
  /// N_S(P) and C_S(P) as element sets of S.
  ElementSet const& normalizer_set(std::size_t id) const { return normalizers_[id]; }
  ElementSet const& centralizer_set(std::size_t id) const { return centralizers_[id]; }
  std::size_t join_id(std::size_t a, std::size_t b) const;

  Map inclusion(std::size_t id) const;
  /// c_s restricted to subgroup id.
  Map conjugation(Elem s, std::size_t id) const;
  Map restrict(Map const& f, std::size_t id) const;
  /// g o f; the image of f must lie in the source of g.
  Map compose(Map const& g, Map const& f) const;
  Map invert(Map const& f) const;
  ElementSet source_set(Map const& f) const;
  ElementSet image_set(Map const& f) const;
  std::size_t source_id(Map const& f) const { return id_of(source_set(f)); }
  std::size_t image_id(Map const& f) const { return id_of(image_set(f)); }
  bool is_injective_hom(Map const& f) const;

  /// Element of the ambient permutation group for a local element.
  Perm const& perm(Elem local) const { return group_->perm(local); }
  /// Local subgroup id of an ambient subgroup contained in S.
  std::size_t id_of_ambient(Subgroup const& h) const;

  Json describe(std::size_t id) const;
  Json describe(Map const& f) const;

 private:
  GroupPtr group_;
  std::size_t p_ = 0;
  Lattice lattice_;
  std::vector<ElementSet> normalizers_;
  std::vector<ElementSet> centralizers_;
};

using ContextPtr = std::shared_ptr<PGroupContext const>;

/// Where a system came from: F_S(G) for an ambient subgroup G containing S.
struct Provenance {
  Subgroup group;
  std::vector<Elem> to_ambient;  // local element of S -> element of G's ambient
};

/**
 * A fusion system stored extensionally: for every subgroup P of the base
 * p-group, the full set Hom_F(P, base), sorted. Hom_F(P, Q) is the subset
 * with image inside Q.
 */
class FusionSystem {
 public:
  FusionSystem(ContextPtr ctx, std::size_t base, std::vector<std::vector<Map>> homs);

  ContextPtr const& ctx() const { return ctx_; }
  std::size_t base() const { return base_; }
  Subgroup const& base_group() const { return ctx_->sub(base_); }
  /// Subgroup ids of the base, ascending.
  std::vector<std::size_t> const& objects() const { return objects_; }

  std::vector<Map> const& homs(std::size_t p) const { return homs_[p]; }
  std::vector<Map> hom(std::size_t p, std::size_t q) const;
  std::vector<Map> aut(std::size_t p) const { return hom(p, p); }
  bool contains(Map const& f) const;
  std::size_t morphism_count() const;
  /// Ids of F-conjugates of P, ascending.
  std::vector<std::size_t> conjugates(std::size_t p) const;
  /// N_base(P), C_base(P) as element sets.
  ElementSet normalizer_set(std::size_t p) const;
  ElementSet centralizer_set(std::size_t p) const;

  std::optional<Provenance> provenance;

  friend bool operator==(FusionSystem const& a, FusionSystem const& b) {
    return a.ctx_ == b.ctx_ && a.base_ == b.base_ && a.homs_ == b.homs_;
  }

  Json to_json() const;

 private:
  ContextPtr ctx_;
  std::size_t base_;
  std::vector<std::size_t> objects_;
  std::vector<std::vector<Map>> homs_;
};

/// F_S(G). Throws NotSylow unless S is a Sylow p-subgroup of G.
FusionSystem fusion_of_group(ContextPtr const& ctx, Subgroup const& g);
FusionSystem fusion_of_group(Subgroup const& g, Subgroup const& s, std::size_t p,
                             Limits const& limits = default_limits());
/// F_Q(Q) for a subgroup Q of S.
FusionSystem inner_system(ContextPtr const& ctx, std::size_t base);

/// Smallest fusion system over `base` containing Hom_base and the given maps.
FusionSystem generate_from_maps(ContextPtr const& ctx, std::size_t base,
                                std::vector<Map> const& maps);
/// Smallest fusion system over S containing every part.
FusionSystem generate(std::vector<FusionSystem> const& parts);
FusionSystem intersect(FusionSystem const& a, FusionSystem const& b);
bool is_subsystem(FusionSystem const& a, FusionSystem const& b);

/// Aut_F(P) as a permutation group on the elements of P, with Inn(P) and Aut_S(P).
struct AutGroup {
  GroupPtr group;
  std::vector<Map> maps;            // maps[i] realizes group element i
  Subgroup inner;                   // Inn(P)
  Subgroup from_base;               // Aut_base(P)
  Elem element_of(Map const& f) const;
};
AutGroup automorphism_group(FusionSystem const& f, std::size_t p);
/// Out_F(P) = Aut_F(P) / Inn(P) as a permutation group.
GroupPtr outer_automorphism_group(FusionSystem const& f, std::size_t p);

struct SubgroupFlags {
  bool fully_centralized = false;
  bool fully_normalized = false;
  bool centric = false;
  bool radical = false;
  bool essential = false;
  Json witness = Json::object();
};
SubgroupFlags classify(FusionSystem const& f, std::size_t p);
/// Ids of the F-essential subgroups.
std::vector<std::size_t> essential_subgroups(FusionSystem const& f);

/// N_phi = { x in N_S(P) : phi c_x phi^-1 in Aut_S(phi(P)) }.
std::size_t n_phi(FusionSystem const& f, Map const& phi);

enum class SaturationMode { Full, CentricOnly };
Verdict is_saturated(FusionSystem const& f, SaturationMode mode = SaturationMode::Full);

FusionSystem normalizer_system(FusionSystem const& f, std::size_t p);
/// O_p(F): the join of all subgroups normal in F.
std::size_t op_core(FusionSystem const& f);
bool is_constrained(FusionSystem const& f);

Verdict is_normal_subsystem(FusionSystem const& e, FusionSystem const& f);

enum class OpprimeRoute { Auto, Generated };
struct OpprimeResult {
  FusionSystem system;
  bool minimality_verified = false;
  std::string route;
};
OpprimeResult opprime_subsystem(FusionSystem const& f, OpprimeRoute route = OpprimeRoute::Auto);
Verdict frattini_check(FusionSystem const& f);

/// One step of an Alperin factorization: the automorphism `aut` of subgroup
/// `subgroup`, restricted to `restricted_to`.
struct AlperinFactor {
  std::size_t subgroup;
  Map aut;
  std::size_t restricted_to;
};
std::vector<AlperinFactor> alperin_decompose(FusionSystem const& f, Map const& phi,
                                             Limits const& limits = default_limits());
Map recompose(ContextPtr const& ctx, std::size_t source, std::vector<AlperinFactor> const& factors);

/// An overgroup H of S in G with F_S(H) = E, scanning the interval in order.
std::optional<Subgroup> realizing_overgroup(FusionSystem const& e, Subgroup const& g,
                                            Limits const& limits = default_limits());
Verdict constrained_core_centric_check(FusionSystem const& f, std::size_t p);

}  // namespace parafusion
