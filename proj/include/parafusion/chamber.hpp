#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parafusion/limits.hpp"
#include "parafusion/presentation.hpp"
#include "parafusion/subgroup.hpp"
#include "parafusion/verdict.hpp"

namespace parafusion {

/// The coset data behind C(G; B, {G_i}): chamber c is the coset reps[c] B.
struct CosetProvenance {
  Subgroup group;
  Subgroup borel;
  std::vector<Subgroup> parabolics;
  std::vector<Elem> reps;
  /// Chamber of every element of G, indexed by ambient element; kNoChamber outside G.
  std::vector<std::uint32_t> chamber_of;
};

inline constexpr std::uint32_t kNoChamber = std::numeric_limits<std::uint32_t>::max();

/**
 * A chamber system over types 0..rank-1. For each type the chambers are
 * partitioned into panels; panels are numbered by their smallest chamber.
 */
class ChamberSystem {
 public:
  ChamberSystem() = default;
  /// panel_of[i][c] is any label for the i-panel of chamber c.
  ChamberSystem(std::size_t count, std::vector<std::vector<std::size_t>> panel_of);

  std::size_t count() const { return count_; }
  std::size_t rank() const { return panel_of_.size(); }
  std::size_t panel_of(std::size_t type, std::size_t c) const { return panel_of_[type][c]; }
  std::vector<std::vector<std::size_t>> const& panels(std::size_t type) const {
    return panels_[type];
  }
  std::vector<std::size_t> const& panel(std::size_t type, std::size_t c) const {
    return panels_[type][panel_of_[type][c]];
  }
  bool adjacent(std::size_t type, std::size_t a, std::size_t b) const {
    return panel_of_[type][a] == panel_of_[type][b];
  }
  bool connected() const;

  std::optional<CosetProvenance> provenance;

  friend bool operator==(ChamberSystem const& a, ChamberSystem const& b) {
    return a.count_ == b.count_ && a.panel_of_ == b.panel_of_;
  }

  Json to_json() const;

 private:
  std::size_t count_ = 0;
  std::vector<std::vector<std::size_t>> panel_of_;
  std::vector<std::vector<std::vector<std::size_t>>> panels_;
};

/// A sub- or quotient system together with its chambers' origin in the parent.
struct InducedSystem {
  ChamberSystem system;
  /// For subsystems: parent chamber of each chamber. For quotients: orbit of each parent chamber.
  std::vector<std::size_t> map;
};

struct Gallery {
  std::vector<std::size_t> chambers;
  std::vector<std::size_t> types;  // types[k] joins chambers[k] and chambers[k+1]
};

/// A type-preserving chamber map.
struct CSMorphism {
  ChamberSystem source;
  ChamberSystem target;
  std::vector<std::size_t> map;
};

ChamberSystem from_parabolic(Subgroup const& g, Subgroup const& b,
                             std::vector<Subgroup> const& parabolics,
                             Limits const& limits = default_limits());

/// Chamber permutation induced by left multiplication with x (coset systems only).
std::vector<std::size_t> action_of(ChamberSystem const& c, Elem x);

/// The subsystem on a set of chambers with inherited adjacency.
InducedSystem induced(ChamberSystem const& c, std::vector<std::size_t> chambers);
/// The J-residue of chamber c; types are renumbered in the order of J.
InducedSystem residue(ChamberSystem const& c, std::size_t chamber, std::vector<std::size_t> const& types);
/// Connected components, each sorted, ordered by smallest chamber.
std::vector<std::vector<std::size_t>> connected_components(ChamberSystem const& c);
std::vector<std::vector<std::size_t>> connected_components(ChamberSystem const& c,
                                                           std::vector<std::size_t> const& types);

/// C^P: chambers gB with P <= gBg^-1. Throws NoProvenance without coset data.
InducedSystem fixed_points(ChamberSystem const& c, Subgroup const& p);

/// Orbits of the group generated by the given chamber permutations.
InducedSystem quotient(ChamberSystem const& c, std::vector<std::vector<std::size_t>> const& generators);
/// Orbits of a subgroup H of the provenance group.
InducedSystem quotient(ChamberSystem const& c, Subgroup const& h);
/// Generators of H acting on a subsystem of a coset system (H must preserve it).
std::vector<std::vector<std::size_t>> induced_action(ChamberSystem const& c, InducedSystem const& sub,
                                                     Subgroup const& h);

/// Rep(P, C): Inn(B)-classes of monomorphisms P -> B, i-adjacent when equal in Rep(P, G_i).
struct RepSystem {
  ChamberSystem system;
  /// Images of P's generators for a representative of each chamber.
  std::vector<std::vector<Elem>> images;
  std::size_t inclusion = 0;
  /// Chambers in the component of the inclusion class.
  std::vector<std::size_t> marked;
};
RepSystem rep_chamber_system(Subgroup const& p, Subgroup const& b, std::vector<Subgroup> const& parabolics,
                             Limits const& limits = default_limits());
/// Whether Rep(P, C)'s components biject with G-classes of monomorphisms P -> B.
Verdict rep_component_bijection(Subgroup const& p, Subgroup const& b,
                                std::vector<Subgroup> const& parabolics, Subgroup const& g,
                                Limits const& limits = default_limits());
/// Checks that f_P(gB) = [c_{g^-1}] induces an isomorphism C^P / C_G(P) -> Rep(P, C)_0.
Verdict rep_fixed_point_isomorphism(ChamberSystem const& c, Subgroup const& p,
                                    Limits const& limits = default_limits());

bool is_morphism(CSMorphism const& f);
/// A bijective type-preserving map whose inverse is also a morphism.
bool is_isomorphism(ChamberSystem const& a, ChamberSystem const& b, std::vector<std::size_t> const& map);
/// A type-preserving isomorphism a -> b by backtracking, bounded by `budget` search nodes.
std::optional<std::vector<std::size_t>> find_isomorphism(ChamberSystem const& a, ChamberSystem const& b,
                                                         std::size_t budget = 1'000'000);

Verdict is_2_covering(CSMorphism const& f);
Gallery lift_gallery(CSMorphism const& f, Gallery const& gamma, std::size_t start);

struct LiftResult {
  std::optional<CSMorphism> lift;
  Json witness = Json::object();
};
/// Lifts g: D -> target along the covering f with g(base) = f(base_lift).
LiftResult lift_morphism(CSMorphism const& f, CSMorphism const& g, std::size_t base,
                         std::size_t base_lift);
/// Deck transformations of a covering with connected source, identity first.
std::vector<std::vector<std::size_t>> deck_group(CSMorphism const& f);

enum class Rank2Kind { Digon, MGon, Other };
struct Rank2Class {
  Rank2Kind kind = Rank2Kind::Other;
  std::size_t m = 0;
  Json witness = Json::object();
};
/// Classifies a rank-2 system; the product test applies when coset data is present.
Rank2Class classify_rank2(ChamberSystem const& c);

/// Coxeter matrix; kInfinity marks unclassified bonds.
struct CoxeterDiagram {
  static constexpr std::size_t kInfinity = 0;
  std::vector<std::vector<std::size_t>> m;

  std::size_t size() const { return m.size(); }
  /// Finite Coxeter type of each connected component, or nullopt if one is not spherical.
  std::optional<std::vector<std::string>> spherical_types() const;
  bool spherical() const { return spherical_types().has_value(); }
  std::string render() const;
  Json to_json() const;
};

struct DiagramResult {
  CoxeterDiagram diagram;
  Json residues = Json::array();
};
/// Coxeter diagram from the standard rank-2 residues through chamber 0. Strict mode
/// throws UnclassifiedResidue; otherwise such bonds get kInfinity. With a prime p
/// and coset data, each residue group G_ij / O_p(G_ij) is matched against the Lie catalog.
DiagramResult diagram(ChamberSystem const& c, bool strict = true, std::size_t p = 0);

/// Colimit of the diagram {B, G_i, G_ij = <G_i, G_j>} as a presentation on the
/// generators of each G_i, with B's generators as words for coset enumeration.
struct ColimitPresentation {
  Presentation presentation;
  std::vector<Word> borel_words;
};
ColimitPresentation colimit_presentation(Subgroup const& b, std::vector<Subgroup> const& parabolics,
                                         std::map<std::pair<std::size_t, std::size_t>, Subgroup> const& pairs);
ColimitPresentation colimit_presentation(Subgroup const& b, std::vector<Subgroup> const& parabolics);

}  // namespace parafusion
