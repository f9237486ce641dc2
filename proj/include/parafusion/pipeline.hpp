#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parafusion/chamber.hpp"
#include "parafusion/fusion.hpp"
#include "parafusion/isomorphism.hpp"

namespace parafusion {

/// A finite group G with a Borel subgroup B, parabolics G_i and a prime p.
struct ParabolicSystemInput {
  Subgroup group;
  Subgroup borel;
  std::vector<Subgroup> parabolics;
  std::size_t p = 0;
  Subgroup sylow;  // a Sylow p-subgroup of B

  /// Validates B <= G_i <= G (NotSubgroupChain) and picks S = sylow(B, p).
  static ParabolicSystemInput make(Subgroup group, Subgroup borel, std::vector<Subgroup> parabolics,
                                   std::size_t p);
  /// G_J = <G_j : j in J>, or B for empty J.
  Subgroup join_of(std::vector<std::size_t> const& j) const;
};

/// Ordered named verdicts plus derived objects.
struct FamilyReport {
  std::vector<Verdict> axioms;
  Json derived = Json::object();

  void add(Verdict v) { axioms.push_back(std::move(v)); }
  bool all_hold() const;
  Verdict const* find(std::string const& name) const;
  /// [{axiom, holds, witness}, ...]
  Json to_json() const;
};

/// Generation with minimality, pairwise intersections, B != G_i, core-freeness.
FamilyReport check_parabolic_system(ParabolicSystemInput const& in, Limits const& limits = default_limits());

/// Per-member saturation, constraint and essential rank one, then the four family axioms.
FamilyReport check_parabolic_family(FusionSystem const& f, std::vector<FusionSystem> const& members);

/**
 * Connected fixed points for every p-subgroup P <= S (up to G-conjugacy),
 * transitivity of Aut_G(P) on C^P / C_G(P) for centric fully normalized P,
 * connectivity of (C^P / C_G(P))^R, centric essentials of each F_S(G_i), and
 * an independent saturation check of F_S(G).
 */
FamilyReport saturation_criterion_check(ParabolicSystemInput const& in,
                                        Limits const& limits = default_limits());

/// F = F_S(G) with members F_S(G_i): the family axioms, O_p(F) = 1 and the fixed-point hypotheses.
FamilyReport family_criterion_check(ParabolicSystemInput const& in, Limits const& limits = default_limits());

/// One step c_{h^-1}: source -> target with h in G_parabolic.
struct FactorStep {
  Elem h;
  std::size_t parabolic;
  Subgroup source;
  Subgroup target;
};
/// Factors c_g: P -> gPg^-1 along a gallery in C^P from B to g^-1 B.
/// The product h_1 ... h_n equals g^-1. Throws DisconnectedFixedPoints.
std::vector<FactorStep> factor_morphism(ParabolicSystemInput const& in, ChamberSystem const& c, Subgroup const& p,
                                        Elem g);
std::vector<FactorStep> factor_morphism(ParabolicSystemInput const& in, Subgroup const& p, Elem g);

/// Realizers of a family: B, the G_i and the G_ij, all containing S.
struct DiagramRealizers {
  Subgroup sylow;
  std::size_t p = 0;
  Subgroup borel;
  std::vector<Subgroup> parabolics;
  std::map<std::pair<std::size_t, std::size_t>, Subgroup> pairs;
};
struct DiagramOfGroups {
  std::vector<GroupMap> psi;                                       // B -> G_i
  std::map<std::pair<std::size_t, std::size_t>, GroupMap> psi_pair;  // G_i -> G_ij, keyed (i, j)
  FamilyReport report;
};
/// Builds identity-on-S embeddings B -> G_i -> G_ij and checks that all squares commute.
DiagramOfGroups build_diagram_of_groups(FusionSystem const& f, std::vector<FusionSystem> const& members,
                                        DiagramRealizers const& r, Limits const& limits = default_limits());

struct HatReduction {
  Subgroup hat_group;                    // G^ = <H_i>
  Subgroup hat_borel;                    // B^ = <N_{G^_i}(S)>
  std::vector<Subgroup> residuals;       // G^_i = O^{p'}(G_i)
  std::vector<Subgroup> hat_parabolics;  // H_i = G^_i B^
  std::map<std::pair<std::size_t, std::size_t>, Subgroup> hat_pairs;  // H_ij = <G^_i, G^_j> B^
  ChamberSystem hat_chambers;
  ChamberSystem chambers;
  CSMorphism phi;  // g B^ -> g B
  FamilyReport report;
};
/// Passes to O^{p'}-parabolics. Throws HypothesisFailed unless the input is a parabolic system.
HatReduction hat_reduction(ParabolicSystemInput const& in, Limits const& limits = default_limits());

/// Rank-one and rank-two Lie type identification, the diagram and its sphericity.
FamilyReport classical_family_check(ParabolicSystemInput const& in, Limits const& limits = default_limits());

}  // namespace parafusion
