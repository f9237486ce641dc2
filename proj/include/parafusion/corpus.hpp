#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parafusion/pipeline.hpp"

namespace parafusion {

/// A built-in group, optionally with a parabolic system on pinned subgroups.
struct CorpusEntry {
  std::string name;
  std::string builder;  // recipe, e.g. "alternating(7)"
  std::size_t degree = 1;
  std::vector<std::string> generators;
  std::size_t order = 1;  // expected |G|
  std::size_t prime = 2;
  /// Named subgroups as comma-separated generator lists.
  std::vector<std::pair<std::string, std::string>> pinned;
  std::string borel;  // pinned name; empty if the entry has no parabolic system
  std::vector<std::string> parabolics;
  std::size_t chambers = 0;  // expected |G:B|
  std::vector<std::string> diagram;  // expected spherical types; empty when a bond is unclassified

  bool has_system() const { return !borel.empty(); }
};

std::vector<CorpusEntry> const& corpus();
/// nullptr for unknown names.
CorpusEntry const* find_corpus(std::string_view name);

GroupPtr build_group(CorpusEntry const& e);
/// A pinned name of the entry, or a generator list. Throws NotSubgroupChain.
Subgroup resolve_subgroup(CorpusEntry const* e, GroupPtr const& g, std::string_view text);
/// The entry's parabolic system. Throws InvalidArgument without one.
ParabolicSystemInput corpus_system(CorpusEntry const& e);

/// Group order, pinned subgroup containment, chamber count and diagram; the
/// A7 entries also check the pinned X_i against the canonical S4-overgroup order.
Verdict self_test(CorpusEntry const& e);

}  // namespace parafusion
