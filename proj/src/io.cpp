#include "parafusion/io.hpp"

#include <fstream>
#include <sstream>

#include "parafusion/errors.hpp"

namespace parafusion {

GroupPtr parse_group(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (Json::parse_error const& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object() || !doc.contains("degree") || !doc.contains("generators"))
    throw ParseError("expected an object with \"degree\" and \"generators\"");
  auto const& degree = doc["degree"];
  auto const& gens = doc["generators"];
  if (!degree.is_number_unsigned() || degree.get<std::size_t>() == 0)
    throw ParseError("\"degree\" must be a positive integer");
  if (!gens.is_array()) throw ParseError("\"generators\" must be an array");
  std::size_t n = degree.get<std::size_t>();
  std::vector<Perm> perms;
  for (auto const& g : gens) {
    if (!g.is_string()) throw ParseError("generators must be cycle strings");
    perms.push_back(Perm::parse(g.get<std::string>(), n));
  }
  return Group::make(PermGroup(n, std::move(perms)));
}

GroupPtr load_group_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_group(buffer.str());
}

Subgroup parse_subgroup(GroupPtr const& g, std::string_view text) {
  std::vector<Elem> gens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto piece = text.substr(start, end - start);
    if (piece.find_first_not_of(" \t") != std::string_view::npos) {
      Perm x = Perm::parse(piece, g->degree());
      auto e = g->find(x);
      if (!e) throw NotSubgroupChain(x.to_string() + " is not an element of the group");
      gens.push_back(*e);
    }
    start = end + 1;
  }
  return generate(g, gens);
}

std::vector<std::string> generator_strings(Subgroup const& h) {
  std::vector<std::string> out;
  for (Elem x : h.gens) out.push_back(h.ambient->perm(x).to_string());
  return out;
}

Json group_json(GroupPtr const& g) {
  Json gens = Json::array();
  for (auto const& x : g->source().generators()) gens.push_back(x.to_string());
  return Json{{"degree", g->degree()}, {"generators", gens}};
}

}  // namespace parafusion
