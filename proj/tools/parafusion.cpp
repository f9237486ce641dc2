#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <set>

#include "parafusion/corpus.hpp"
#include "parafusion/errors.hpp"
#include "parafusion/io.hpp"
#include "parafusion/lattice.hpp"
#include "parafusion/pipeline.hpp"

using namespace parafusion;

namespace {

struct Input {
  CorpusEntry const* entry = nullptr;
  GroupPtr group;
};

Input load(std::string const& source) {
  if (source.rfind("corpus:", 0) == 0) {
    auto const* e = find_corpus(source.substr(7));
    if (!e) throw ParseError("unknown corpus entry " + source.substr(7));
    return {e, build_group(*e)};
  }
  return {nullptr, load_group_file(source)};
}

std::size_t prime_of(Input const& in, std::size_t flag) {
  if (flag) return flag;
  return in.entry ? in.entry->prime : 2;
}

Json gens(Subgroup const& h) { return Json(generator_strings(h)); }

/// Short isomorphism-type label for small groups; "order n" otherwise.
std::string label(Subgroup const& h) {
  auto const& g = *h.ambient;
  std::size_t const n = h.order();
  if (n == 1) return "1";
  std::size_t max_order = 0, involutions = 0;
  bool abelian = center(h).order() == n;
  std::set<std::size_t> orders;
  h.members.for_each([&](Elem x) {
    max_order = std::max(max_order, g.element_order(x));
    involutions += g.element_order(x) == 2;
    orders.insert(g.element_order(x));
  });
  if (max_order == n) return "C" + std::to_string(n);
  if (abelian && orders.size() == 2) {
    std::size_t p = *orders.rbegin(), k = 0;
    for (std::size_t m = n; m > 1; m /= p) ++k;
    if (p == 2 && k == 2) return "V4";
    return "C" + std::to_string(p) + "^" + std::to_string(k);
  }
  if (n == 8 && !abelian) return involutions == 5 ? "D8" : "Q8";
  if (n == 6 && !abelian) return "S3";
  return "order " + std::to_string(n);
}

Json subgroup_json(Subgroup const& h) {
  return Json{{"order", h.order()}, {"structure", label(h)}, {"generators", gens(h)}};
}

struct Outcome {
  Json report;
  bool ok = true;
  std::vector<std::string> lines;
};

void print_verdicts(Outcome& out, std::vector<Verdict> const& vs) {
  for (auto const& v : vs)
    out.lines.push_back((v.holds ? "PASS " : "FAIL ") + v.property +
                        (v.witness.empty() ? "" : "  " + v.witness.dump()));
}

// ---------------------------------------------------------------- analyze

Outcome analyze(Input const& in, std::size_t p) {
  Outcome out;
  auto g = whole(in.group);
  out.report = Json{{"order", g.order()}, {"degree", in.group->degree()}, {"prime", p}};
  out.lines.push_back("order: " + std::to_string(g.order()));
  if (g.order() == 1) return out;
  auto s = sylow(g, p);
  auto op = core_p(g, p);
  auto res = residual_pprime(g, p);
  bool model = is_pprime_reduced_pconstrained(g, p);
  out.report["sylow"] = subgroup_json(s);
  out.report["O_p"] = subgroup_json(op);
  out.report["O^p'"] = subgroup_json(res);
  out.report["pprime_reduced_pconstrained"] = model;
  out.lines.push_back("Sylow " + std::to_string(p) + "-subgroup: " + label(s) + ", order " + std::to_string(s.order()));
  out.lines.push_back("O_" + std::to_string(p) + ": " + label(op) + ", order " + std::to_string(op.order()));
  out.lines.push_back("O^" + std::to_string(p) + "': order " + std::to_string(res.order()));
  out.lines.push_back(std::string("p'-reduced p-constrained: ") + (model ? "yes" : "no"));
  return out;
}

// ---------------------------------------------------------------- fusion

Outcome fusion(Input const& in, std::size_t p, std::string const& sylow_arg, std::string const& check) {
  Outcome out;
  auto g = whole(in.group);
  Subgroup s = sylow_arg == "auto" ? sylow(g, p) : resolve_subgroup(in.entry, in.group, sylow_arg);
  if (!is_sylow(g, s, p)) throw NotSylow("the given subgroup is not a Sylow " + std::to_string(p) + "-subgroup");
  auto ctx = PGroupContext::make(s, p);
  auto f = fusion_of_group(ctx, g);
  out.report = Json{{"check", check}, {"sylow", subgroup_json(s)}};

  if (check == "saturation") {
    auto v = is_saturated(f);
    out.ok = v.holds;
    out.report["verdict"] = v.to_json();
    out.lines.push_back(std::string("saturation: ") + (v.holds ? "holds" : "fails"));
    if (!v.holds) out.lines.push_back("witness: " + v.witness.dump());
  } else if (check == "classify") {
    Json classes = Json::array();
    std::set<std::size_t> seen;
    std::size_t essential = 0;
    for (std::size_t id : f.objects()) {
      auto conj = f.conjugates(id);
      if (!seen.insert(conj.front()).second) continue;
      auto rep = conj.front();
      auto flags = classify(f, rep);
      essential += flags.essential;
      classes.push_back(Json{{"representative", ctx->describe(rep)},
                             {"order", ctx->sub(rep).order()},
                             {"class_size", conj.size()},
                             {"fully_normalized", flags.fully_normalized},
                             {"fully_centralized", flags.fully_centralized},
                             {"centric", flags.centric},
                             {"radical", flags.radical},
                             {"essential", flags.essential}});
    }
    out.report["classes"] = classes;
    out.report["essential_classes"] = essential;
    out.lines.push_back("subgroup classes: " + std::to_string(classes.size()));
    out.lines.push_back("essential classes: " + std::to_string(essential));
  } else if (check == "frattini") {
    auto v = frattini_check(f);
    out.ok = v.holds;
    out.report["verdict"] = v.to_json();
    out.lines.push_back(std::string("frattini: ") + (v.holds ? "holds" : "fails"));
  } else if (check == "opprime") {
    auto r = opprime_subsystem(f);
    auto res = residual_pprime(g, p);
    bool matches = r.system == fusion_of_group(ctx, res);
    out.ok = matches;
    out.report["route"] = r.route;
    out.report["minimality_verified"] = r.minimality_verified;
    out.report["morphisms"] = r.system.morphism_count();
    out.report["matches_group_residual"] = matches;
    out.lines.push_back("O^p'(F): " + std::to_string(r.system.morphism_count()) + " morphisms via " + r.route);
    out.lines.push_back(std::string("equals F_S(O^p'(G)): ") + (matches ? "yes" : "no"));
  } else {
    throw InvalidArgument("unknown check " + check);
  }
  return out;
}

// ---------------------------------------------------------------- chamber systems

ParabolicSystemInput system_input(Input const& in, std::string const& borel, std::vector<std::string> parabolics,
                                  std::size_t p) {
  std::string b = borel;
  if (b.empty() && in.entry && in.entry->has_system()) b = in.entry->borel;
  if (parabolics.empty() && in.entry) parabolics = in.entry->parabolics;
  if (b.empty() || parabolics.empty()) throw InvalidArgument("--borel and --parabolic are required");
  std::vector<Subgroup> ps;
  for (auto const& x : parabolics) ps.push_back(resolve_subgroup(in.entry, in.group, x));
  return ParabolicSystemInput::make(whole(in.group), resolve_subgroup(in.entry, in.group, b), std::move(ps), p);
}

Outcome chamber(ParabolicSystemInput const& sys, std::string const& check) {
  Outcome out;
  auto c = from_parabolic(sys.group, sys.borel, sys.parabolics);
  out.report = Json{{"check", check}, {"chambers", c.count()}, {"rank", c.rank()}};
  if (check == "connectivity") {
    auto comps = connected_components(c);
    out.ok = c.connected();
    out.report["connected"] = out.ok;
    out.report["components"] = comps.size();
    out.lines.push_back((out.ok ? "connected, " : "disconnected, ") + std::to_string(c.count()) + " chambers");
  } else if (check == "fixed-points") {
    Json rows = Json::array();
    for (auto const& p : subgroup_class_reps(sys.group, sys.sylow)) {
      auto fp = fixed_points(c, p);
      auto comps = connected_components(fp.system).size();
      bool connected = fp.system.connected();
      out.ok = out.ok && connected;
      rows.push_back(Json{{"subgroup", gens(p)}, {"order", p.order()}, {"fixed_chambers", fp.system.count()},
                          {"components", comps}, {"connected", connected}});
      out.lines.push_back((connected ? "PASS " : "FAIL ") + label(p) + " " + gens(p).dump() + ": " +
                          std::to_string(fp.system.count()) + " chambers, " + std::to_string(comps) + " components");
    }
    out.report["subgroups"] = rows;
  } else if (check == "diagram") {
    auto d = diagram(c, false, sys.p);
    out.ok = d.diagram.spherical();
    out.report["diagram"] = d.diagram.to_json();
    out.report["render"] = d.diagram.render();
    out.report["residues"] = d.residues;
    for (auto const& row : d.diagram.m) {
      std::string line;
      for (std::size_t m : row) line += (m == CoxeterDiagram::kInfinity ? "inf" : std::to_string(m)) + " ";
      out.lines.push_back(line.substr(0, line.size() - 1));
    }
    out.lines.push_back(d.diagram.render());
    auto types = d.diagram.spherical_types();
    std::string joined;
    if (types)
      for (auto const& t : *types) joined += (joined.empty() ? "" : " + ") + t;
    out.lines.push_back(types ? "spherical: " + joined : "spherical: no");
  } else if (check == "covering") {
    auto h = hat_reduction(sys);
    auto v = is_2_covering(h.phi);
    out.ok = v.holds;
    out.report["verdict"] = v.to_json();
    out.report["hat_chambers"] = h.hat_chambers.count();
    out.report["hat_group_order"] = h.hat_group.order();
    if (h.hat_chambers.connected()) out.report["deck_group_order"] = deck_group(h.phi).size();
    out.lines.push_back(std::string("2-covering: ") + (v.holds ? "yes" : "no") + ", " +
                        std::to_string(h.hat_chambers.count()) + " -> " + std::to_string(c.count()) + " chambers");
  } else {
    throw InvalidArgument("unknown check " + check);
  }
  return out;
}

// ---------------------------------------------------------------- pipelines

std::string theorem_name(std::string const& t) {
  static std::map<std::string, std::string> const aliases{{"saturation", "saturation"}, {"4.9", "saturation"},
                                                          {"family", "family"},         {"5.10", "family"},
                                                          {"hat", "hat"},               {"6.10", "hat"},
                                                          {"classical", "classical"},   {"7.5", "classical"}};
  auto it = aliases.find(t);
  if (it == aliases.end()) throw InvalidArgument("unknown theorem " + t);
  return it->second;
}

Outcome pipeline(ParabolicSystemInput const& sys, std::string const& theorem) {
  Outcome out;
  std::string name = theorem_name(theorem);
  FamilyReport rep;
  if (name == "saturation") rep = saturation_criterion_check(sys);
  if (name == "family") rep = family_criterion_check(sys);
  if (name == "hat") rep = hat_reduction(sys).report;
  if (name == "classical") rep = classical_family_check(sys);
  out.ok = rep.all_hold();
  out.report = Json{{"pipeline", name}, {"holds", out.ok}, {"axioms", rep.to_json()}, {"derived", rep.derived}};
  print_verdicts(out, rep.axioms);
  for (auto const& [k, v] : rep.derived.items()) out.lines.push_back(k + ": " + v.dump());
  out.lines.push_back(out.ok ? "all checks hold" : "some checks fail");
  return out;
}

// ---------------------------------------------------------------- corpus

Outcome corpus_list() {
  Outcome out;
  out.report = Json::array();
  for (auto const& e : corpus()) {
    Json row{{"name", e.name}, {"builder", e.builder}, {"order", e.order}};
    std::string line = e.name + "  " + e.builder + "  order " + std::to_string(e.order);
    if (e.has_system()) {
      row["prime"] = e.prime;
      row["borel"] = e.borel;
      row["parabolics"] = e.parabolics;
      row["chambers"] = e.chambers;
      line += "  p=" + std::to_string(e.prime) + " chambers " + std::to_string(e.chambers);
    }
    Json pinned = Json::object();
    for (auto const& [k, v] : e.pinned) pinned[k] = v;
    if (!pinned.empty()) row["pinned"] = pinned;
    out.report.push_back(row);
    out.lines.push_back(line);
  }
  return out;
}

Outcome corpus_self_test() {
  Outcome out;
  out.report = Json::array();
  for (auto const& e : corpus()) {
    auto v = self_test(e);
    out.ok = out.ok && v.holds;
    out.report.push_back(v.to_json());
    out.lines.push_back((v.holds ? "PASS " : "FAIL ") + e.name + "  " + v.witness.dump());
  }
  return out;
}

int emit(Outcome const& out, bool json) {
  if (json)
    std::cout << out.report.dump(2) << "\n";
  else
    for (auto const& l : out.lines) std::cout << l << "\n";
  return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fusion systems, parabolic systems and chamber systems of finite groups"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Emit a JSON report");

  std::string input, sylow_arg = "auto", check, borel, theorem, action;
  std::size_t prime = 0;
  std::vector<std::string> parabolics;

  auto* an = app.add_subcommand("analyze", "Order, Sylow subgroup, O_p and O^p'");
  an->add_option("input", input, "Group file or corpus:NAME")->required();
  an->add_option("--prime,-p", prime, "Prime");

  auto* fu = app.add_subcommand("fusion", "Checks on the fusion system F_S(G)");
  fu->add_option("input", input, "Group file or corpus:NAME")->required();
  fu->add_option("--prime,-p", prime, "Prime");
  fu->add_option("--sylow", sylow_arg, "auto, a pinned name or generators");
  fu->add_option("--check", check, "Check to run")
      ->required()
      ->check(CLI::IsMember({"saturation", "classify", "frattini", "opprime"}));

  auto* ch = app.add_subcommand("chamber", "Checks on the coset chamber system");
  ch->add_option("input", input, "Group file or corpus:NAME")->required();
  ch->add_option("--prime,-p", prime, "Prime");
  ch->add_option("--borel", borel, "Borel subgroup: pinned name or generators");
  ch->add_option("--parabolic", parabolics, "Parabolic subgroups, in order")->take_all();
  ch->add_option("--check", check, "Check to run")
      ->required()
      ->check(CLI::IsMember({"connectivity", "fixed-points", "diagram", "covering"}));

  auto* pi = app.add_subcommand("pipeline", "Hypotheses and conclusions of a criterion");
  pi->add_option("input", input, "Group file or corpus:NAME")->required();
  pi->add_option("--prime,-p", prime, "Prime");
  pi->add_option("--borel", borel, "Borel subgroup: pinned name or generators");
  pi->add_option("--parabolic", parabolics, "Parabolic subgroups, in order")->take_all();
  pi->add_option("--theorem", theorem, "saturation, family, hat or classical")
      ->required();

  auto* co = app.add_subcommand("corpus", "Built-in examples");
  co->add_option("action", action, "list or self-test")->required()->check(CLI::IsMember({"list", "self-test"}));

  for (auto* sub : {an, fu, ch, pi, co}) sub->add_flag("--json", json, "Emit a JSON report");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*co) return emit(action == "list" ? corpus_list() : corpus_self_test(), json);
    Input in = load(input);
    std::size_t const p = prime_of(in, prime);
    if (!is_prime(p)) throw InvalidArgument("--prime must be prime");
    if (*an) return emit(analyze(in, p), json);
    if (*fu) return emit(fusion(in, p, sylow_arg, check), json);
    auto sys = system_input(in, borel, parabolics, p);
    if (*ch) return emit(chamber(sys, check), json);
    return emit(pipeline(sys, theorem), json);
  } catch (ParseError const& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (InvalidArgument const& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (CapExceeded const& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (NotSylow const& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (NotSubgroupChain const& e) {
    std::cerr << e.what() << "\n";
    return 5;
  } catch (std::exception const& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
