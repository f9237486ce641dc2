#include "parafusion/isomorphism.hpp"

#include <algorithm>
#include <map>

#include "parafusion/errors.hpp"

namespace parafusion {

bool GroupMap::is_homomorphism() const {
  auto const& a = *source.ambient;
  auto const& b = *target.ambient;
  auto const xs = source.elements();
  for (Elem x : xs) {
    if (!target.contains(images[x])) return false;
    for (Elem y : source.gens)
      if (images[a.mul(x, y)] != b.mul(images[x], images[y])) return false;
  }
  return true;
}

bool GroupMap::is_injective() const {
  ElementSet seen(target.ambient->order());
  bool ok = true;
  source.members.for_each([&](Elem x) {
    if (seen.contains(images[x])) ok = false;
    seen.insert(images[x]);
  });
  return ok;
}

Subgroup GroupMap::image() const {
  std::vector<Elem> gens;
  for (Elem x : source.gens) gens.push_back(images[x]);
  return generate(target.ambient, gens);
}

std::optional<GroupMap> extend_homomorphism(Subgroup const& source, Subgroup const& target,
                                            std::vector<std::pair<Elem, Elem>> const& gen_images) {
  auto const& a = *source.ambient;
  auto const& b = *target.ambient;
  GroupMap f{source, target, std::vector<Elem>(a.order(), kNoImage)};
  for (auto const& [x, y] : gen_images) {
    if (!source.contains(x)) throw InvalidArgument("generator outside the source");
    if (!target.contains(y)) return std::nullopt;
  }
  f.images[a.identity()] = b.identity();
  std::vector<Elem> queue{a.identity()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    for (auto const& [s, t] : gen_images) {
      Elem xs = a.mul(x, s);
      Elem ys = b.mul(f.images[x], t);
      if (f.images[xs] == kNoImage) {
        f.images[xs] = ys;
        queue.push_back(xs);
      } else if (f.images[xs] != ys) {
        return std::nullopt;
      }
    }
  }
  if (queue.size() != source.order())
    throw InvalidArgument("assigned generators do not generate the source");
  return f;
}

GroupMap inverse(GroupMap const& f) {
  if (!f.is_injective()) throw InvalidArgument("map is not injective");
  Subgroup img = f.image();
  GroupMap out{img, f.source, std::vector<Elem>(f.target.ambient->order(), kNoImage)};
  f.source.members.for_each([&](Elem x) { out.images[f.images[x]] = x; });
  return out;
}

GroupMap compose(GroupMap const& g, GroupMap const& f) {
  GroupMap out{f.source, g.target, std::vector<Elem>(f.source.ambient->order(), kNoImage)};
  f.source.members.for_each([&](Elem x) {
    Elem y = f.images[x];
    if (!g.source.contains(y)) throw InvalidArgument("composition outside the domain");
    out.images[x] = g.images[y];
  });
  return out;
}

GroupMap identity_map(Subgroup const& h) {
  GroupMap out{h, h, std::vector<Elem>(h.ambient->order(), kNoImage)};
  h.members.for_each([&](Elem x) { out.images[x] = x; });
  return out;
}

namespace {

struct Invariants {
  std::vector<std::size_t> order;
  std::vector<std::size_t> centralizer;  // empty when skipped
};

Invariants element_invariants(Subgroup const& h, bool with_centralizers) {
  auto const& g = *h.ambient;
  Invariants inv;
  inv.order.assign(g.order(), 0);
  auto const xs = h.elements();
  for (Elem x : xs) inv.order[x] = g.element_order(x);
  if (with_centralizers) {
    inv.centralizer.assign(g.order(), 0);
    for (Elem x : xs) {
      std::size_t c = 0;
      for (Elem y : xs) c += g.mul(x, y) == g.mul(y, x);
      inv.centralizer[x] = c;
    }
  }
  return inv;
}

std::map<std::size_t, std::size_t> order_stats(Subgroup const& h, Invariants const& inv) {
  std::map<std::size_t, std::size_t> out;
  h.members.for_each([&](Elem x) { ++out[inv.order[x]]; });
  return out;
}

class Search {
 public:
  Search(Subgroup const& g, Subgroup const& h, bool with_centralizers)
      : g_(g), h_(h), gi_(element_invariants(g, with_centralizers)),
        hi_(element_invariants(h, with_centralizers)) {}

  bool invariants_match() const {
    if (order_stats(g_, gi_) != order_stats(h_, hi_)) return false;
    if (!gi_.centralizer.empty()) {
      std::map<std::pair<std::size_t, std::size_t>, std::size_t> a, b;
      g_.members.for_each([&](Elem x) { ++a[{gi_.order[x], gi_.centralizer[x]}]; });
      h_.members.for_each([&](Elem y) { ++b[{hi_.order[y], hi_.centralizer[y]}]; });
      if (a != b) return false;
    }
    return center(g_).order() == center(h_).order() &&
           derived_subgroup(g_).order() == derived_subgroup(h_).order();
  }

  bool compatible(Elem x, Elem y) const {
    if (gi_.order[x] != hi_.order[y]) return false;
    return gi_.centralizer.empty() || gi_.centralizer[x] == hi_.centralizer[y];
  }

  std::optional<GroupMap> run(std::vector<std::pair<Elem, Elem>> pinned) {
    assigned_ = std::move(pinned);
    for (auto const& [x, y] : assigned_)
      if (!g_.contains(x) || !h_.contains(y) || !compatible(x, y)) return std::nullopt;
    Subgroup span = generate(g_.ambient, domain());
    if (!consistent(span)) return std::nullopt;

    // extra generators: fewest compatible images first, then smallest index
    std::vector<std::pair<std::size_t, Elem>> ranked;
    auto const hs = h_.elements();
    g_.members.for_each([&](Elem x) {
      std::size_t n = 0;
      for (Elem y : hs) n += compatible(x, y);
      ranked.emplace_back(n, x);
    });
    std::sort(ranked.begin(), ranked.end());
    while (span.order() < g_.order()) {
      for (auto const& [n, x] : ranked)
        if (!span.contains(x)) {
          extra_.push_back(x);
          span = join_element(span, x);
          break;
        }
    }
    if (!extend(0)) return std::nullopt;
    auto f = extend_homomorphism(g_, h_, assigned_);
    return f;
  }

 private:
  std::vector<Elem> domain() const {
    std::vector<Elem> d;
    for (auto const& [x, y] : assigned_) d.push_back(x);
    return d;
  }

  bool consistent(Subgroup const& span) const {
    auto f = extend_homomorphism(span, h_, assigned_);
    return f && f->is_injective();
  }

  bool extend(std::size_t k) {
    if (k == extra_.size()) return true;
    Elem x = extra_[k];
    auto const hs = h_.elements();
    for (Elem y : hs) {
      if (!compatible(x, y)) continue;
      assigned_.emplace_back(x, y);
      Subgroup span = generate(g_.ambient, domain());
      if (consistent(span) && extend(k + 1)) return true;
      assigned_.pop_back();
    }
    return false;
  }

  Subgroup g_, h_;
  Invariants gi_, hi_;
  std::vector<std::pair<Elem, Elem>> assigned_;
  std::vector<Elem> extra_;
};

}  // namespace

std::optional<GroupMap> isomorphism(Subgroup const& g, Subgroup const& h,
                                    std::vector<std::pair<Elem, Elem>> const& pinned,
                                    Limits const& limits) {
  if (g.order() > limits.isomorphism || h.order() > limits.isomorphism)
    throw CapExceeded("isomorphism cap: order " + std::to_string(std::max(g.order(), h.order())));
  if (g.order() != h.order()) return std::nullopt;
  Search search(g, h, g.order() <= 3000);
  if (!search.invariants_match()) return std::nullopt;
  return search.run(pinned);
}

}  // namespace parafusion
