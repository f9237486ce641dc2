#include "parafusion/group.hpp"

#include <algorithm>
#include <unordered_set>

#include "parafusion/errors.hpp"

namespace parafusion {

namespace {
constexpr std::size_t kTableMaxOrder = 4096;
}

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> generators)
    : degree_(degree), generators_(std::move(generators)) {
  if (degree_ == 0) throw InvalidArgument("degree must be positive");
  for (auto const& g : generators_)
    if (g.degree() != degree_) throw InvalidArgument("generator degree mismatch");
}

std::vector<Perm> PermGroup::elements(Limits const& limits) const {
  std::unordered_set<Perm, PermHash> seen;
  std::vector<Perm> out;
  Perm id(degree_);
  seen.insert(id);
  out.push_back(id);
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (auto const& g : generators_) {
      Perm next = out[head] * g;
      if (seen.insert(next).second) {
        out.push_back(std::move(next));
        if (out.size() > limits.enumeration)
          throw CapExceeded("group closure passed " + std::to_string(limits.enumeration) +
                            " elements");
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GroupPtr Group::make(PermGroup const& pg, Limits const& limits) {
  std::shared_ptr<Group> g(new Group());
  g->source_ = pg;
  g->perms_ = pg.elements(limits);
  std::size_t const n = g->perms_.size();
  g->lookup_.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) g->lookup_.emplace(g->perms_[i], static_cast<Elem>(i));

  g->inverse_.resize(n);
  g->orders_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g->inverse_[i] = g->lookup_.at(g->perms_[i].inverse());
    g->orders_[i] = g->perms_[i].order();
  }
  if (n <= kTableMaxOrder) {
    g->table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        g->table_[a * n + b] =
            static_cast<std::uint16_t>(g->lookup_.at(g->perms_[a] * g->perms_[b]));
  }
  for (auto const& p : pg.generators()) g->generators_.push_back(g->lookup_.at(p));
  return g;
}

Elem Group::mul_slow(Elem a, Elem b) const { return lookup_.at(perms_[a] * perms_[b]); }

Elem Group::power(Elem a, std::size_t k) const {
  Elem result = identity();
  Elem base = a;
  while (k) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

std::optional<Elem> Group::find(Perm const& p) const {
  auto it = lookup_.find(p);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Elem Group::index(Perm const& p) const {
  auto e = find(p);
  if (!e) throw InvalidArgument("permutation " + p.to_string() + " is not in the group");
  return *e;
}

}  // namespace parafusion
