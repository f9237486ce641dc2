#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace parafusion {

using Elem = std::uint32_t;

/// Fixed-size bitset over the element indices of one enumerated group.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe() const { return universe_; }

  bool contains(Elem e) const { return (words_[e >> 6] >> (e & 63)) & 1u; }
  void insert(Elem e) { words_[e >> 6] |= std::uint64_t{1} << (e & 63); }
  void erase(Elem e) { words_[e >> 6] &= ~(std::uint64_t{1} << (e & 63)); }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool is_subset_of(ElementSet const& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  ElementSet& operator&=(ElementSet const& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ElementSet& operator|=(ElementSet const& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend ElementSet operator&(ElementSet a, ElementSet const& b) { return a &= b; }
  friend ElementSet operator|(ElementSet a, ElementSet const& b) { return a |= b; }

  /// Ascending element indices.
  std::vector<Elem> to_vector() const {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        out.push_back(static_cast<Elem>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(static_cast<Elem>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
  }

  friend bool operator==(ElementSet const&, ElementSet const&) = default;

  /// Lexicographic comparison of the ascending element lists; both sets
  /// must have the same size.
  friend bool lex_less(ElementSet const& a, ElementSet const& b) {
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
      std::uint64_t x = a.words_[i], y = b.words_[i];
      if (x == y) continue;
      std::uint64_t diff = x ^ y;
      std::uint64_t low = diff & (~diff + 1);
      // the first differing element is in the set that holds it; that list is smaller
      return (x & low) != 0;
    }
    return false;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : words_) {
      h ^= static_cast<std::size_t>(w);
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return h;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(ElementSet const& s) const noexcept { return s.hash(); }
};

}  // namespace parafusion
