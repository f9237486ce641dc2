#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parafusion {

using Point = std::uint16_t;

/**
 * A permutation of {0, ..., degree-1}. Text input and output use 1-based
 * disjoint-cycle notation such as "(1 2 3)(4 5)".
 *
 * Products act on the left: (a * b)(x) = a(b(x)).
 */
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t degree);
  explicit Perm(std::vector<Point> images);

  /// Parses 1-based cycle notation; fixed points may be omitted.
  static Perm parse(std::string_view cycles, std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  std::span<Point const> images() const { return images_; }

  Perm operator*(Perm const& rhs) const;
  Perm inverse() const;
  bool is_identity() const;
  std::size_t order() const;

  /// 1-based disjoint cycles; "()" for the identity.
  std::string to_string() const;

  friend bool operator==(Perm const&, Perm const&) = default;
  friend std::strong_ordering operator<=>(Perm const& a, Perm const& b) {
    return a.images_ <=> b.images_;
  }

 private:
  std::vector<Point> images_;
};

struct PermHash {
  std::size_t operator()(Perm const& p) const noexcept;
};

}  // namespace parafusion
