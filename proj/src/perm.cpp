#include "parafusion/perm.hpp"

#include <cctype>
#include <numeric>

#include "parafusion/errors.hpp"

namespace parafusion {

Perm::Perm(std::size_t degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), Point{0});
}

Perm::Perm(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Point x : images_) {
    if (x >= images_.size() || seen[x])
      throw InvalidArgument("images do not form a bijection");
    seen[x] = true;
  }
}

Perm Perm::parse(std::string_view text, std::size_t degree) {
  std::vector<Point> images(degree);
  std::iota(images.begin(), images.end(), Point{0});
  std::vector<bool> moved(degree, false);

  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  skip_space();
  while (pos < text.size()) {
    if (text[pos] != '(')
      throw ParseError("expected '(' in \"" + std::string(text) + "\"");
    ++pos;
    std::vector<Point> cycle;
    for (;;) {
      skip_space();
      if (pos >= text.size())
        throw ParseError("unterminated cycle in \"" + std::string(text) + "\"");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw ParseError("unexpected character in \"" + std::string(text) + "\"");
      std::size_t value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
        if (value > degree) break;
        ++pos;
      }
      if (value < 1 || value > degree)
        throw ParseError("point " + std::to_string(value) + " outside 1.." +
                         std::to_string(degree));
      Point x = static_cast<Point>(value - 1);
      if (moved[x])
        throw ParseError("point " + std::to_string(value) + " repeated; cycles must be disjoint");
      moved[x] = true;
      cycle.push_back(x);
    }
    for (std::size_t i = 0; i < cycle.size(); ++i)
      images[cycle[i]] = cycle[(i + 1) % cycle.size()];
    skip_space();
  }
  return Perm(std::move(images));
}

Perm Perm::operator*(Perm const& rhs) const {
  if (rhs.degree() != degree()) throw InvalidArgument("degree mismatch in product");
  std::vector<Point> out(images_.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = images_[rhs.images_[x]];
  Perm p;
  p.images_ = std::move(out);
  return p;
}

Perm Perm::inverse() const {
  Perm p;
  p.images_.resize(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) p.images_[images_[x]] = static_cast<Point>(x);
  return p;
}

bool Perm::is_identity() const {
  for (std::size_t x = 0; x < images_.size(); ++x)
    if (images_[x] != x) return false;
  return true;
}

std::size_t Perm::order() const {
  std::vector<bool> seen(images_.size(), false);
  std::size_t result = 1;
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (seen[x]) continue;
    std::size_t len = 0;
    for (std::size_t y = x; !seen[y]; y = images_[y]) {
      seen[y] = true;
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

std::string Perm::to_string() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (seen[x] || images_[x] == x) continue;
    out += '(';
    bool first = true;
    for (std::size_t y = x; !seen[y]; y = images_[y]) {
      seen[y] = true;
      if (!first) out += ' ';
      out += std::to_string(y + 1);
      first = false;
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

std::size_t PermHash::operator()(Perm const& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Point x : p.images()) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace parafusion
