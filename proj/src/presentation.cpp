#include "parafusion/presentation.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "parafusion/errors.hpp"

namespace parafusion {

void Presentation::validate() const {
  int const n = static_cast<int>(symbols.size());
  for (auto const& r : relators)
    for (int x : r)
      if (x == 0 || x > n || x < -n) throw InvalidArgument("relator uses an undeclared symbol");
}

std::string Presentation::to_string() const {
  std::ostringstream out;
  out << "< ";
  for (std::size_t i = 0; i < symbols.size(); ++i) out << (i ? ", " : "") << symbols[i];
  out << " | ";
  for (std::size_t r = 0; r < relators.size(); ++r) {
    if (r) out << ", ";
    for (std::size_t i = 0; i < relators[r].size(); ++i) {
      int x = relators[r][i];
      out << (i ? " " : "") << symbols[static_cast<std::size_t>(std::abs(x) - 1)]
          << (x < 0 ? "^-1" : "");
    }
  }
  out << " >";
  return out.str();
}

Word free_reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word invert(Word const& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

Word concat(Word a, Word const& b) {
  a.insert(a.end(), b.begin(), b.end());
  return free_reduce(std::move(a));
}

Word parse_word(Presentation const& p, std::string const& text) {
  std::istringstream in(text);
  std::string tok;
  Word out;
  while (in >> tok) {
    int exp = 1;
    auto caret = tok.find('^');
    std::string name = tok.substr(0, caret);
    if (caret != std::string::npos) {
      try {
        exp = std::stoi(tok.substr(caret + 1));
      } catch (std::exception const&) {
        throw ParseError("bad exponent in \"" + tok + "\"");
      }
    }
    auto it = std::find(p.symbols.begin(), p.symbols.end(), name);
    if (it == p.symbols.end()) throw ParseError("unknown symbol \"" + name + "\"");
    int letter = static_cast<int>(it - p.symbols.begin()) + 1;
    for (int i = 0; i < std::abs(exp); ++i) out.push_back(exp < 0 ? -letter : letter);
  }
  return free_reduce(std::move(out));
}

namespace {

class CosetTable {
 public:
  CosetTable(std::size_t gens, std::size_t limit) : cols_(2 * gens), limit_(limit) { add_row(); }

  static std::size_t col(int letter) {
    return 2 * static_cast<std::size_t>(std::abs(letter) - 1) + (letter < 0 ? 1 : 0);
  }
  static std::size_t inv(std::size_t c) { return c ^ 1u; }

  bool overflow() const { return overflow_; }
  std::size_t rows() const { return parent_.size(); }
  bool alive(std::size_t c) const { return parent_[c] == c; }
  std::size_t live_count() const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < parent_.size(); ++c) n += alive(c);
    return n;
  }
  std::int64_t& at(std::size_t c, std::size_t x) { return table_[c * cols_ + x]; }

  /// New coset as the image of c under column x.
  bool define(std::size_t c, std::size_t x) {
    if (parent_.size() >= limit_) {
      overflow_ = true;
      return false;
    }
    std::size_t d = add_row();
    at(c, x) = static_cast<std::int64_t>(d);
    at(d, inv(x)) = static_cast<std::int64_t>(c);
    return true;
  }

  /// Scans w at coset c, defining new cosets as needed.
  bool scan_and_fill(std::size_t c, Word const& w) {
    if (w.empty()) return true;
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();  // unscanned letters are w[i..j)
    for (;;) {
      while (i < j && at(f, col(w[i])) >= 0) f = static_cast<std::size_t>(at(f, col(w[i++])));
      if (i == j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j > i && at(b, inv(col(w[j - 1]))) >= 0)
        b = static_cast<std::size_t>(at(b, inv(col(w[--j]))));
      if (j == i) {
        coincidence(f, b);
        return true;
      }
      if (j == i + 1) {
        at(f, col(w[i])) = static_cast<std::int64_t>(b);
        at(b, inv(col(w[i]))) = static_cast<std::int64_t>(f);
        return true;
      }
      if (!define(f, col(w[i]))) return false;
    }
  }

  bool fill_row(std::size_t c) {
    for (std::size_t x = 0; x < cols_ && alive(c); ++x)
      if (at(c, x) < 0 && !define(c, x)) return false;
    return true;
  }

 private:
  std::size_t add_row() {
    std::size_t d = parent_.size();
    parent_.push_back(d);
    table_.resize(table_.size() + cols_, -1);
    return d;
  }

  std::size_t rep(std::size_t k) {
    std::size_t r = k;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[k] != r) {
      std::size_t next = parent_[k];
      parent_[k] = r;
      k = next;
    }
    return r;
  }

  void merge(std::size_t k, std::size_t l, std::vector<std::size_t>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    std::size_t lo = std::min(k, l), hi = std::max(k, l);
    parent_[hi] = lo;
    queue.push_back(hi);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t e = queue[qi];
      for (std::size_t x = 0; x < cols_; ++x) {
        if (at(e, x) < 0) continue;
        std::size_t f = static_cast<std::size_t>(at(e, x));
        at(f, inv(x)) = -1;
        std::size_t e1 = rep(e), f1 = rep(f);
        if (at(e1, x) >= 0) {
          merge(f1, static_cast<std::size_t>(at(e1, x)), queue);
        } else if (at(f1, inv(x)) >= 0) {
          merge(e1, static_cast<std::size_t>(at(f1, inv(x))), queue);
        } else {
          at(e1, x) = static_cast<std::int64_t>(f1);
          at(f1, inv(x)) = static_cast<std::int64_t>(e1);
        }
      }
    }
  }

  std::size_t cols_;
  std::size_t limit_;
  bool overflow_ = false;
  std::vector<std::size_t> parent_;
  std::vector<std::int64_t> table_;
};

}  // namespace

EnumerationResult coset_enumeration(Presentation const& p, std::vector<Word> const& subgroup_words,
                                    std::size_t limit) {
  if (limit < 1) throw InvalidArgument("row limit must be positive");
  p.validate();
  Presentation sub{p.symbols, subgroup_words};
  sub.validate();

  std::vector<Word> rels;
  for (auto const& r : p.relators) {
    Word w = free_reduce(r);
    if (!w.empty()) rels.push_back(std::move(w));
  }

  EnumerationResult result;
  if (p.symbols.empty()) {
    result.finite = true;
    result.index = 1;
    result.rows = 1;
    return result;
  }

  CosetTable t(p.symbols.size(), limit);
  auto inconclusive = [&] {
    result.finite = false;
    result.rows = t.rows();
    return result;
  };
  for (auto const& w : subgroup_words)
    if (!t.scan_and_fill(0, free_reduce(w))) return inconclusive();

  for (std::size_t c = 0; c < t.rows(); ++c) {
    for (auto const& r : rels) {
      if (!t.alive(c)) break;
      if (!t.scan_and_fill(c, r)) return inconclusive();
    }
    if (t.alive(c) && !t.fill_row(c)) return inconclusive();
  }
  result.finite = true;
  result.index = t.live_count();
  result.rows = t.rows();
  return result;
}

}  // namespace parafusion
