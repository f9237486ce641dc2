#pragma once

#include <string>
#include <vector>

namespace parafusion {

/// Letters are +k / -k for generator k-1 and its inverse.
using Word = std::vector<int>;

struct Presentation {
  std::vector<std::string> symbols;
  std::vector<Word> relators;

  /// Throws InvalidArgument when a relator uses an undeclared symbol.
  void validate() const;
  std::string to_string() const;
};

Word free_reduce(Word w);
Word invert(Word const& w);
Word concat(Word a, Word const& b);
/// Parses words such as "x y^-1 x^2"; symbols are looked up in `p`.
Word parse_word(Presentation const& p, std::string const& text);

struct EnumerationResult {
  bool finite = false;   // false means Inconclusive, never "infinite"
  std::size_t index = 0; // number of cosets when finite
  std::size_t rows = 0;  // rows allocated while enumerating
};

/// Todd-Coxeter enumeration (HLT strategy with coincidence handling) of the
/// cosets of <subgroup_words>. Inconclusive once more than `limit` rows are needed.
EnumerationResult coset_enumeration(Presentation const& p, std::vector<Word> const& subgroup_words,
                                    std::size_t limit);

}  // namespace parafusion
