#pragma once

#include <optional>
#include <string>
#include <vector>

#include "powerfree/bigint.hpp"
#include "powerfree/word.hpp"

namespace powerfree {

// A monoid homomorphism source* -> target*, given by the images of the
// source letters.  Images may have any lengths (including empty).
class Morphism {
 public:
  Morphism(Alphabet source, Alphabet target, std::vector<Word> images);

  // 0 -> 01, 1 -> 10 (Thue-Morse).
  static Morphism thue_morse();

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  const Word& image(int letter) const { return images_[letter]; }
  const std::vector<Word>& images() const { return images_; }

  bool is_uniform() const;
  // Common image length; non_uniform_input if lengths differ.
  int uniform_length() const;

  Word apply(const Word& w) const;

  // Expand `seed` until the word has at least min_length letters and return
  // the whole expansion, a prefix of the fixed point.  Requires image(seed)
  // to start with seed and to be longer than one letter.
  Word iterate(int seed, int min_length) const;

  friend bool operator==(const Morphism& a, const Morphism& b);
  friend bool operator!=(const Morphism& a, const Morphism& b) {
    return !(a == b);
  }

 private:
  Alphabet source_;
  Alphabet target_;
  std::vector<Word> images_;
};

// Letter-occurrence matrix: entry (i, j) counts target letter i in the
// image of source letter j.  rows = target size, cols = source size.
struct SubstitutionMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<long> entries;  // row-major

  long at(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
};

SubstitutionMatrix substitution_matrix(const Morphism& m);

// Right eigenvector of an integer matrix for the integer eigenvalue given,
// solved exactly and normalized to sum 1.  Throws non_unique_eigenvector
// when the eigenspace is not one-dimensional, precondition_violation when
// the normalized eigenvector has a negative entry.
std::vector<BigRat> integer_eigenvector(const std::vector<std::vector<long>>& matrix,
                                        long eigenvalue);

// Letter frequencies of the fixed points of a uniform morphism: the
// eigenvector of the substitution matrix for eigenvalue uniform_length(),
// normalized to sum 1.  Square matrices are solved exactly; a non-square
// matrix is accepted when all columns agree (frequencies column/length).
std::vector<BigRat> pf_frequencies(const Morphism& m);

// JSON round-trip.  Format: {"k": 3, "images": {"0": "01", "1": "10"}},
// with "k" optional and an optional "target" alphabet size (inferred from
// the images when absent).  Image strings follow Word::parse.
struct MorphismFile {
  Morphism morphism;
  std::optional<int> k;
};

MorphismFile parse_morphism_json(const std::string& text);
MorphismFile load_morphism_json(const std::string& path);
std::string morphism_json(const Morphism& m, std::optional<int> k = std::nullopt);

}  // namespace powerfree
