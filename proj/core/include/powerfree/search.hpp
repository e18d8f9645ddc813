#pragma once

#include <vector>

#include "powerfree/morphism.hpp"
#include "powerfree/word.hpp"

namespace powerfree {

// An unordered set of equal-length target words; assigning them to the
// source letters in any order gives the same family of uniform morphisms.
struct GeneratingSet {
  std::vector<Word> words;  // sorted, distinct
};

bool operator==(const GeneratingSet& a, const GeneratingSet& b);
inline bool operator!=(const GeneratingSet& a, const GeneratingSet& b) {
  return !(a == b);
}
bool operator<(const GeneratingSet& a, const GeneratingSet& b);

// Least set under target-letter exchange (binary targets) and word
// reversal, words sorted.  Idempotent.
GeneratingSet canonicalize_generating_set(const GeneratingSet& s);

// The uniform morphism mapping letter i to the i-th word of the set.
Morphism morphism_from_set(const GeneratingSet& s, Alphabet source);

struct SearchOptions {
  int workers = 0;  // 0: hardware concurrency
};

struct SearchResult {
  // Distinct generating sets found, i.e. morphisms counted up to
  // permutations of the source letters.
  int count = 0;
  // The sets collapsed further under target symmetry, sorted.
  std::vector<GeneratingSet> representatives;
};

// Finds every set of source_size distinct k-powerfree length-ell words
// over the target whose induced uniform morphism is k-powerfree.
SearchResult search_uniform_generating_sets(int k, int source_size,
                                            Alphabet target, int ell,
                                            const SearchOptions& opts = {});

}  // namespace powerfree
