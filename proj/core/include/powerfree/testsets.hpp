#pragma once

#include <functional>
#include <string>
#include <utility>

#include "powerfree/bigint.hpp"
#include "powerfree/morphism.hpp"
#include "powerfree/word.hpp"

namespace powerfree {

// Outcome of a sufficient-condition check: either every clause holds (the
// morphism is certified) or one clause failed, with the failing clause
// name and a witness.  A failed clause does not refute the morphism.
struct SufficiencyResult {
  bool sufficient = false;
  std::string condition;  // failed clause: "i", "ii" or "iii"
  std::string witness;
};

// Squarefreeness from images of short words plus the no-factor condition
// on letter images.
SufficiencyResult bean_squarefree_sufficient(const Morphism& m);

// k >= 3 variant with the extra clause that no letter image occurs as an
// interior factor of a two-letter image.
SufficiencyResult bean_kpowerfree_sufficient(const Morphism& m, int k);

// Exact tests (necessary and sufficient over their stated domains).
bool squarefree_uniform_test(const Morphism& m);  // uniform morphisms
bool squarefree_ternary_test(const Morphism& m);  // 3-letter source
bool cubefree_binary_test(const Morphism& m);     // 2-letter source

// Finite word sets whose images decide k-powerfreeness of a morphism.
class TestSet {
 public:
  enum class Kind { minimal_cubefree, uniform, length_bound };

  // The 12-word set that is minimal for binary-source cubefree morphisms.
  static TestSet minimal_cubefree();

  // Decides k-powerfreeness of uniform morphisms: the non-empty k-powerfree
  // words of length <= k+1, plus the k-powerfree words of the shape
  // a0 w1 a1 w2 ... wk ak where each interior block wi repeats no letter
  // and block lengths differ by at most one.  Needs k >= 3 and a source
  // of 2..32 letters.
  static TestSet uniform(int k, Alphabet source);

  // All non-empty k-powerfree source words of length <= k*(size+1)+1, or up
  // to an explicit bound.
  static TestSet length_bound(int k, Alphabet source, int bound = 0);

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  const Alphabet& source() const { return source_; }
  int max_word_length() const { return bound_; }

  // Visits every word exactly once, lengths increasing, lexicographic
  // within a length.  The reference is only valid during the call.
  // Return false from the callback to stop early.
  void for_each(const std::function<bool(const Word&)>& visit) const;

  // Streams the whole set.
  std::pair<BigInt, int> count_and_max_length() const;

 private:
  TestSet(Kind kind, int k, Alphabet source, int bound)
      : kind_(kind), k_(k), source_(source), bound_(bound) {}

  Kind kind_;
  int k_;
  Alphabet source_;
  int bound_;
};

enum class TestMethod { testset, length_bound };

// Exact k-powerfreeness test for uniform morphisms, k >= 3: streams the
// chosen word set and checks every image as it grows.  length_override
// (length_bound method only) replaces the default length bound.
bool kpowerfree_uniform_test(const Morphism& m, int k,
                             TestMethod method = TestMethod::testset,
                             int length_override = 0);

// Exact test for uniform morphisms with a two-letter source and distinct,
// primitive letter images with primitive concatenation: only the images
// of k-powerfree words up to a short k-dependent length matter.
bool keranen_binary_uniform_test(const Morphism& m, int k);

// Verification receipt consumed by the bound constructors.
struct KpfCertificate {
  Morphism morphism;
  int k = 0;
  std::string method;
  bool verified = false;
};

// Picks a decision procedure for (m, k) and runs it: exact tests where one
// applies, sufficient conditions otherwise.  verified stays false when no
// procedure could certify the morphism.
KpfCertificate certify_kpowerfree(const Morphism& m, int k);

}  // namespace powerfree
