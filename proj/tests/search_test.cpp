#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "powerfree/search.hpp"

using namespace powerfree;

namespace {

GeneratingSet set_of(std::vector<std::string> words) {
  GeneratingSet s;
  for (const std::string& w : words)
    s.words.push_back(Word::parse(Alphabet(2), w));
  std::sort(s.words.begin(), s.words.end());
  return s;
}

std::string comp(const std::string& w) {
  std::string out;
  for (char c : w) out += c == '0' ? '1' : '0';
  return out;
}

std::string rev(const std::string& w) { return {w.rbegin(), w.rend()}; }

}  // namespace

TEST_CASE("canonicalization is idempotent and symmetry-invariant") {
  GeneratingSet s = set_of({"001011", "001101", "011001"});
  GeneratingSet canon = canonicalize_generating_set(s);
  CHECK(canonicalize_generating_set(canon) == canon);

  GeneratingSet flipped = set_of({comp("001011"), comp("001101"),
                                  comp("011001")});
  CHECK(canonicalize_generating_set(flipped) == canon);

  GeneratingSet reversed = set_of({rev("001011"), rev("001101"),
                                   rev("011001")});
  CHECK(canonicalize_generating_set(reversed) == canon);

  GeneratingSet both = set_of({rev(comp("001011")), rev(comp("001101")),
                               rev(comp("011001"))});
  CHECK(canonicalize_generating_set(both) == canon);
}

TEST_CASE("morphism_from_set") {
  GeneratingSet s = set_of({"001011", "001101", "011001"});
  Morphism m = morphism_from_set(s, Alphabet(3));
  CHECK(m.source().size() == 3);
  CHECK(m.uniform_length() == 6);
  CHECK_THROWS_AS(morphism_from_set(s, Alphabet(4)), Error);
}

TEST_CASE("three-to-two cubefree morphisms need length six") {
  SearchResult none = search_uniform_generating_sets(3, 3, Alphabet(2), 5);
  CHECK(none.count == 0);
  CHECK(none.representatives.empty());

  SearchResult found = search_uniform_generating_sets(3, 3, Alphabet(2), 6);
  CHECK(found.count == 12);
  REQUIRE(found.representatives.size() == 3);

  // the three published orbit representatives
  const std::string w1 = "001011", w2 = "001101", w3 = "010110",
                    w4 = "011001";
  std::vector<GeneratingSet> expected = {
      canonicalize_generating_set(set_of({w1, w2, w4})),
      canonicalize_generating_set(set_of({w2, comp(w3), rev(comp(w3))})),
      canonicalize_generating_set(set_of({w2, comp(w3), w4}))};
  std::sort(expected.begin(), expected.end());
  CHECK(found.representatives == expected);
}

TEST_CASE("search respects the worker count only in speed") {
  SearchOptions one;
  one.workers = 1;
  SearchOptions four;
  four.workers = 4;
  SearchResult a = search_uniform_generating_sets(3, 3, Alphabet(2), 6, one);
  SearchResult b = search_uniform_generating_sets(3, 3, Alphabet(2), 6, four);
  CHECK(a.count == b.count);
  CHECK(a.representatives == b.representatives);
}

TEST_CASE("squarefree search finds the identity at length one") {
  SearchResult r = search_uniform_generating_sets(2, 3, Alphabet(3), 1);
  CHECK(r.count == 1);
  REQUIRE(r.representatives.size() == 1);
  CHECK(r.representatives[0].words.size() == 3);
}

TEST_CASE("search validation") {
  CHECK_THROWS_AS(search_uniform_generating_sets(1, 3, Alphabet(2), 6),
                  Error);
  CHECK_THROWS_AS(search_uniform_generating_sets(3, 1, Alphabet(2), 6),
                  Error);
  CHECK_THROWS_AS(search_uniform_generating_sets(3, 3, Alphabet(2), 0),
                  Error);
}
