#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "powerfree/morphism.hpp"
#include "powerfree/testsets.hpp"

using namespace powerfree;

namespace {

Morphism from_strings(int target_size, std::vector<std::string> images) {
  Alphabet target(target_size);
  std::vector<Word> ws;
  for (const std::string& s : images) ws.push_back(Word::parse(target, s));
  return Morphism(Alphabet(static_cast<int>(images.size())), target,
                  std::move(ws));
}

// ground truth by brute force: some powerfree source word with length
// <= max_len has an image containing a k-power
bool oracle_violation(const Morphism& m, int k, int max_len) {
  int src = m.source().size();
  for (int n = 1; n <= max_len; ++n)
    for (const std::string& s : oracle::powerfree_strings(src, n, k)) {
      Word w = Word::parse(m.source(), s);
      if (oracle::has_kpower(m.apply(w).str(), k)) return true;
    }
  return false;
}

// all source-letter image tuples of the given uniform length
void for_all_uniform(int source_size, int target_size, int ell,
                     const std::function<void(const Morphism&)>& visit) {
  std::vector<std::string> images = oracle::all_strings(target_size, ell);
  std::vector<int> pick(source_size, 0);
  for (;;) {
    std::vector<std::string> chosen;
    for (int i : pick) chosen.push_back(images[i]);
    visit(from_strings(target_size, chosen));
    int d = source_size - 1;
    while (d >= 0 && ++pick[d] == static_cast<int>(images.size()))
      pick[d--] = 0;
    if (d < 0) break;
  }
}

// the uniform test words, straight from the definition: all powerfree words
// of length <= k+1, plus the powerfree words shaped as k+1 single-letter
// markers separated by k blocks, each block using every letter at most
// once, block lengths pairwise within one of each other
bool oracle_in_uniform_testset(const std::string& w, int k, int alphabet) {
  int n = static_cast<int>(w.size());
  if (!oracle::powerfree(w, k)) return false;
  if (n <= k + 1) return true;
  int interior = n - (k + 1);
  for (int q = 0; k * q <= interior; ++q) {
    int t = interior - k * q;  // t blocks of length q+1, k-t of length q
    if (t > k) continue;
    if (q > alphabet || (t > 0 && q + 1 > alphabet)) continue;
    // choose which blocks are long
    for (int mask = 0; mask < (1 << k); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != t) continue;
      int pos = 0;
      bool ok = true;
      for (int b = 0; b < k && ok; ++b) {
        ++pos;  // marker
        int len = q + ((mask >> b) & 1);
        std::set<char> seen;
        for (int i = 0; i < len && ok; ++i)
          if (!seen.insert(w[pos + i]).second) ok = false;
        pos += len;
      }
      if (ok) return true;  // final marker at pos == n-1
    }
  }
  return false;
}

}  // namespace

TEST_CASE("the minimal cubefree word list") {
  TestSet tmin = TestSet::minimal_cubefree();
  std::vector<std::string> words;
  tmin.for_each([&](const Word& w) {
    words.push_back(w.str());
    return true;
  });
  REQUIRE(words.size() == 12);
  for (const std::string& w : words) CHECK(oracle::powerfree(w, 3));
  CHECK(std::is_sorted(words.begin(), words.end(),
                       [](const std::string& a, const std::string& b) {
                         return a.size() != b.size() ? a.size() < b.size()
                                                     : a < b;
                       }));
  CHECK(std::count(words.begin(), words.end(), "00110") == 1);
  CHECK(std::count(words.begin(), words.end(), "1001001") == 1);
  auto [count, max_len] = tmin.count_and_max_length();
  CHECK(count == 12);
  CHECK(max_len == 7);
}

TEST_CASE("thue-morse is cubefree, near misses are not") {
  CHECK(cubefree_binary_test(Morphism::thue_morse()));
  CHECK(!cubefree_binary_test(from_strings(2, {"01", "11"})));
  CHECK(!cubefree_binary_test(from_strings(2, {"00", "10"})));
  // identity on two letters
  CHECK(cubefree_binary_test(from_strings(2, {"0", "1"})));
}

TEST_CASE("cubefree_binary_test requires a binary source") {
  CHECK_THROWS_AS(cubefree_binary_test(from_strings(2, {"0", "1", "01"})),
                  Error);
}

TEST_CASE("binary test agrees with brute force on all short images") {
  for (int ell : {1, 2, 3}) {
    for_all_uniform(2, 2, ell, [&](const Morphism& m) {
      bool claimed = cubefree_binary_test(m);
      CHECK(claimed == !oracle_violation(m, 3, 9));
    });
  }
}

TEST_CASE("bean squarefree conditions") {
  // identity on three letters passes
  SufficiencyResult id3 = bean_squarefree_sufficient(
      from_strings(3, {"0", "1", "2"}));
  CHECK(id3.sufficient);

  // thue-morse maps the squarefree word 01 onto 0110
  SufficiencyResult tm = bean_squarefree_sufficient(Morphism::thue_morse());
  CHECK(!tm.sufficient);
  CHECK(tm.condition == "i");

  // image of one letter inside another letter's image, with every short
  // product squarefree so only the factor clause can fire
  SufficiencyResult nested = bean_squarefree_sufficient(
      from_strings(4, {"0", "1", "203"}));
  CHECK(!nested.sufficient);
  CHECK(nested.condition == "ii");
}

TEST_CASE("bean k-powerfree conditions") {
  CHECK_THROWS_AS(bean_kpowerfree_sufficient(Morphism::thue_morse(), 2),
                  Error);

  // the classic cubefree morphism that the sufficient conditions miss:
  // 0101 = 0 * image(1) * 1 is an interior occurrence
  SufficiencyResult tm = bean_kpowerfree_sufficient(Morphism::thue_morse(), 3);
  CHECK(!tm.sufficient);
  CHECK(tm.condition == "iii");

  SufficiencyResult id2 = bean_kpowerfree_sufficient(
      from_strings(2, {"0", "1"}), 3);
  CHECK(id2.sufficient);

  // sufficiency implies correctness on everything brute force can reach
  for_all_uniform(2, 2, 3, [&](const Morphism& m) {
    if (bean_kpowerfree_sufficient(m, 3).sufficient)
      CHECK(!oracle_violation(m, 3, 9));
  });
}

TEST_CASE("uniform squarefree test is exact") {
  int checked = 0;
  for_all_uniform(2, 3, 2, [&](const Morphism& m) {
    bool claimed = squarefree_uniform_test(m);
    CHECK(claimed == !oracle_violation(m, 2, 7));
    ++checked;
  });
  CHECK(checked == 81);
  CHECK_THROWS_AS(
      squarefree_uniform_test(from_strings(2, {"0", "11"})), Error);
}

TEST_CASE("ternary squarefree test is exact") {
  // identity is squarefree
  CHECK(squarefree_ternary_test(from_strings(3, {"0", "1", "2"})));
  // non-uniform morphisms are in scope for the ternary test
  int mismatches = 0;
  std::vector<std::string> shapes = {"0", "1", "2", "01", "02", "10", "12",
                                     "012", "021", "102", "201"};
  for (const std::string& a : shapes)
    for (const std::string b : {"1", "02", "12", "201"})
      for (const std::string c : {"2", "10", "021"}) {
        Morphism m = from_strings(3, {a, b, c});
        if (squarefree_ternary_test(m) != !oracle_violation(m, 2, 7))
          ++mismatches;
      }
  CHECK(mismatches == 0);
  CHECK_THROWS_AS(squarefree_ternary_test(Morphism::thue_morse()), Error);
}

TEST_CASE("uniform test set contents match the definition") {
  TestSet ts = TestSet::uniform(3, Alphabet(2));
  CHECK(ts.max_word_length() == 10);
  std::vector<std::string> streamed;
  ts.for_each([&](const Word& w) {
    streamed.push_back(w.str());
    return true;
  });
  // no duplicates, ordered by length then lexicographically
  CHECK(std::is_sorted(streamed.begin(), streamed.end(),
                       [](const std::string& a, const std::string& b) {
                         return a.size() != b.size() ? a.size() < b.size()
                                                     : a < b;
                       }));
  CHECK(std::adjacent_find(streamed.begin(), streamed.end()) ==
        streamed.end());

  // streamed families are non-empty by convention, so the oracle starts at 1
  std::vector<std::string> expected;
  for (int n = 1; n <= 10; ++n)
    for (const std::string& s : oracle::all_strings(2, n))
      if (oracle_in_uniform_testset(s, 3, 2)) expected.push_back(s);
  CHECK(streamed.size() == expected.size());
  std::multiset<std::string> a(streamed.begin(), streamed.end());
  std::multiset<std::string> b(expected.begin(), expected.end());
  CHECK(a == b);
}

TEST_CASE("uniform test set over three letters, counts per length") {
  TestSet ts = TestSet::uniform(3, Alphabet(3));
  CHECK(ts.max_word_length() == 13);
  std::vector<long> per_length(14, 0);
  ts.for_each([&](const Word& w) {
    ++per_length[w.length()];
    return true;
  });
  for (int n = 1; n <= 11; ++n) {
    long expected = 0;
    for (const std::string& s : oracle::all_strings(3, n))
      if (oracle_in_uniform_testset(s, 3, 3)) ++expected;
    CHECK(per_length[n] == expected);
  }
  CHECK(per_length[0] == 0);
}

TEST_CASE("early stop from the visitor") {
  TestSet ts = TestSet::uniform(3, Alphabet(2));
  int seen = 0;
  ts.for_each([&](const Word&) { return ++seen < 5; });
  CHECK(seen == 5);
}

TEST_CASE("test set validation") {
  CHECK_THROWS_AS(TestSet::uniform(2, Alphabet(2)), Error);
  CHECK_THROWS_AS(TestSet::uniform(8, Alphabet(2)), Error);
  CHECK_THROWS_AS(TestSet::uniform(3, Alphabet(1)), Error);
}

TEST_CASE("uniform k-powerfree test equals brute force for binary sources") {
  for (int k : {3, 4}) {
    for_all_uniform(2, 2, 3, [&](const Morphism& m) {
      bool via_testset = kpowerfree_uniform_test(m, k);
      bool via_length =
          kpowerfree_uniform_test(m, k, TestMethod::length_bound);
      bool expected = !oracle_violation(m, k, 11);
      CHECK(via_testset == expected);
      CHECK(via_length == expected);
    });
  }
}

TEST_CASE("short binary check agrees where its preconditions hold") {
  for (int ell : {2, 3, 4}) {
    for_all_uniform(2, 2, ell, [&](const Morphism& m) {
      if (m.image(0) == m.image(1)) return;
      Word ab = m.apply(Word::parse(Alphabet(2), "01"));
      if (!is_primitive(m.image(0)) || !is_primitive(m.image(1)) ||
          !is_primitive(ab))
        return;
      CHECK(keranen_binary_uniform_test(m, 3) ==
            kpowerfree_uniform_test(m, 3));
    });
  }
  CHECK_THROWS_AS(
      keranen_binary_uniform_test(from_strings(2, {"01", "01"}), 3), Error);
}

TEST_CASE("certificates") {
  KpfCertificate tm = certify_kpowerfree(Morphism::thue_morse(), 3);
  CHECK(tm.verified);
  CHECK(tm.method == "minimal cubefree test-set");

  KpfCertificate id3 = certify_kpowerfree(from_strings(3, {"0", "1", "2"}), 2);
  CHECK(id3.verified);

  KpfCertificate bad = certify_kpowerfree(from_strings(2, {"00", "10"}), 3);
  CHECK(!bad.verified);
}

TEST_CASE("the published length-24 cubefree word contains every test word") {
  Word w = Word::parse(Alphabet(2), "001101011011001001010011");
  CHECK(is_powerfree(w, FreenessSpec(3)));
  TestSet::minimal_cubefree().for_each([&](const Word& t) {
    CHECK(w.contains(t));
    return true;
  });
}
