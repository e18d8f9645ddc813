#include "powerfree/search.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "powerfree/testsets.hpp"

namespace powerfree {

bool operator==(const GeneratingSet& a, const GeneratingSet& b) {
  return a.words == b.words;
}

bool operator<(const GeneratingSet& a, const GeneratingSet& b) {
  return std::lexicographical_compare(a.words.begin(), a.words.end(),
                                      b.words.begin(), b.words.end());
}

GeneratingSet canonicalize_generating_set(const GeneratingSet& s) {
  GeneratingSet base = s;
  std::sort(base.words.begin(), base.words.end());
  if (base.words.empty()) return base;
  bool binary = base.words[0].alphabet().size() == 2;

  GeneratingSet best = base;
  for (int flip = 0; flip < (binary ? 2 : 1); ++flip) {
    for (int rev = 0; rev < 2; ++rev) {
      GeneratingSet variant;
      variant.words.reserve(base.words.size());
      for (const Word& w : base.words) {
        Word x = flip ? complement(w) : w;
        variant.words.push_back(rev ? reverse(x) : x);
      }
      std::sort(variant.words.begin(), variant.words.end());
      if (variant < best) best = variant;
    }
  }
  return best;
}

Morphism morphism_from_set(const GeneratingSet& s, Alphabet source) {
  if (static_cast<int>(s.words.size()) != source.size())
    throw Error(Error::Kind::dimension_mismatch,
                "set size differs from the source alphabet size");
  if (s.words.empty())
    throw Error(Error::Kind::invalid_argument, "empty generating set");
  return Morphism(source, s.words[0].alphabet(), s.words);
}

namespace {

// Is the uniform morphism sending two letters onto this pair of words
// k-powerfree?  Exact for each k.
bool pair_compatible(const Word& u, const Word& v, Alphabet target, int k) {
  Morphism m(Alphabet(2), target, {u, v});
  if (k == 2) return squarefree_uniform_test(m);
  if (k == 3) return cubefree_binary_test(m);
  return kpowerfree_uniform_test(m, k);
}

bool set_powerfree(const GeneratingSet& s, int k) {
  Alphabet source(static_cast<int>(s.words.size()));
  Morphism m = morphism_from_set(s, source);
  if (k == 2) {
    return source.size() == 3 ? squarefree_ternary_test(m)
                              : squarefree_uniform_test(m);
  }
  if (source.size() == 2 && k == 3) return cubefree_binary_test(m);
  return kpowerfree_uniform_test(m, k);
}

}  // namespace

SearchResult search_uniform_generating_sets(int k, int source_size,
                                            Alphabet target, int ell,
                                            const SearchOptions& opts) {
  if (k < 2)
    throw Error(Error::Kind::invalid_argument, "k must be >= 2");
  if (source_size < 2)
    throw Error(Error::Kind::invalid_argument,
                "need at least two source letters");
  if (target.size() < 2)
    throw Error(Error::Kind::wrong_alphabet,
                "need at least two target letters");
  if (ell < 1)
    throw Error(Error::Kind::invalid_argument,
                "need images of at least one letter");

  // Candidate words: the k-powerfree length-ell words over the target.
  FreenessSpec spec(k);
  std::vector<Word> words;
  {
    Word w(target);
    // plain DFS; collect at full depth
    auto collect = [&](auto&& self, Word& cur) -> void {
      if (cur.length() == ell) {
        words.push_back(cur);
        return;
      }
      for (int a = 0; a < target.size(); ++a) {
        if (!extends_powerfree(cur, a, spec)) continue;
        cur.push_back(a);
        self(self, cur);
        cur.pop_back();
      }
    };
    collect(collect, w);
  }
  if (words.size() > 3000)
    throw Error(Error::Kind::resource_limit,
                "too many candidate words (" + std::to_string(words.size()) +
                    ") for a pairwise search");

  // Pairwise filter: any two distinct words of a valid set induce a
  // k-powerfree two-letter morphism.
  std::size_t nw = words.size();
  std::vector<char> compat(nw * nw, 0);
  for (std::size_t i = 0; i < nw; ++i)
    for (std::size_t j = i + 1; j < nw; ++j) {
      bool ok = pair_compatible(words[i], words[j], target, k);
      compat[i * nw + j] = compat[j * nw + i] = ok;
    }

  // Grow index cliques in lexicographic order.  Restricting a k-powerfree
  // morphism to fewer source letters keeps it k-powerfree, so a partial
  // set that already fails the exact test cannot extend to a valid one;
  // testing prefixes of three or more words prunes the growth hard.
  std::vector<std::vector<int>> cliques;
  std::vector<int> chosen;
  auto grow = [&](auto&& self, std::size_t next) -> void {
    if (static_cast<int>(chosen.size()) == source_size) {
      cliques.push_back(chosen);
      return;
    }
    for (std::size_t i = next; i < nw; ++i) {
      bool ok = true;
      for (int c : chosen)
        if (!compat[static_cast<std::size_t>(c) * nw + i]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(static_cast<int>(i));
      bool viable = true;
      if (chosen.size() >= 3 &&
          static_cast<int>(chosen.size()) < source_size) {
        GeneratingSet s;
        for (int c : chosen) s.words.push_back(words[c]);
        viable = set_powerfree(s, k);
      }
      if (viable) self(self, i + 1);
      chosen.pop_back();
    }
  };
  grow(grow, 0);

  // Verify each clique exactly; this is the expensive part, so cliques go
  // to a small worker pool.  Results are collected per clique index, which
  // keeps the outcome independent of scheduling.
  std::vector<char> accepted(cliques.size(), 0);
  {
    int workers = opts.workers > 0
                      ? opts.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (cliques.size() < static_cast<std::size_t>(workers))
      workers = std::max<int>(1, static_cast<int>(cliques.size()));
    std::atomic<std::size_t> cursor{0};
    auto run = [&]() {
      for (;;) {
        std::size_t idx = cursor.fetch_add(1);
        if (idx >= cliques.size()) return;
        GeneratingSet s;
        for (int c : cliques[idx]) s.words.push_back(words[c]);
        accepted[idx] = set_powerfree(s, k);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
  }

  SearchResult result;
  std::vector<GeneratingSet> reps;
  for (std::size_t idx = 0; idx < cliques.size(); ++idx) {
    if (!accepted[idx]) continue;
    ++result.count;
    GeneratingSet s;
    for (int c : cliques[idx]) s.words.push_back(words[c]);
    reps.push_back(canonicalize_generating_set(s));
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  result.representatives = std::move(reps);
  return result;
}

}  // namespace powerfree
