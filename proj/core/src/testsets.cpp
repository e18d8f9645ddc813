#include "powerfree/testsets.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace powerfree {

namespace {

void pop_image(Word& img, int count) {
  for (int j = 0; j < count; ++j) img.pop_back();
}

// DFS over the powerfree words up to max_len; visit runs on every word
// (the empty one included) in tree order.  Returns false when the visit
// callback asked to stop.
bool walk_powerfree(Word& w, const FreenessSpec& spec, int max_len,
                    const std::function<bool(const Word&)>& visit) {
  if (!visit(w)) return false;
  if (w.length() == max_len) return true;
  for (int a = 0; a < w.alphabet().size(); ++a) {
    if (!extends_powerfree(w, a, spec)) continue;
    w.push_back(a);
    bool go = walk_powerfree(w, spec, max_len, visit);
    w.pop_back();
    if (!go) return false;
  }
  return true;
}

// Emits the powerfree words of each length lo..hi in turn, lexicographic
// within a length.
bool emit_by_length(Alphabet alphabet, const FreenessSpec& spec, int lo,
                    int hi, const std::function<bool(const Word&)>& visit) {
  for (int n = lo; n <= hi; ++n) {
    Word w(alphabet);
    bool ok = walk_powerfree(w, spec, n, [&](const Word& x) {
      return x.length() < n || visit(x);
    });
    if (!ok) return false;
  }
  return true;
}

// Block layouts of the marker-separated words for one total length n:
// roles[layout][p] is the interior block at position p, or -1 for the
// k+1 marker letters.  n splits as k+1 markers plus k blocks of lengths
// q or q+1; a layout picks which blocks are long.
struct VShape {
  int n = 0;
  int nlayouts = 0;
  std::vector<std::vector<signed char>> roles;
};

VShape v_shape(int k, int letters, int n) {
  VShape shape;
  shape.n = n;
  int interior = n - (k + 1);
  if (interior <= 0) return shape;  // those lengths sit in the short-word part
  int q = interior / k;
  int t = interior % k;
  if (q > letters || (t > 0 && q + 1 > letters)) return shape;
  for (std::uint32_t set = 0; set < (std::uint32_t{1} << k); ++set) {
    if (__builtin_popcount(set) != t) continue;
    std::vector<signed char> role(n, -1);
    int pos = 1;  // position 0 is the leading marker
    for (int i = 0; i < k; ++i) {
      int len = q + ((set >> i) & 1);
      for (int j = 0; j < len; ++j) role[pos++] = static_cast<signed char>(i);
      ++pos;  // marker after each block
    }
    shape.roles.push_back(std::move(role));
  }
  shape.nlayouts = static_cast<int>(shape.roles.size());
  return shape;
}

// Per-depth stacks for walking the words of one shape: which layouts stay
// viable, and which letters each interior block has used so far.
struct VWalkState {
  int k;
  int n;
  int nlayouts;
  const VShape* shape;
  std::vector<std::uint64_t> alive;              // [depth]
  std::vector<std::vector<std::uint32_t>> used;  // [depth][layout*k + block]

  VWalkState(const VShape& s, int k_)
      : k(k_), n(s.n), nlayouts(s.nlayouts), shape(&s), alive(s.n + 1, 0),
        used(s.n + 1, std::vector<std::uint32_t>(
                          static_cast<std::size_t>(s.nlayouts) * k_, 0)) {
    alive[0] = nlayouts == 64 ? ~std::uint64_t{0}
                              : (std::uint64_t{1} << nlayouts) - 1;
  }

  // Fills depth d+1 from depth d after placing letter a at position d.
  bool place(int d, int a) {
    std::uint64_t next = 0;
    used[d + 1] = used[d];
    auto& dst = used[d + 1];
    for (std::uint64_t rest = alive[d]; rest; rest &= rest - 1) {
      int layout = __builtin_ctzll(rest);
      int role = shape->roles[layout][d];
      if (role < 0) {
        next |= std::uint64_t{1} << layout;
        continue;
      }
      std::uint32_t& mask = dst[static_cast<std::size_t>(layout) * k + role];
      if ((mask >> a) & 1) continue;  // letter repeats in this block
      mask |= std::uint32_t{1} << a;
      next |= std::uint64_t{1} << layout;
    }
    if (next == 0) return false;
    alive[d + 1] = next;
    return true;
  }
};

// Walks the k-powerfree words matching one shape.  policy.on_push runs
// after a letter joins the word; a nonzero return marks an image failure
// at that node.  Such a node only refutes the morphism when it extends to
// a full-length word, so that is checked before aborting.
template <typename Policy>
struct VWalker {
  const FreenessSpec& spec;
  VWalkState state;
  Word src;
  Policy& policy;

  VWalker(const FreenessSpec& sp, const VShape& shape, Alphabet alphabet,
          Policy& p)
      : spec(sp), state(shape, sp.k()), src(alphabet), policy(p) {}

  // true to keep going, false to abort the whole enumeration
  bool descend(int d) {
    if (d == state.n) return policy.on_word(src);
    for (int a = 0; a < src.alphabet().size(); ++a) {
      if (!extends_powerfree(src, a, spec)) continue;
      if (!state.place(d, a)) continue;
      src.push_back(a);
      if (policy.on_push(a) != 0) {
        bool fatal = completable(d + 1);
        src.pop_back();
        if (fatal) return false;
        continue;
      }
      bool go = descend(d + 1);
      policy.on_pop(a);
      src.pop_back();
      if (!go) return false;
    }
    return true;
  }

  // Does some full-length word extend the current prefix under the
  // powerfree and layout constraints alone?
  bool completable(int d) {
    if (d == state.n) return true;
    for (int a = 0; a < src.alphabet().size(); ++a) {
      if (!extends_powerfree(src, a, spec)) continue;
      if (!state.place(d, a)) continue;
      src.push_back(a);
      bool r = completable(d + 1);
      src.pop_back();
      if (r) return true;
    }
    return false;
  }
};

struct EmitPolicy {
  const std::function<bool(const Word&)>& visit;
  int on_push(int) { return 0; }
  void on_pop(int) {}
  bool on_word(const Word& w) { return visit(w); }
};

// Image-side power detection for the deep walk.  run[q] counts how many
// suffix positions of the image match the letter q places back; a k-power
// with period q ends at the top exactly when run[q] reaches (k-1)*q and
// the image is at least kq long.  Updating the runs costs one comparison
// per tracked period per appended letter, so pushing an image stays cheap
// even when the image has grown long.
struct ImagePolicy {
  const Morphism& m;
  int k;
  int min_q;
  std::vector<signed char> img;
  std::vector<int> run;    // indexed by period
  std::vector<int> snaps;  // saved run vectors, one slab per source letter

  ImagePolicy(const Morphism& mm, int kk, int mq, int max_image_len)
      : m(mm), k(kk), min_q(mq),
        run(static_cast<std::size_t>(max_image_len / kk) + 1, 0) {
    img.reserve(static_cast<std::size_t>(max_image_len));
  }

  int on_push(int a) {
    std::size_t img_mark = img.size();
    snaps.insert(snaps.end(), run.begin(), run.end());
    const Word& w = m.image(a);
    for (int i = 0; i < w.length(); ++i) {
      int n = static_cast<int>(img.size());
      img.push_back(static_cast<signed char>(w[i]));
      int top = std::min(static_cast<int>(run.size()) - 1, n);
      int maxq = (n + 1) / k;
      for (int q = min_q; q <= top; ++q) {
        if (img[n] != img[n - q]) {
          run[q] = 0;
        } else if (++run[q] >= (k - 1) * q && q <= maxq) {
          restore(img_mark);
          return 1;
        }
      }
    }
    return 0;
  }

  void on_pop(int a) { restore(img.size() - m.image(a).length()); }
  bool on_word(const Word&) { return true; }

  void restore(std::size_t img_mark) {
    img.resize(img_mark);
    std::copy(snaps.end() - run.size(), snaps.end(), run.begin());
    snaps.resize(snaps.size() - run.size());
  }
};

// Checks the images of every k-powerfree word up to max_len, growing the
// image one letter at a time.  Periods shorter than ell are skipped once
// the word is longer than full_depth letters: a shorter-period power in
// some image lies within the image of a factor of at most k+1 letters,
// and that factor is itself visited with full checks.
bool verify_images_walk(const Morphism& m, const FreenessSpec& spec,
                        Word& src, Word& img, int max_len, int full_depth,
                        int ell) {
  if (src.length() == max_len) return true;
  int min_q = src.length() + 1 <= full_depth ? 1 : ell;
  for (int a = 0; a < src.alphabet().size(); ++a) {
    if (!extends_powerfree(src, a, spec)) continue;
    if (!append_powerfree_checked(img, m.image(a), spec, min_q)) return false;
    src.push_back(a);
    bool go = verify_images_walk(m, spec, src, img, max_len, full_depth, ell);
    src.pop_back();
    pop_image(img, m.image(a).length());
    if (!go) return false;
  }
  return true;
}

// Minimal test words for binary-source cubefree morphisms, by length then
// lexicographic.
constexpr const char* kMinimalCubefree[12] = {
    "00110",   "01010",   "01100",  "10011",  "10101",  "11001",
    "010110",  "011010",  "100101", "101001", "0110110", "1001001",
};

bool images_squarefree_up_to(const Morphism& m, int max_len) {
  FreenessSpec square(2);
  bool ok = true;
  Word w(m.source());
  walk_powerfree(w, square, max_len, [&](const Word& x) {
    ok = is_powerfree(m.apply(x), square);
    return ok;
  });
  return ok;
}

Word concat_images(const Morphism& m, int b, int c) {
  Word out(m.target());
  for (int i = 0; i < m.image(b).length(); ++i) out.push_back(m.image(b)[i]);
  for (int i = 0; i < m.image(c).length(); ++i) out.push_back(m.image(c)[i]);
  return out;
}

bool match_at(const Word& big, const Word& part, int pos) {
  for (int i = 0; i < part.length(); ++i)
    if (big[pos + i] != part[i]) return false;
  return true;
}

// Shared clause: no letter image may be a factor of another letter's
// image.  Returns a witness sentence on failure.
std::optional<std::string> image_factor_violation(const Morphism& m) {
  for (int a = 0; a < m.source().size(); ++a)
    for (int b = 0; b < m.source().size(); ++b) {
      if (a == b) continue;
      if (m.image(b).contains(m.image(a)))
        return "image of " + std::to_string(a) +
               " is a factor of the image of " + std::to_string(b);
    }
  return std::nullopt;
}

}  // namespace

SufficiencyResult bean_squarefree_sufficient(const Morphism& m) {
  FreenessSpec square(2);
  SufficiencyResult res;
  Word w(m.source());
  bool ok = walk_powerfree(w, square, 3, [&](const Word& x) {
    if (x.empty()) return true;
    Word img = m.apply(x);
    if (is_powerfree(img, square)) return true;
    res.condition = "i";
    res.witness = "image of " + x.str() + " is " + img.str() +
                  ", which contains a square";
    return false;
  });
  if (!ok) return res;
  if (auto witness = image_factor_violation(m)) {
    res.condition = "ii";
    res.witness = *witness;
    return res;
  }
  res.sufficient = true;
  return res;
}

SufficiencyResult bean_kpowerfree_sufficient(const Morphism& m, int k) {
  if (k < 3)
    throw Error(Error::Kind::invalid_argument,
                "the interior-occurrence conditions need k > 2");
  FreenessSpec spec(k);
  SufficiencyResult res;
  Word w(m.source());
  bool ok = walk_powerfree(w, spec, k + 1, [&](const Word& x) {
    if (x.empty()) return true;
    Word img = m.apply(x);
    if (is_powerfree(img, spec)) return true;
    res.condition = "i";
    res.witness = "image of " + x.str() + " is " + img.str() +
                  ", which contains a " + std::to_string(k) + "-power";
    return false;
  });
  if (!ok) return res;
  if (auto witness = image_factor_violation(m)) {
    res.condition = "ii";
    res.witness = *witness;
    return res;
  }
  for (int b = 0; b < m.source().size(); ++b)
    for (int c = 0; c < m.source().size(); ++c) {
      Word bc = concat_images(m, b, c);
      for (int a = 0; a < m.source().size(); ++a) {
        const Word& ia = m.image(a);
        for (int x = 0; x + ia.length() <= bc.length(); ++x) {
          if (!match_at(bc, ia, x)) continue;
          if (x == 0 && a == b) continue;
          if (x + ia.length() == bc.length() && a == c) continue;
          res.condition = "iii";
          res.witness = "image of " + std::to_string(a) +
                        " occurs inside the image of " + std::to_string(b) +
                        std::to_string(c) + " at offset " + std::to_string(x);
          return res;
        }
      }
    }
  res.sufficient = true;
  return res;
}

bool squarefree_uniform_test(const Morphism& m) {
  m.uniform_length();  // only the uniformity check
  return images_squarefree_up_to(m, 3);
}

bool squarefree_ternary_test(const Morphism& m) {
  if (m.source().size() != 3)
    throw Error(Error::Kind::wrong_alphabet,
                "the short-factor test needs a three-letter source");
  return images_squarefree_up_to(m, 5);
}

bool cubefree_binary_test(const Morphism& m) {
  if (m.source().size() != 2)
    throw Error(Error::Kind::wrong_alphabet,
                "the minimal test-set needs a two-letter source");
  if (m.target().size() < 2)
    throw Error(Error::Kind::wrong_alphabet,
                "the minimal test-set needs at least two target letters");
  FreenessSpec cube(3);
  bool ok = true;
  TestSet::minimal_cubefree().for_each([&](const Word& w) {
    ok = is_powerfree(m.apply(w), cube);
    return ok;
  });
  return ok;
}

TestSet TestSet::minimal_cubefree() {
  return TestSet(Kind::minimal_cubefree, 3, Alphabet(2), 7);
}

TestSet TestSet::uniform(int k, Alphabet source) {
  if (k < 3)
    throw Error(Error::Kind::invalid_argument,
                "uniform test sets need k >= 3");
  if (k > 7)
    throw Error(Error::Kind::resource_limit,
                "uniform test sets are supported for k <= 7");
  if (source.size() < 2)
    throw Error(Error::Kind::wrong_alphabet,
                "uniform test sets need at least two source letters");
  if (source.size() > 32)
    throw Error(Error::Kind::resource_limit,
                "uniform test sets are supported for at most 32 letters");
  return TestSet(Kind::uniform, k, source, k * (source.size() + 1) + 1);
}

TestSet TestSet::length_bound(int k, Alphabet source, int bound) {
  if (k < 2)
    throw Error(Error::Kind::invalid_argument, "k must be >= 2");
  if (bound < 0)
    throw Error(Error::Kind::invalid_argument, "bound must be >= 0");
  return TestSet(Kind::length_bound, k, source,
                 bound > 0 ? bound : k * (source.size() + 1) + 1);
}

void TestSet::for_each(const std::function<bool(const Word&)>& visit) const {
  FreenessSpec spec(k_);
  switch (kind_) {
    case Kind::minimal_cubefree:
      for (const char* text : kMinimalCubefree)
        if (!visit(Word::parse(source_, text))) return;
      return;
    // The empty word decides nothing (its image is empty), so the streamed
    // families contain non-empty words only; this matches the published
    // cardinality 26247020 for the four-letter cubefree test-set.
    case Kind::length_bound:
      emit_by_length(source_, spec, 1, bound_, visit);
      return;
    case Kind::uniform: {
      if (!emit_by_length(source_, spec, 1, k_ + 1, visit)) return;
      for (int n = k_ + 2; n <= bound_; ++n) {
        VShape shape = v_shape(k_, source_.size(), n);
        if (shape.nlayouts == 0) continue;
        EmitPolicy policy{visit};
        VWalker<EmitPolicy> walker(spec, shape, source_, policy);
        if (!walker.descend(0)) return;
      }
      return;
    }
  }
}

std::pair<BigInt, int> TestSet::count_and_max_length() const {
  BigInt count = 0;
  int max_len = 0;
  for_each([&](const Word& w) {
    ++count;
    max_len = std::max(max_len, w.length());
    return true;
  });
  return {count, max_len};
}

bool kpowerfree_uniform_test(const Morphism& m, int k, TestMethod method,
                             int length_override) {
  if (k < 3)
    throw Error(Error::Kind::invalid_argument,
                "the uniform morphism test needs k >= 3");
  int ell = m.uniform_length();
  if (ell == 0) return true;  // images are empty; nothing can fail
  FreenessSpec spec(k);
  Alphabet source = m.source();

  if (method == TestMethod::testset) {
    TestSet set = TestSet::uniform(k, source);  // validates k and the source
    Word src(source);
    Word img(m.target());
    if (!verify_images_walk(m, spec, src, img, k + 1, k + 1, ell))
      return false;
    for (int n = k + 2; n <= set.max_word_length(); ++n) {
      VShape shape = v_shape(k, source.size(), n);
      if (shape.nlayouts == 0) continue;
      ImagePolicy policy(m, k, ell, n * ell);
      VWalker<ImagePolicy> walker(spec, shape, source, policy);
      if (!walker.descend(0)) return false;
    }
    return true;
  }

  int bound = length_override > 0 ? length_override
                                  : k * (source.size() + 1) + 1;
  Word src(source);
  Word img(m.target());
  return verify_images_walk(m, spec, src, img, bound, k + 1, ell);
}

bool keranen_binary_uniform_test(const Morphism& m, int k) {
  if (k < 3)
    throw Error(Error::Kind::invalid_argument,
                "the short-word binary test needs k >= 3");
  if (m.source().size() != 2)
    throw Error(Error::Kind::wrong_alphabet,
                "the short-word binary test needs a two-letter source");
  m.uniform_length();
  if (m.image(0) == m.image(1))
    throw Error(Error::Kind::precondition_violation,
                "letter images must differ");
  if (!is_primitive(m.image(0)) || !is_primitive(m.image(1)))
    throw Error(Error::Kind::precondition_violation,
                "letter images must be primitive");
  Word ab(m.source());
  ab.push_back(0);
  ab.push_back(1);
  if (!is_primitive(m.apply(ab)))
    throw Error(Error::Kind::precondition_violation,
                "the image of 01 must be primitive");
  int bound = k <= 6 ? 4 : 2 * (k + 1) / 3;
  FreenessSpec spec(k);
  bool ok = true;
  Word w(m.source());
  walk_powerfree(w, spec, bound, [&](const Word& x) {
    ok = is_powerfree(m.apply(x), spec);
    return ok;
  });
  return ok;
}

KpfCertificate certify_kpowerfree(const Morphism& m, int k) {
  if (k < 2)
    throw Error(Error::Kind::invalid_argument, "k must be >= 2");
  KpfCertificate cert{m, k, "", false};
  if (k == 2) {
    if (m.source().size() == 3) {
      cert.method = "short-factor test (ternary source)";
      cert.verified = squarefree_ternary_test(m);
    } else if (m.is_uniform()) {
      cert.method = "short-factor test (uniform)";
      cert.verified = squarefree_uniform_test(m);
    } else {
      cert.method = "squarefree sufficient conditions";
      cert.verified = bean_squarefree_sufficient(m).sufficient;
    }
    return cert;
  }
  if (k == 3 && m.source().size() == 2 && m.target().size() >= 2) {
    cert.method = "minimal cubefree test-set";
    cert.verified = cubefree_binary_test(m);
    return cert;
  }
  if (bean_kpowerfree_sufficient(m, k).sufficient) {
    cert.method = "interior-occurrence conditions";
    cert.verified = true;
    return cert;
  }
  if (m.is_uniform() && m.source().size() >= 2 &&
      k * (m.source().size() + 1) + 1 <= 16) {
    cert.method = "uniform test-set";
    cert.verified = kpowerfree_uniform_test(m, k);
    return cert;
  }
  cert.method = "inconclusive";
  return cert;
}

}  // namespace powerfree
