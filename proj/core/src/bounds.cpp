#include "powerfree/bounds.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <thread>

#include "powerfree/morphism.hpp"

namespace powerfree {

namespace {

// Shared validation of the receipt + shape for the two morphism bounds.
int checked_uniform_length(const KpfCertificate& cert, int r) {
  if (r < 1)
    throw Error(Error::Kind::invalid_argument, "r must be >= 1");
  if (!cert.verified)
    throw Error(Error::Kind::unverified_morphism,
                "the morphism lacks a verification receipt (method: " +
                    cert.method + ")");
  const Morphism& m = cert.morphism;
  int ell = m.uniform_length();
  if (m.source().size() != r * m.target().size())
    throw Error(Error::Kind::dimension_mismatch,
                "need r * " + std::to_string(m.target().size()) + " = " +
                    std::to_string(m.source().size()) + " source letters");
  if (ell < 2)
    throw Error(Error::Kind::invalid_argument,
                "images must have length >= 2");
  return ell;
}

}  // namespace

EntropyBound lower_bound_from_morphism(const KpfCertificate& cert, int r) {
  int ell = checked_uniform_length(cert, r);
  EntropyBound out;
  out.kind = EntropyBound::Kind::lower;
  out.value = std::log(static_cast<double>(r)) / (ell - 1);
  out.provenance.method = "morphism r=" + std::to_string(r) +
                          " l=" + std::to_string(ell) + ", verified via " +
                          cert.method;
  return out;
}

std::pair<std::vector<BigRat>, EntropyBound> lower_bound_with_frequencies(
    const KpfCertificate& cert, int r) {
  int ell = checked_uniform_length(cert, r);
  const Morphism& m = cert.morphism;
  int s = m.target().size();
  SubstitutionMatrix sm = substitution_matrix(m);

  // Groups are consecutive runs of r source letters; within a group every
  // image must use each target letter equally often.
  for (int i = 0; i < s; ++i)
    for (int j = 1; j < r; ++j)
      for (int b = 0; b < s; ++b) {
        long expect = sm.at(b, i * r);
        long got = sm.at(b, i * r + j);
        if (got != expect)
          throw Error(Error::Kind::column_statistics_violation,
                      "target letter " + std::to_string(b) + " occurs " +
                          std::to_string(got) + " times in the image of " +
                          "source letter " + std::to_string(i * r + j) +
                          " but " + std::to_string(expect) +
                          " times in that of source letter " +
                          std::to_string(i * r) + "; witness (b=" +
                          std::to_string(b) + ", i=" + std::to_string(i) +
                          ", j=0, j'=" + std::to_string(j) + ")");
      }

  std::vector<std::vector<long>> collapsed(s, std::vector<long>(s));
  for (int b = 0; b < s; ++b)
    for (int i = 0; i < s; ++i) collapsed[b][i] = sm.at(b, i * r);
  std::vector<BigRat> freqs = integer_eigenvector(collapsed, ell);

  EntropyBound bound;
  bound.kind = EntropyBound::Kind::lower;
  bound.value = std::log(static_cast<double>(r)) / (ell - 1);
  bound.provenance.method = "morphism with prescribed frequencies r=" +
                            std::to_string(r) + " l=" + std::to_string(ell) +
                            ", verified via " + cert.method;
  std::string note = "frequencies";
  for (const BigRat& f : freqs) {
    note += ' ';
    note += f.str();
  }
  if (r == 2 && ell == 13)
    note += "; a published account quotes ln(2)/6 = 0.115525 for this "
            "construction, twice the generic ln(r)/(l-1) value reported "
            "here";
  bound.provenance.note = note;
  return {std::move(freqs), bound};
}

EntropyBound brinkhuis_bound(int r, int ell) {
  if (r < 1)
    throw Error(Error::Kind::invalid_argument, "r must be >= 1");
  if (ell < 2)
    throw Error(Error::Kind::invalid_argument, "word length must be >= 2");
  EntropyBound out;
  out.kind = EntropyBound::Kind::lower;
  out.value = std::log(static_cast<double>(r)) / (ell - 1);
  out.provenance.method =
      "substitution set r=" + std::to_string(r) + " l=" + std::to_string(ell);
  return out;
}

namespace {

struct BrinkhuisShape {
  int r = 0;
  int ell = 0;
};

BrinkhuisShape checked_shape(const BrinkhuisCandidate& cand) {
  if (static_cast<int>(cand.choices.size()) != cand.alphabet.size())
    throw Error(Error::Kind::dimension_mismatch,
                "need one choice set per letter");
  BrinkhuisShape shape;
  shape.r = cand.choices.empty() ? 0
                                 : static_cast<int>(cand.choices[0].size());
  if (shape.r < 1)
    throw Error(Error::Kind::invalid_argument,
                "choice sets must be non-empty");
  shape.ell = cand.choices[0][0].length();
  if (shape.ell < 1)
    throw Error(Error::Kind::invalid_argument,
                "choice words must be non-empty");
  for (const auto& set : cand.choices) {
    if (static_cast<int>(set.size()) != shape.r)
      throw Error(Error::Kind::invalid_argument,
                  "all choice sets must have the same size");
    for (const Word& w : set) {
      if (w.alphabet() != cand.alphabet)
        throw Error(Error::Kind::wrong_alphabet,
                    "choice words must use the candidate's alphabet");
      if (w.length() != shape.ell)
        throw Error(Error::Kind::non_uniform_input,
                    "all choice words must have the same length");
    }
  }
  return shape;
}

// One worker's exhaustive walk below the root (first letter, first choice).
// Finds the first refutation in DFS order under that root, if any.
struct BrinkhuisWalk {
  const BrinkhuisCandidate& cand;
  const FreenessSpec& spec;
  int max_length;
  int ell;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool out_of_budget = false;
  Word src;
  Word img;
  std::vector<int> assignment;
  std::optional<Word> witness_word;
  std::vector<int> witness_assignment;
  const std::atomic<int>* give_up;  // roots beyond this index may stop
  int root_index;

  BrinkhuisWalk(const BrinkhuisCandidate& c, const FreenessSpec& sp, int maxl,
                int ell_, std::uint64_t budget_,
                const std::atomic<int>* give_up_, int root_index_)
      : cand(c), spec(sp), max_length(maxl), ell(ell_), budget(budget_),
        src(c.alphabet), img(c.alphabet), give_up(give_up_),
        root_index(root_index_) {}

  // false: refuted (witness filled) or over budget; inspect fields.
  bool run() {
    if (give_up && give_up->load(std::memory_order_relaxed) < root_index)
      return true;
    if (src.length() == max_length) return true;
    for (int a = 0; a < cand.alphabet.size(); ++a) {
      if (!extends_powerfree(src, a, spec)) continue;
      src.push_back(a);
      if (!descend_choices(a)) {
        src.pop_back();
        return false;
      }
      src.pop_back();
    }
    return true;
  }

  // src already ends with letter a; try each substitute for it.
  bool descend_choices(int a) {
    for (int c = 0; c < static_cast<int>(cand.choices[a].size()); ++c) {
      if (++nodes > budget) {
        out_of_budget = true;
        return false;
      }
      if (!append_powerfree_checked(img, cand.choices[a][c], spec)) {
        witness_word = src;
        witness_assignment = assignment;
        witness_assignment.push_back(c);
        return false;
      }
      assignment.push_back(c);
      bool go = run();
      assignment.pop_back();
      for (int j = 0; j < ell; ++j) img.pop_back();
      if (!go) return false;
    }
    return true;
  }

  // Entry point for one (first letter, first choice) root.
  bool run_root(int letter, int choice) {
    if (!extends_powerfree(src, letter, spec)) return true;
    src.push_back(letter);
    ++nodes;
    if (!append_powerfree_checked(img, cand.choices[letter][choice], spec)) {
      witness_word = src;
      witness_assignment = {choice};
      return false;
    }
    assignment.push_back(choice);
    return run();
  }
};

}  // namespace

BrinkhuisOutcome verify_brinkhuis(const BrinkhuisCandidate& cand,
                                  const FreenessSpec& spec, int max_length,
                                  const EnumerationOptions& opts) {
  BrinkhuisShape shape = checked_shape(cand);
  if (max_length < 0)
    throw Error(Error::Kind::invalid_argument, "max_length must be >= 0");
  std::uint64_t budget =
      opts.node_budget > 0 ? opts.node_budget : default_node_budget();

  BrinkhuisOutcome out;
  if (max_length == 0) return out;

  // Roots: (first letter, first choice) pairs, walked independently.  When
  // a root refutes, roots before it still finish, so the reported witness
  // is the DFS-first one regardless of scheduling.
  struct Root {
    int letter;
    int choice;
  };
  std::vector<Root> roots;
  for (int a = 0; a < cand.alphabet.size(); ++a)
    for (int c = 0; c < shape.r; ++c) roots.push_back({a, c});

  int workers = opts.workers > 0
                    ? opts.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers > static_cast<int>(roots.size()))
    workers = static_cast<int>(roots.size());

  std::atomic<int> first_refuted{static_cast<int>(roots.size())};
  std::atomic<std::size_t> cursor{0};
  std::vector<std::unique_ptr<BrinkhuisWalk>> walks(roots.size());
  std::uint64_t per_root_budget = budget / roots.size() + 1;

  auto run = [&]() {
    for (;;) {
      std::size_t idx = cursor.fetch_add(1);
      if (idx >= roots.size()) return;
      auto walk = std::make_unique<BrinkhuisWalk>(
          cand, spec, max_length, shape.ell, per_root_budget, &first_refuted,
          static_cast<int>(idx));
      bool done = walk->run_root(roots[idx].letter, roots[idx].choice);
      if (!done && walk->witness_word) {
        int expect = first_refuted.load();
        while (expect > static_cast<int>(idx) &&
               !first_refuted.compare_exchange_weak(expect,
                                                    static_cast<int>(idx))) {
        }
      }
      walks[idx] = std::move(walk);
    }
  };

  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();

  // Roots at or before the refuting one never give up, so their budget
  // flags and the winning witness are worker-count independent.  Budget
  // flags on later roots depend on when the refutation landed; ignore them.
  int refuted_at = first_refuted.load();
  int checked_up_to = refuted_at < static_cast<int>(roots.size())
                          ? refuted_at + 1
                          : static_cast<int>(roots.size());
  for (int i = 0; i < checked_up_to; ++i)
    if (walks[i] && walks[i]->out_of_budget)
      throw Error(Error::Kind::resource_limit,
                  "node budget exhausted before length " +
                      std::to_string(max_length));

  if (refuted_at < static_cast<int>(roots.size())) {
    auto& w = walks[refuted_at];
    out.refuted = true;
    out.word = w->witness_word;
    out.assignment = w->witness_assignment;
    return out;
  }
  out.verified_length = max_length;
  return out;
}

const std::vector<ReferenceConstant>& reference_constants() {
  static const std::vector<ReferenceConstant> table = [] {
    std::vector<ReferenceConstant> t;
    auto add = [&t](std::string key, std::string quantity,
                    std::string language, double value, std::string exact,
                    std::string citation) {
      t.push_back({std::move(key), std::move(quantity), std::move(language),
                   value, std::move(exact), std::move(citation)});
    };
    add("brandenburg-1983-binary-cubefree-entropy-lower", "entropy-lower",
        "binary-cubefree", std::log(2.0) / 9, "ln(2)/9",
        "Brandenburg (1983)");
    add("brandenburg-1983-binary-cubefree-entropy-upper", "entropy-upper",
        "binary-cubefree", std::log(1251.0) / 17, "ln(1251)/17",
        "Brandenburg (1983)");
    add("edlin-1999-binary-cubefree-entropy-upper", "entropy-upper",
        "binary-cubefree", 0.376777, "", "Edlin (1999)");
    add("ochem-reix-2006-binary-cubefree-growth-upper", "growth-rate-upper",
        "binary-cubefree", 1.45758131, "", "Ochem and Reix (2006)");
    add("ochem-reix-2006-binary-cubefree-entropy-upper", "entropy-upper",
        "binary-cubefree", 0.3767784, "", "Ochem and Reix (2006)");
    add("kolpakov-2007-binary-cubefree-entropy-lower", "entropy-lower",
        "binary-cubefree", 0.37676, "", "Kolpakov (2007)");
    add("ochem-2007-binary-cubefree-f0-lower", "frequency-lower",
        "binary-cubefree", 115.0 / 283, "115/283", "Ochem (2007)");
    add("brandenburg-1983-ternary-squarefree-entropy-lower", "entropy-lower",
        "ternary-squarefree", std::log(2.0) / 22, "ln(2)/22",
        "Brandenburg (1983)");
    add("brandenburg-1983-ternary-squarefree-entropy-upper", "entropy-upper",
        "ternary-squarefree", std::log(1172.0) / 22, "ln(1172)/22",
        "Brandenburg (1983)");
    add("noonan-zeilberger-1999-ternary-squarefree-entropy-upper",
        "entropy-upper", "ternary-squarefree", 0.26391, "",
        "Noonan and Zeilberger (1999)");
    add("ochem-2006-ternary-squarefree-entropy-upper", "entropy-upper",
        "ternary-squarefree", 0.263740, "", "Ochem (2006)");
    add("ekhad-zeilberger-1998-ternary-squarefree-entropy-lower",
        "entropy-lower", "ternary-squarefree", std::log(2.0) / 17, "ln(2)/17",
        "Ekhad and Zeilberger (1998)");
    add("sun-2003-ternary-squarefree-entropy-lower", "entropy-lower",
        "ternary-squarefree", std::log(110.0) / 42, "ln(110)/42",
        "Sun (2003)");
    add("kolpakov-2007-ternary-squarefree-entropy-lower", "entropy-lower",
        "ternary-squarefree", 0.26369, "", "Kolpakov (2007)");
    add("tarannikov-2002-ternary-squarefree-fmin-lower", "frequency-lower",
        "ternary-squarefree", 1780.0 / 6481, "1780/6481",
        "Tarannikov (2002)");
    add("tarannikov-2002-ternary-squarefree-fmin-upper", "frequency-upper",
        "ternary-squarefree", 64.0 / 233, "64/233", "Tarannikov (2002)");
    add("ochem-2007-ternary-squarefree-fmin-lower", "frequency-lower",
        "ternary-squarefree", 1000.0 / 3641, "1000/3641", "Ochem (2007)");
    add("ochem-2007-ternary-squarefree-fmin-upper", "frequency-upper",
        "ternary-squarefree", 883.0 / 3215, "883/3215", "Ochem (2007)");
    add("ochem-2007-ternary-squarefree-fmax-upper", "frequency-upper",
        "ternary-squarefree", 255.0 / 653, "255/653", "Ochem (2007)");
    add("khalyavin-2007-ternary-squarefree-fmin-exact", "frequency-exact",
        "ternary-squarefree", 883.0 / 3215, "883/3215", "Khalyavin (2007)");
    return t;
  }();
  return table;
}

std::vector<FrequencyBound> frequency_bounds_from_enumeration_and_morphisms(
    const JointCountTable& joint,
    const std::vector<KpfCertificate>& morphisms) {
  if (joint.n < 1)
    throw Error(Error::Kind::degenerate_input, "need counts at length >= 1");
  BigInt total = joint.total();
  if (total == 0)
    throw Error(Error::Kind::empty_language,
                "no words of length " + std::to_string(joint.n));

  long lo = -1;
  long hi = -1;
  for (long i = 0; i < static_cast<long>(joint.counts.size()); ++i) {
    if (joint.counts[i] == 0) continue;
    if (lo < 0) lo = i;
    hi = i;
  }

  std::vector<FrequencyBound> out;
  FrequencyBound f0;
  f0.quantity = "f(0)";
  f0.lower = BigRat(lo, joint.n);
  f0.upper = BigRat(hi, joint.n);
  f0.provenance.method =
      "letter-0 count range over all words of length " +
      std::to_string(joint.n);
  out.push_back(f0);

  if (morphisms.empty()) return out;

  std::optional<BigRat> best;
  std::string best_method;
  for (const KpfCertificate& cert : morphisms) {
    if (!cert.verified)
      throw Error(Error::Kind::unverified_morphism,
                  "a supplied morphism lacks a verification receipt");
    std::vector<BigRat> freqs = pf_frequencies(cert.morphism);
    for (const BigRat& f : freqs)
      if (!best || f < *best) {
        best = f;
        best_method = cert.method;
      }
  }
  FrequencyBound fmin;
  fmin.quantity = "f_min";
  fmin.lower = f0.lower;
  fmin.upper = best;
  fmin.provenance.method =
      "lower from the length-" + std::to_string(joint.n) +
      " count range; upper realized by iterating a verified morphism (" +
      best_method + ")";
  out.push_back(fmin);
  return out;
}

}  // namespace powerfree
