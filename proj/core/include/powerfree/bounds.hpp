#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "powerfree/bigint.hpp"
#include "powerfree/bound_types.hpp"
#include "powerfree/enumerate.hpp"
#include "powerfree/testsets.hpp"
#include "powerfree/word.hpp"

namespace powerfree {

// h >= ln(r)/(l-1) on the target language, from a verified l-uniform
// k-powerfree morphism whose source has r times as many letters as its
// target.  Demands the receipt rather than re-verifying.
EntropyBound lower_bound_from_morphism(const KpfCertificate& cert, int r);

// Variant for source letters split into consecutive groups of r: when the
// letter images within each group share their letter statistics, the image
// words all realize the frequencies given by the eigenvector (for the
// uniform length) of the collapsed group matrix, and the same entropy
// bound holds for words with those letter frequencies.
std::pair<std::vector<BigRat>, EntropyBound> lower_bound_with_frequencies(
    const KpfCertificate& cert, int r);

// ln(r)/(l-1), the bound any (k, l, r) substitution set delivers.
EntropyBound brinkhuis_bound(int r, int ell);

// Per-letter choice sets: substituting every letter of a k-powerfree word
// by any member of its set should yield a k-powerfree word.  All words
// share one alphabet and one length.
struct BrinkhuisCandidate {
  Alphabet alphabet;
  std::vector<std::vector<Word>> choices;  // [letter][0..r-1]
};

struct BrinkhuisOutcome {
  bool refuted = false;
  // Exhausted length when not refuted; a bounded certificate, not a proof.
  int verified_length = 0;
  // On refutation: the powerfree source word and the choice made at each
  // of its positions whose substitution contains a power.
  std::optional<Word> word;
  std::vector<int> assignment;
};

// Checks every k-powerfree word up to max_length under every assignment.
// Deterministic: the reported witness does not depend on the worker count.
BrinkhuisOutcome verify_brinkhuis(const BrinkhuisCandidate& cand,
                                  const FreenessSpec& spec, int max_length,
                                  const EnumerationOptions& opts = {});

// Published bounds quoted for context and consistency checks.
struct ReferenceConstant {
  std::string key;       // stable identifier
  std::string quantity;  // entropy-lower, entropy-upper, growth-rate-upper,
                         // frequency-lower, frequency-upper, frequency-exact
  std::string language;  // binary-cubefree | ternary-squarefree
  double value = 0.0;    // nats for entropies
  std::string exact;     // exact form when the source states one
  std::string citation;
};

const std::vector<ReferenceConstant>& reference_constants();

// letter-0 frequency window from the joint counts at one length, plus an
// upper bound on the minimal letter frequency from the fixed points of
// the supplied verified morphisms.
std::vector<FrequencyBound> frequency_bounds_from_enumeration_and_morphisms(
    const JointCountTable& joint,
    const std::vector<KpfCertificate>& morphisms);

}  // namespace powerfree
