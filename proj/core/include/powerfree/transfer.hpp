#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "powerfree/enumerate.hpp"
#include "powerfree/polynomial.hpp"
#include "powerfree/word.hpp"

namespace powerfree {

// Sliding-window automaton for a language with period cap p: a power with
// period <= p spans at most k*p letters, so the window holds the last
// k*p - 1 letters.  States are the admissible windows; appending a letter
// either rejects or shifts the window by one.  Walk counts from the uniform
// start distribution over states give the exact word counts.
class TransferSystem {
 public:
  const FreenessSpec& spec() const { return spec_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int window() const { return window_; }  // k*p - 1 (0 when p = 0)
  int state_count() const { return static_cast<int>(keys_.size()); }

  // States in lexicographic order, as words of length window().
  std::vector<Word> state_words() const;

  // Next state index, or -1 when the extended window contains a power.
  std::int32_t transition(int state, int letter) const {
    return transitions_[static_cast<std::size_t>(state) * alphabet_.size() +
                        letter];
  }

  // Exact counts for the lengths shorter than the window.
  const std::vector<BigInt>& short_counts() const { return short_counts_; }

 private:
  TransferSystem(FreenessSpec spec, Alphabet alphabet)
      : spec_(spec), alphabet_(alphabet) {}
  friend TransferSystem build_transfer_system(const FreenessSpec&, Alphabet,
                                              std::size_t);

  FreenessSpec spec_;
  Alphabet alphabet_;
  int window_ = 0;
  std::vector<std::uint64_t> keys_;  // packed state words, ascending
  std::vector<std::int32_t> transitions_;  // state * |alphabet| + letter
  std::vector<BigInt> short_counts_;
};

// Requires a period-capped FreenessSpec (the unrestricted language has no
// finite window).  Throws resource_limit when the state count exceeds the
// budget or the window does not fit in one packed 64-bit word.
TransferSystem build_transfer_system(const FreenessSpec& spec,
                                     Alphabet alphabet,
                                     std::size_t state_budget = 400000);

// Exact counts for lengths 0..n_max by iterating the transition table.
CountTable series_coefficients(const TransferSystem& ts, int n_max);

// Spectral radius of the transition matrix by power iteration (shifted by
// the identity so periodicity cannot stall convergence) and its logarithm.
// Stops once the growth estimate moves by at most tol/100 over three
// consecutive iterations.
std::pair<double, double> dominant_growth(const TransferSystem& ts,
                                          double tol = 1e-9,
                                          long max_iterations = 200000);

// Exact rational generating function of the counts: the minimal integer
// recurrence is recovered from the series (Berlekamp-Massey modulo several
// 61-bit primes, then Chinese remaindering; the integer lift is valid
// because the canonical denominator has den(0) = 1 and integer
// coefficients), and the result is verified against freshly generated
// coefficients well past the recurrence order.  degree_bound limits the
// accepted denominator degree, not the transient length.
RationalFunction exact_generating_function(const TransferSystem& ts,
                                           int degree_bound = 64);

}  // namespace powerfree
