#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "powerfree/bigint.hpp"
#include "powerfree/bound_types.hpp"
#include "powerfree/word.hpp"

namespace powerfree {

struct EnumerationOptions {
  int workers = 0;               // 0: hardware concurrency
  std::uint64_t node_budget = 0; // 0: default (env POWERFREE_BUDGET overrides)
  int partition_depth = 12;      // subtree roots handed to workers
};

std::uint64_t default_node_budget();

// Exact counts by length for one powerfree language.
class CountTable {
 public:
  CountTable(FreenessSpec spec, Alphabet alphabet)
      : spec_(spec), alphabet_(alphabet) {}

  const FreenessSpec& spec() const { return spec_; }
  const Alphabet& alphabet() const { return alphabet_; }

  bool contains(int n) const { return counts_.count(n) != 0; }
  const BigInt& at(int n) const;
  void set(int n, BigInt value) { counts_[n] = std::move(value); }
  int max_n() const { return counts_.empty() ? -1 : counts_.rbegin()->first; }
  const std::map<int, BigInt>& counts() const { return counts_; }

 private:
  FreenessSpec spec_;
  Alphabet alphabet_;
  std::map<int, BigInt> counts_;
};

// Counts of length-n words by number of occurrences of letter 0.
struct JointCountTable {
  int n = 0;
  std::vector<BigInt> counts;  // index: occurrences of letter 0, size n+1
  BigInt total() const;
};

struct FrequencyStats {
  int n = 0;
  BigRat mean;        // exact mean of the letter-0 count
  double variance = 0.0;
  long min_count = 0; // smallest letter-0 count with a nonzero entry
  long max_count = 0;
  // (x, g) with x = e/sqrt(n), g = sqrt(n) * b(n, n/2 + e) / b(n),
  // e the offset of the letter-0 count from n/2; nonzero entries only.
  std::vector<std::pair<double, double>> scaled_points;
};

// Counts of powerfree words of each length 0..n_max.  Parallel subtree
// enumeration; the result does not depend on the worker count.
CountTable count_powerfree(const FreenessSpec& spec, Alphabet alphabet,
                           int n_max, const EnumerationOptions& opts = {});

// Binary alphabets: joint counts (length n, letter-0 occurrences).
JointCountTable count_joint(const FreenessSpec& spec, Alphabet alphabet, int n,
                            const EnumerationOptions& opts = {});

// Smallest and largest occurrence count of `letter` over words of length n.
std::pair<long, long> letter_count_range(const FreenessSpec& spec,
                                         Alphabet alphabet, int n, int letter,
                                         const EnumerationOptions& opts = {});

FrequencyStats distribution_stats(const JointCountTable& table);

// Least-squares slope of variance against n.
double variance_slope(const std::vector<FrequencyStats>& stats);

// ln(count)/n, an entropy upper bound by submultiplicativity.
EntropyBound entropy_upper_from_count(int n, const BigInt& count);

// Least-squares fit ln b(n) = ln A - n ln x_c over window [n_lo, n_hi];
// returns (A, x_c).  x_c < 1 for growing counts; 1/x_c is the growth rate.
std::pair<double, double> fit_asymptotics(const CountTable& table, int n_lo,
                                          int n_hi);

// CSV surfaces.  Row formats: counts "n,count"; joint "n,n0,count";
// stats "n,variance,min,max"; scaled "x,g".  No headers.
void write_counts_csv(std::ostream& out, const CountTable& table,
                      const std::string& source_label = "");
void write_joint_csv(std::ostream& out, const JointCountTable& table,
                     const std::string& source_label = "");
void write_stats_csv(std::ostream& out, const std::vector<FrequencyStats>& rows);
void write_scaled_csv(std::ostream& out, const FrequencyStats& stats);

// Fixture loaders; file format identical to the CSV output.
CountTable load_count_fixture(const std::string& path, FreenessSpec spec,
                              Alphabet alphabet);
JointCountTable load_joint_fixture(const std::string& path, int n);

}  // namespace powerfree
