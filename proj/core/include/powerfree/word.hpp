#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace powerfree {

// Single domain-error type; kind() tells callers what went wrong without
// string matching.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    unsupported_alphabet,
    wrong_alphabet,
    non_uniform_input,
    resource_limit,
    empty_language,
    degenerate_input,
    non_convergence,
    reconstruction_failure,
    no_positive_root,
    non_prolongable_seed,
    non_unique_eigenvector,
    precondition_violation,
    unverified_morphism,
    dimension_mismatch,
    column_statistics_violation,
    invalid_argument,
    io_error,
  };

  Error(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Letters are integer indices 0 .. size()-1.
class Alphabet {
 public:
  explicit Alphabet(int size) : size_(size) {
    if (size < 1)
      throw Error(Error::Kind::invalid_argument, "alphabet size must be >= 1");
    if (size > 256)
      throw Error(Error::Kind::unsupported_alphabet,
                  "alphabet size must be <= 256");
  }
  int size() const { return size_; }

  // Power-of-two width so packed letters never straddle a 64-bit word.
  int bits_per_letter() const {
    if (size_ <= 2) return 1;
    if (size_ <= 4) return 2;
    if (size_ <= 16) return 4;
    return 8;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.size_ == b.size_;
  }
  friend bool operator!=(const Alphabet& a, const Alphabet& b) {
    return !(a == b);
  }

 private:
  int size_;
};

// Which powers are forbidden: factors u^k with 1 <= |u| <= period_cap
// (no cap: any |u|).  period_cap 0 forbids nothing (full language).
class FreenessSpec {
 public:
  explicit FreenessSpec(int k, std::optional<int> period_cap = std::nullopt)
      : k_(k), period_cap_(period_cap) {
    if (k < 2)
      throw Error(Error::Kind::invalid_argument, "power exponent k must be >= 2");
    if (period_cap && *period_cap < 0)
      throw Error(Error::Kind::invalid_argument, "period cap must be >= 0");
  }

  int k() const { return k_; }
  const std::optional<int>& period_cap() const { return period_cap_; }

  // Largest period a forbidden power ending in a word of length n can have.
  int max_period(int n) const {
    int q = n / k_;
    return period_cap_ && *period_cap_ < q ? *period_cap_ : q;
  }

  friend bool operator==(const FreenessSpec& a, const FreenessSpec& b) {
    return a.k_ == b.k_ && a.period_cap_ == b.period_cap_;
  }

 private:
  int k_;
  std::optional<int> period_cap_;
};

// A finite word stored packed, fixed bits per letter, little-endian in
// position: letter i occupies bits [i*b, (i+1)*b).
class Word {
 public:
  explicit Word(Alphabet alphabet) : alphabet_(alphabet) {}
  Word(Alphabet alphabet, const std::string& text);

  const Alphabet& alphabet() const { return alphabet_; }
  int length() const { return len_; }
  bool empty() const { return len_ == 0; }

  int operator[](int i) const {
    int bpl = alphabet_.bits_per_letter();
    std::uint64_t bit = static_cast<std::uint64_t>(i) * bpl;
    return static_cast<int>((bits_[bit >> 6] >> (bit & 63)) &
                            ((std::uint64_t{1} << bpl) - 1));
  }

  void push_back(int letter);
  void pop_back();
  void clear() { bits_.clear(); len_ = 0; }

  Word subword(int pos, int count) const;
  Word prefix(int count) const { return subword(0, count); }
  Word suffix(int count) const { return subword(len_ - count, count); }

  // True when letters [p1, p1+count) equal letters [p2, p2+count).
  bool equal_ranges(int p1, int p2, int count) const;

  bool contains(const Word& factor) const;

  std::string str() const;
  static Word parse(Alphabet alphabet, const std::string& text);

  friend bool operator==(const Word& a, const Word& b);
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  // Lexicographic by letters, prefixes first; alphabet size breaks ties.
  friend bool operator<(const Word& a, const Word& b);

  const std::vector<std::uint64_t>& raw_bits() const { return bits_; }

 private:
  std::uint64_t bits_at(std::uint64_t bitpos, int nbits) const;

  std::vector<std::uint64_t> bits_;
  int len_ = 0;
  Alphabet alphabet_;
};

// No factor u^k with |u| <= period cap.  O(|w|^2 / k) packed comparisons.
bool is_powerfree(const Word& w, const FreenessSpec& spec);

// Given powerfree w, true when w.letter stays powerfree.  Only powers
// ending at the appended position are checked.
bool extends_powerfree(const Word& w, int letter, const FreenessSpec& spec);

// Appends `suffix` one letter at a time, checking after each letter for
// forbidden powers ending there with period >= min_period.  On a hit the
// appended letters are removed again and the return is false.
bool append_powerfree_checked(Word& w, const Word& suffix,
                              const FreenessSpec& spec, int min_period = 1);

// w != v^m for all m >= 2.  The empty word is not primitive.
bool is_primitive(const Word& w);

Word reverse(const Word& w);

// Binary alphabets only: exchanges the two letters.
Word complement(const Word& w);

}  // namespace powerfree
