#include "powerfree/word.hpp"

#include <algorithm>
#include <sstream>

namespace powerfree {

Word::Word(Alphabet alphabet, const std::string& text) : alphabet_(alphabet) {
  *this = parse(alphabet, text);
}

void Word::push_back(int letter) {
  if (letter < 0 || letter >= alphabet_.size())
    throw Error(Error::Kind::invalid_argument, "letter out of range");
  int bpl = alphabet_.bits_per_letter();
  std::uint64_t bit = static_cast<std::uint64_t>(len_) * bpl;
  std::size_t word = bit >> 6;
  if (word >= bits_.size()) bits_.push_back(0);
  bits_[word] |= static_cast<std::uint64_t>(letter) << (bit & 63);
  ++len_;
}

void Word::pop_back() {
  if (len_ == 0)
    throw Error(Error::Kind::invalid_argument, "pop_back on empty word");
  --len_;
  int bpl = alphabet_.bits_per_letter();
  std::uint64_t bit = static_cast<std::uint64_t>(len_) * bpl;
  bits_[bit >> 6] &= ~(((std::uint64_t{1} << bpl) - 1) << (bit & 63));
}

Word Word::subword(int pos, int count) const {
  if (pos < 0 || count < 0 || pos + count > len_)
    throw Error(Error::Kind::invalid_argument, "subword out of range");
  Word out(alphabet_);
  for (int i = 0; i < count; ++i) out.push_back((*this)[pos + i]);
  return out;
}

std::uint64_t Word::bits_at(std::uint64_t bitpos, int nbits) const {
  std::size_t word = bitpos >> 6;
  int shift = static_cast<int>(bitpos & 63);
  std::uint64_t lo = bits_[word] >> shift;
  if (shift != 0 && word + 1 < bits_.size())
    lo |= bits_[word + 1] << (64 - shift);
  if (nbits == 64) return lo;
  return lo & ((std::uint64_t{1} << nbits) - 1);
}

bool Word::equal_ranges(int p1, int p2, int count) const {
  int bpl = alphabet_.bits_per_letter();
  std::uint64_t b1 = static_cast<std::uint64_t>(p1) * bpl;
  std::uint64_t b2 = static_cast<std::uint64_t>(p2) * bpl;
  std::int64_t nbits = static_cast<std::int64_t>(count) * bpl;
  while (nbits > 0) {
    int take = nbits < 64 ? static_cast<int>(nbits) : 64;
    if (bits_at(b1, take) != bits_at(b2, take)) return false;
    b1 += take;
    b2 += take;
    nbits -= take;
  }
  return true;
}

bool Word::contains(const Word& factor) const {
  if (factor.len_ > len_) return false;
  if (factor.len_ == 0) return true;
  for (int pos = 0; pos + factor.len_ <= len_; ++pos) {
    bool match = true;
    for (int i = 0; i < factor.len_; ++i) {
      if ((*this)[pos + i] != factor[i]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

std::string Word::str() const {
  std::ostringstream out;
  bool digits = alphabet_.size() <= 10;
  for (int i = 0; i < len_; ++i) {
    if (!digits && i > 0) out << ',';
    out << (*this)[i];
  }
  return out.str();
}

Word Word::parse(Alphabet alphabet, const std::string& text) {
  Word out(alphabet);
  if (text.empty()) return out;
  if (text.find(',') != std::string::npos) {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty())
        throw Error(Error::Kind::invalid_argument, "empty letter in word");
      out.push_back(std::stoi(item));
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9')
        throw Error(Error::Kind::invalid_argument,
                    std::string("bad letter '") + c + "' in word");
      out.push_back(c - '0');
    }
  }
  return out;
}

bool operator==(const Word& a, const Word& b) {
  if (a.len_ != b.len_ || a.alphabet_ != b.alphabet_) return false;
  std::size_t used =
      (static_cast<std::size_t>(a.len_) * a.alphabet_.bits_per_letter() + 63) /
      64;
  for (std::size_t i = 0; i < used; ++i)
    if (a.bits_[i] != b.bits_[i]) return false;
  return true;
}

bool operator<(const Word& a, const Word& b) {
  int n = std::min(a.len_, b.len_);
  for (int i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  if (a.len_ != b.len_) return a.len_ < b.len_;
  return a.alphabet_.size() < b.alphabet_.size();
}

bool is_powerfree(const Word& w, const FreenessSpec& spec) {
  int k = spec.k();
  for (int end = k; end <= w.length(); ++end) {
    int maxq = spec.max_period(end);
    for (int q = 1; q <= maxq; ++q) {
      // The kq-suffix ending at `end` has period q iff these ranges agree.
      if (w.equal_ranges(end - k * q, end - (k - 1) * q, (k - 1) * q))
        return false;
    }
  }
  return true;
}

bool extends_powerfree(const Word& w, int letter, const FreenessSpec& spec) {
  int end = w.length() + 1;
  int k = spec.k();
  int maxq = spec.max_period(end);
  for (int q = 1; q <= maxq; ++q) {
    // Period-q power ending at the appended letter: the letter must match
    // the one q back, and the rest of the kq-suffix must have period q.
    if (letter != w[end - 1 - q]) continue;
    int count = (k - 1) * q - 1;
    if (count == 0 || w.equal_ranges(end - k * q, end - k * q + q, count))
      return false;
  }
  return true;
}

bool append_powerfree_checked(Word& w, const Word& suffix,
                              const FreenessSpec& spec, int min_period) {
  if (suffix.alphabet() != w.alphabet())
    throw Error(Error::Kind::wrong_alphabet,
                "appended word has a different alphabet");
  if (min_period < 1) min_period = 1;
  int k = spec.k();
  for (int i = 0; i < suffix.length(); ++i) {
    w.push_back(suffix[i]);
    int end = w.length();
    int maxq = spec.max_period(end);
    for (int q = min_period; q <= maxq; ++q) {
      if (w.equal_ranges(end - k * q, end - (k - 1) * q, (k - 1) * q)) {
        for (int j = 0; j <= i; ++j) w.pop_back();
        return false;
      }
    }
  }
  return true;
}

bool is_primitive(const Word& w) {
  int n = w.length();
  if (n == 0) return false;
  // w = v^m for some m > 1 iff w has period n/p for some prime p | n.
  int rest = n;
  for (int p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    if (w.equal_ranges(0, n / p, n - n / p)) return false;
    while (rest % p == 0) rest /= p;
  }
  if (rest > 1) {
    if (w.equal_ranges(0, n / rest, n - n / rest)) return false;
  }
  return true;
}

Word reverse(const Word& w) {
  Word out(w.alphabet());
  for (int i = w.length() - 1; i >= 0; --i) out.push_back(w[i]);
  return out;
}

Word complement(const Word& w) {
  if (w.alphabet().size() != 2)
    throw Error(Error::Kind::unsupported_alphabet,
                "complement requires a binary alphabet");
  Word out(w.alphabet());
  for (int i = 0; i < w.length(); ++i) out.push_back(1 - w[i]);
  return out;
}

}  // namespace powerfree
