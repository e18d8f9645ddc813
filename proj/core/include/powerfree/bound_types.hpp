#pragma once

#include <optional>
#include <string>

#include "powerfree/bigint.hpp"

namespace powerfree {

// Where a bound came from: a construction in this library, or a published
// constant (then `citation` holds the registry key).
struct Provenance {
  std::string method;                 // e.g. "morphism r=2 l=9", "count n=80"
  std::optional<std::string> citation;
  std::optional<std::string> note;    // surfaced caveats, printed with the bound
};

struct EntropyBound {
  enum class Kind { lower, upper };
  Kind kind;
  double value = 0.0;  // nats
  Provenance provenance;
};

// Bounds on a letter frequency; endpoints exact rationals.
struct FrequencyBound {
  std::string quantity;  // e.g. "f(0)", "f_min"
  std::optional<BigRat> lower;
  std::optional<BigRat> upper;
  Provenance provenance;
};

}  // namespace powerfree
