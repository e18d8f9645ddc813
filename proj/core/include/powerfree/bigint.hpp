#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

namespace powerfree {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline double to_double(const BigRat& x) { return x.convert_to<double>(); }

// Natural log of a positive integer of any size.
inline double log_big(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  unsigned bits = boost::multiprecision::msb(x);
  if (bits <= 900) return std::log(to_double(x));
  BigInt top = x >> (bits - 64);
  return std::log(to_double(top)) + (bits - 64) * std::log(2.0);
}

}  // namespace powerfree
