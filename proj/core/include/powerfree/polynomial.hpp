#pragma once

#include <complex>
#include <string>
#include <vector>

#include "powerfree/bigint.hpp"
#include "powerfree/word.hpp"

namespace powerfree {

// Dense integer polynomial, coefficients ascending by degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<BigInt> coeffs);
  static Polynomial constant(BigInt c);
  static Polynomial monomial(int degree, BigInt c);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  BigInt coeff(int i) const;
  const std::vector<BigInt>& coeffs() const { return coeffs_; }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  BigInt content() const;  // gcd of coefficients; 0 for the zero polynomial
  Polynomial derivative() const;

  double evaluate(double x) const;
  std::complex<double> evaluate(std::complex<double> x) const;
  BigRat evaluate_exact(const BigRat& x) const;
  // Sign of the value at the dyadic rational a / 2^t, computed exactly.
  int sign_at_dyadic(const BigInt& a, int t) const;

  std::string coeff_list() const;                       // "1,-1,-1"
  std::string str(const std::string& var = "x") const;  // "1 - x - x^2"

 private:
  std::vector<BigInt> coeffs_;  // empty = zero; back() != 0 otherwise
};

// gcd over Q, returned as a primitive integer polynomial (positive leading
// coefficient); gcd(0, 0) = 0.
Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b);

// num/den with integer coefficients, gcd(num, den) trivial by construction
// of the callers, den(0) = 1.
class RationalFunction {
 public:
  RationalFunction(Polynomial num, Polynomial den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  // First n_terms power-series coefficients, exact.
  std::vector<BigInt> series(int n_terms) const;

  bool is_reduced() const;  // gcd(num, den) constant

  // "num: 1,1,1 / den: 1,-1,-1"
  std::string str() const;

 private:
  Polynomial num_, den_;
};

}  // namespace powerfree
