#include "powerfree/polynomial.hpp"

#include <sstream>

namespace powerfree {

namespace {

BigInt gcd_big(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

Polynomial::Polynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::constant(BigInt c) {
  return Polynomial(std::vector<BigInt>{std::move(c)});
}

Polynomial Polynomial::monomial(int degree, BigInt c) {
  std::vector<BigInt> v(degree + 1, BigInt(0));
  v[degree] = std::move(c);
  return Polynomial(std::move(v));
}

BigInt Polynomial::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[i];
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<BigInt> v(std::max(coeffs_.size(), o.coeffs_.size()), BigInt(0));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<BigInt> v(std::max(coeffs_.size(), o.coeffs_.size()), BigInt(0));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  std::vector<BigInt> v(coeffs_.size() + o.coeffs_.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      v[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(v));
}

BigInt Polynomial::content() const {
  BigInt g = 0;
  for (const auto& c : coeffs_) g = gcd_big(g, c);
  return g;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<BigInt> v(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * i;
  return Polynomial(std::move(v));
}

double Polynomial::evaluate(double x) const {
  double acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * x + to_double(*it);
  return acc;
}

std::complex<double> Polynomial::evaluate(std::complex<double> x) const {
  std::complex<double> acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * x + to_double(*it);
  return acc;
}

BigRat Polynomial::evaluate_exact(const BigRat& x) const {
  BigRat acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * x + BigRat(*it);
  return acc;
}

int Polynomial::sign_at_dyadic(const BigInt& a, int t) const {
  // value * 2^(t*deg) = sum c_i a^i 2^(t (deg - i)), an integer
  if (is_zero()) return 0;
  BigInt acc = 0;
  BigInt scale = 1;  // 2^(t * (deg - i)) while scanning down from the top
  BigInt two_t = BigInt(1) << t;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * a + *it * scale;
    scale *= two_t;
  }
  if (acc > 0) return 1;
  if (acc < 0) return -1;
  return 0;
}

std::string Polynomial::coeff_list() const {
  std::ostringstream out;
  if (is_zero()) return "0";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out << ',';
    out << coeffs_[i];
  }
  return out.str();
}

std::string Polynomial::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    BigInt c = coeffs_[i];
    if (first) {
      if (c < 0) out << '-';
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (mag != 1 || i == 0) out << mag;
    if (i >= 1) {
      if (mag != 1) out << '*';
      out << var;
      if (i >= 2) out << '^' << i;
    }
  }
  return out.str();
}

Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b) {
  // Euclid over Q on rational coefficient vectors, then primitive integer.
  std::vector<BigRat> x(a.coeffs().begin(), a.coeffs().end());
  std::vector<BigRat> y(b.coeffs().begin(), b.coeffs().end());
  auto trim = [](std::vector<BigRat>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(x);
  trim(y);
  while (!y.empty()) {
    // x mod y
    while (x.size() >= y.size() && !x.empty()) {
      BigRat f = x.back() / y.back();
      std::size_t off = x.size() - y.size();
      for (std::size_t i = 0; i < y.size(); ++i) x[off + i] -= f * y[i];
      trim(x);
      if (x.size() < y.size()) break;
    }
    std::swap(x, y);
  }
  if (x.empty()) return Polynomial();
  // clear denominators, divide by content
  BigInt lcm = 1;
  for (const auto& c : x) {
    BigInt d = boost::multiprecision::denominator(c);
    lcm = lcm / gcd_big(lcm, d) * d;
  }
  std::vector<BigInt> v;
  v.reserve(x.size());
  for (const auto& c : x)
    v.push_back(
        BigInt(boost::multiprecision::numerator(c) * (lcm / boost::multiprecision::denominator(c))));
  Polynomial g{std::move(v)};
  BigInt cont = g.content();
  if (cont != 0) {
    std::vector<BigInt> w = g.coeffs();
    bool neg = w.back() < 0;
    for (auto& c : w) c /= neg ? -cont : cont;
    g = Polynomial(std::move(w));
  }
  return g;
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero())
    throw Error(Error::Kind::invalid_argument, "zero denominator");
  BigInt g = 0;
  {
    BigInt cn = num_.content(), cd = den_.content();
    g = cn == 0 ? cd : [&] {
      BigInt a = cn < 0 ? BigInt(-cn) : cn, b = cd < 0 ? BigInt(-cd) : cd;
      while (b != 0) {
        BigInt r = a % b;
        a = b;
        b = r;
      }
      return a;
    }();
  }
  if (g > 1) {
    std::vector<BigInt> n = num_.coeffs(), d = den_.coeffs();
    for (auto& c : n) c /= g;
    for (auto& c : d) c /= g;
    num_ = Polynomial(std::move(n));
    den_ = Polynomial(std::move(d));
  }
  if (den_.coeff(0) == -1) {
    std::vector<BigInt> n = num_.coeffs(), d = den_.coeffs();
    for (auto& c : n) c = -c;
    for (auto& c : d) c = -c;
    num_ = Polynomial(std::move(n));
    den_ = Polynomial(std::move(d));
  }
  if (den_.coeff(0) != 1)
    throw Error(Error::Kind::invalid_argument,
                "denominator constant term must be a unit");
}

std::vector<BigInt> RationalFunction::series(int n_terms) const {
  std::vector<BigInt> b(std::max(n_terms, 0));
  for (int n = 0; n < n_terms; ++n) {
    BigInt acc = num_.coeff(n);
    int dmax = std::min(n, den_.degree());
    for (int i = 1; i <= dmax; ++i) acc -= den_.coeff(i) * b[n - i];
    b[n] = acc;
  }
  return b;
}

bool RationalFunction::is_reduced() const {
  return polynomial_gcd(num_, den_).degree() <= 0;
}

std::string RationalFunction::str() const {
  return "num: " + num_.coeff_list() + " / den: " + den_.coeff_list();
}

}  // namespace powerfree
