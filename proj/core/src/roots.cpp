#include "powerfree/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "powerfree/word.hpp"

namespace powerfree {

namespace {

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

std::pair<double, double> dominant_pole(const RationalFunction& rf) {
  const Polynomial& den = rf.den();
  // den(0) = 1 by canonical form, so the sign at the left end is positive.
  constexpr int kGridBits = 13;  // 8192 cells per unit, scan (0, 2]
  int prev_sign = 1;
  for (BigInt i = 1; i <= (2 << kGridBits); ++i) {
    int s = den.sign_at_dyadic(i, kGridBits);
    if (s == 0) {
      double x = std::ldexp(i.convert_to<double>(), -kGridBits);
      return {x, -std::log(x)};
    }
    if (s != prev_sign) {
      // Bisect [a/2^t, (a+1)/2^t]; keep the end signs opposite.
      BigInt a = i - 1;
      int t = kGridBits;
      int left_sign = prev_sign;
      while (t < 53) {
        BigInt mid = a * 2 + 1;
        int ms = den.sign_at_dyadic(mid, t + 1);
        if (ms == 0) {
          double x = std::ldexp(mid.convert_to<double>(), -(t + 1));
          return {x, -std::log(x)};
        }
        a = ms == left_sign ? mid : a * 2;
        ++t;
      }
      double x = std::ldexp(a.convert_to<double>() + 0.5, -t);
      return {x, -std::log(x)};
    }
    prev_sign = s;
  }
  throw Error(Error::Kind::no_positive_root,
              "denominator has no root in (0, 2]");
}

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

cplx eval(const std::vector<cplx>& c, cplx z) {
  cplx r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * z + c[i];
  return r;
}

// Sum |c_i| |z|^i, the scale against which a residual is negligible.
double eval_scale(const std::vector<cplx>& c, cplx z) {
  double az = std::abs(z), r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * az + std::abs(c[i]);
  return r;
}

}  // namespace

PoleSet all_poles(const RationalFunction& rf, double tol) {
  if (tol <= 0)
    throw Error(Error::Kind::invalid_argument, "tolerance must be positive");
  const Polynomial& den = rf.den();
  int deg = den.degree();
  if (deg < 1)
    throw Error(Error::Kind::degenerate_input,
                "denominator is constant, no poles");

  std::vector<cplx> c(deg + 1), dc(deg);
  for (int i = 0; i <= deg; ++i) c[i] = den.coeff(i).convert_to<double>();
  for (int i = 1; i <= deg; ++i) dc[i - 1] = c[i] * static_cast<double>(i);

  // Start radius from the geometric mean of the root moduli, |c0/cd|^(1/n).
  double radius = std::pow(std::abs(c[0]) / std::abs(c[deg]), 1.0 / deg);
  if (!(radius > 0) || !std::isfinite(radius)) radius = 1.0;

  std::vector<cplx> z(deg);
  bool converged = false;
  for (int restart = 0; restart < 4 && !converged; ++restart) {
    std::mt19937 rng(12345 + 1000 * restart);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (int j = 0; j < deg; ++j) {
      double angle = 2.0 * kPi * (j + 0.25) / deg + 0.5 + jitter(rng);
      double r = radius * (1.0 + jitter(rng));
      z[j] = std::polar(r, angle);
    }
    for (int it = 0; it < 800; ++it) {
      double worst = 0.0;
      for (int j = 0; j < deg; ++j) {
        cplx pj = eval(c, z[j]);
        cplx dj = eval(dc, z[j]);
        if (std::abs(dj) == 0.0) {
          z[j] += cplx(1e-8 * (1 + jitter(rng)), 1e-8 * (1 + jitter(rng)));
          worst = 1.0;
          continue;
        }
        cplx w = pj / dj;
        cplx s = 0.0;
        for (int i = 0; i < deg; ++i)
          if (i != j) s += 1.0 / (z[j] - z[i]);
        cplx corr = w / (1.0 - w * s);
        z[j] -= corr;
        worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[j])));
      }
      if (worst <= std::min(tol, 1e-13)) {
        converged = true;
        break;
      }
      if (worst <= tol) {
        // Steps can stagnate above machine precision at a multiple root;
        // accept once every residual is negligible against the coefficients.
        bool small = true;
        for (int j = 0; j < deg && small; ++j)
          small = std::abs(eval(c, z[j])) <= 1e-13 * eval_scale(c, z[j]);
        if (small) {
          converged = true;
          break;
        }
      }
    }
  }
  if (!converged)
    throw Error(Error::Kind::non_convergence,
                "simultaneous root iteration stalled");

  // Merge numerically coincident roots into multiplicity clusters.  An
  // m-fold root is only located to roughly the size of its Newton
  // correction |p/p'| (the iteration stalls there), so that estimate
  // widens the merge radius.  Near a multiple root the computed residual
  // sits at the Horner rounding floor and can round to almost anything
  // below it, so the residual is clamped from below by deg*eps*scale;
  // for simple well-conditioned roots |p'| is order one and the radius
  // stays at 10*tol.
  std::vector<double> err(deg, 0.0);
  for (int j = 0; j < deg; ++j) {
    double dj = std::abs(eval(dc, z[j]));
    double pj = std::abs(eval(c, z[j])) +
                2.22e-16 * deg * eval_scale(c, z[j]);
    err[j] = dj > 0.0 ? deg * pj / dj : 10.0 * tol;
  }
  std::vector<int> owner(deg, -1);
  std::vector<int> first(deg, -1);  // first member of each cluster
  PoleSet out;
  for (int j = 0; j < deg; ++j) {
    int hit = -1;
    for (std::size_t r = 0; r < out.roots.size() && hit < 0; ++r) {
      double radius = 10.0 * tol + 4.0 * (err[j] + err[first[r]]);
      if (std::abs(z[j] - out.roots[r].value) <= radius)
        hit = static_cast<int>(r);
    }
    if (hit < 0) {
      first[out.roots.size()] = j;
      out.roots.push_back({z[j], 1});
      owner[j] = static_cast<int>(out.roots.size()) - 1;
    } else {
      ++out.roots[hit].multiplicity;
      owner[j] = hit;
    }
  }
  // Cluster centers: mean of members.
  {
    std::vector<cplx> sum(out.roots.size(), 0.0);
    for (int j = 0; j < deg; ++j) sum[owner[j]] += z[j];
    for (std::size_t r = 0; r < out.roots.size(); ++r)
      out.roots[r].value = sum[r] / static_cast<double>(out.roots[r].multiplicity);
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const PoleSet::Root& a, const PoleSet::Root& b) {
              if (std::abs(a.value) != std::abs(b.value))
                return std::abs(a.value) < std::abs(b.value);
              if (a.value.real() != b.value.real())
                return a.value.real() < b.value.real();
              return a.value.imag() < b.value.imag();
            });

  double worst_residual = 0.0;
  for (const auto& r : out.roots)
    worst_residual = std::max(worst_residual, std::abs(eval(c, r.value)));
  out.residual_tolerance = worst_residual * 2.0 + 1e-300;
  return out;
}

void write_poles_csv(std::ostream& out, const PoleSet& poles) {
  for (const auto& r : poles.roots)
    out << fmt_real(r.value.real()) << ',' << fmt_real(r.value.imag()) << ','
        << r.multiplicity << '\n';
}

}  // namespace powerfree
