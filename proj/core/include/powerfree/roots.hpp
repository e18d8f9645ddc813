#pragma once

#include <complex>
#include <iosfwd>
#include <utility>
#include <vector>

#include "powerfree/polynomial.hpp"

namespace powerfree {

struct PoleSet {
  struct Root {
    std::complex<double> value;
    int multiplicity = 1;
  };
  std::vector<Root> roots;  // multiplicities sum to the denominator degree
  // Upper bound on |den(value)| over the listed roots, as achieved by the
  // iteration (absolute, so it scales with the coefficient size).
  double residual_tolerance = 0.0;
};

// Smallest positive real root of the denominator: located by a sign scan on
// a dyadic grid over (0, 2], then bisected with exact integer sign
// evaluations down to an interval below 1e-12.  Returns (x_c, -ln x_c).
std::pair<double, double> dominant_pole(const RationalFunction& rf);

// All complex denominator roots by Aberth simultaneous iteration with
// seeded restarts; numerically coincident roots are merged into one entry
// with their multiplicity (the merge radius is 10*tol widened by the
// accuracy the iteration can reach at a multiple root).  tol controls the
// relative step size at convergence.
PoleSet all_poles(const RationalFunction& rf, double tol = 1e-10);

// One row per root: re,im,multiplicity
void write_poles_csv(std::ostream& out, const PoleSet& poles);

}  // namespace powerfree
