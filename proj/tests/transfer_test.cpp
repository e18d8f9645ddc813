#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "powerfree/enumerate.hpp"
#include "powerfree/roots.hpp"
#include "powerfree/transfer.hpp"

using namespace powerfree;

TEST_CASE("transfer system requires a period cap") {
  CHECK_THROWS_AS(build_transfer_system(FreenessSpec(3), Alphabet(2)), Error);
}

TEST_CASE("transfer counts agree with direct enumeration") {
  for (int p : {0, 1, 2, 3, 4}) {
    FreenessSpec spec(3, p);
    TransferSystem ts = build_transfer_system(spec, Alphabet(2));
    CountTable direct = count_powerfree(spec, Alphabet(2), 25);
    CountTable walked = series_coefficients(ts, 25);
    for (int n = 0; n <= 25; ++n) CHECK(walked.at(n) == direct.at(n));
  }
  // a squarefree case over three letters
  FreenessSpec spec(2, 2);
  TransferSystem ts = build_transfer_system(spec, Alphabet(3));
  CountTable direct = count_powerfree(spec, Alphabet(3), 12);
  CountTable walked = series_coefficients(ts, 12);
  for (int n = 0; n <= 12; ++n) CHECK(walked.at(n) == direct.at(n));
}

TEST_CASE("capped language equals the full one while the cap is inactive") {
  // periods above n/k never occur, so cap p >= floor(n/k) changes nothing
  CountTable full = count_powerfree(FreenessSpec(3), Alphabet(2), 21);
  TransferSystem ts = build_transfer_system(FreenessSpec(3, 7), Alphabet(2));
  CountTable capped = series_coefficients(ts, 21);
  for (int n = 0; n <= 21; ++n) CHECK(capped.at(n) == full.at(n));
}

TEST_CASE("exact generating functions at small period caps") {
  TransferSystem t0 = build_transfer_system(FreenessSpec(3, 0), Alphabet(2));
  CHECK(exact_generating_function(t0).str() == "num: 1 / den: 1,-2");

  TransferSystem t1 = build_transfer_system(FreenessSpec(3, 1), Alphabet(2));
  CHECK(exact_generating_function(t1).str() ==
        "num: 1,1,1 / den: 1,-1,-1");

  TransferSystem t2 = build_transfer_system(FreenessSpec(3, 2), Alphabet(2));
  CHECK(exact_generating_function(t2).str() ==
        "num: 1,2,3,3,3,3,2 / den: 1,0,-1,-1,-1,-1");
}

TEST_CASE("generating function degrees at caps three and four") {
  TransferSystem t3 = build_transfer_system(FreenessSpec(3, 3), Alphabet(2));
  RationalFunction b3 = exact_generating_function(t3);
  CHECK(b3.num().degree() == 21);
  CHECK(b3.den().degree() == 13);
  CHECK(b3.is_reduced());

  TransferSystem t4 = build_transfer_system(FreenessSpec(3, 4), Alphabet(2));
  RationalFunction b4 = exact_generating_function(t4);
  CHECK(b4.num().degree() == 29);
  CHECK(b4.den().degree() == 17);
  CHECK(b4.is_reduced());
}

TEST_CASE("series of the exact function reproduce the counts") {
  for (int p : {1, 2, 3, 4}) {
    TransferSystem ts = build_transfer_system(FreenessSpec(3, p), Alphabet(2));
    RationalFunction rf = exact_generating_function(ts);
    CountTable direct = count_powerfree(FreenessSpec(3, p), Alphabet(2), 30);
    std::vector<BigInt> s = rf.series(31);
    for (int n = 0; n <= 30; ++n) CHECK(s[n] == direct.at(n));
  }
}

TEST_CASE("dominant growth against known entropies") {
  struct Anchor {
    int p;
    double h;
  };
  for (Anchor a : {Anchor{0, 0.693147}, Anchor{1, 0.481212},
                   Anchor{2, 0.427982}, Anchor{3, 0.394948},
                   Anchor{4, 0.385103}}) {
    TransferSystem ts =
        build_transfer_system(FreenessSpec(3, a.p), Alphabet(2));
    auto [growth, h] = dominant_growth(ts);
    CHECK(h == doctest::Approx(a.h).epsilon(1e-5 / a.h));
    CHECK(growth == doctest::Approx(std::exp(h)).epsilon(1e-9));
  }
}

TEST_CASE("growth matches the dominant pole of the exact function") {
  for (int p : {1, 2, 3, 4}) {
    TransferSystem ts = build_transfer_system(FreenessSpec(3, p), Alphabet(2));
    auto [growth, h_iter] = dominant_growth(ts);
    auto [x_c, h_pole] = dominant_pole(exact_generating_function(ts));
    CHECK(h_iter == doctest::Approx(h_pole).epsilon(1e-8));
    CHECK(x_c == doctest::Approx(1.0 / growth).epsilon(1e-8));
  }
}

TEST_CASE("state budget trips") {
  CHECK_THROWS_AS(build_transfer_system(FreenessSpec(3, 8), Alphabet(2), 10),
                  Error);
}

TEST_CASE("short counts cover lengths below the window") {
  TransferSystem ts = build_transfer_system(FreenessSpec(3, 2), Alphabet(2));
  const std::vector<BigInt>& shorts = ts.short_counts();
  for (std::size_t n = 0; n < shorts.size(); ++n)
    CHECK(shorts[n] == oracle::count_powerfree(2, static_cast<int>(n), 3, 2));
}
