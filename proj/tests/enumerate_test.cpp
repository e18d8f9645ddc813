#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "oracle.hpp"
#include "powerfree/enumerate.hpp"

using namespace powerfree;

#ifndef POWERFREE_DATA_DIR
#error "POWERFREE_DATA_DIR must point at the bundled data files"
#endif

namespace {
const std::string kDataDir = POWERFREE_DATA_DIR;
}

TEST_CASE("counts match the naive enumeration") {
  struct Case {
    int alphabet, k, n, cap;
  };
  for (Case c : {Case{2, 3, 14, -1}, Case{2, 2, 12, -1}, Case{3, 2, 10, -1},
                 Case{2, 3, 14, 1}, Case{2, 3, 14, 3}, Case{4, 2, 7, -1}}) {
    FreenessSpec spec = c.cap < 0 ? FreenessSpec(c.k)
                                  : FreenessSpec(c.k, c.cap);
    CountTable table = count_powerfree(spec, Alphabet(c.alphabet), c.n);
    for (int n = 0; n <= c.n; ++n)
      CHECK(table.at(n) == oracle::count_powerfree(c.alphabet, n, c.k, c.cap));
  }
}

TEST_CASE("counts do not depend on the worker count") {
  FreenessSpec spec(3);
  Alphabet binary(2);
  EnumerationOptions one;
  one.workers = 1;
  EnumerationOptions four;
  four.workers = 4;
  four.partition_depth = 7;
  CountTable a = count_powerfree(spec, binary, 22, one);
  CountTable b = count_powerfree(spec, binary, 22, four);
  CHECK(a.counts() == b.counts());
  CHECK(a.at(22) == 11320);
}

TEST_CASE("published anchors at moderate length") {
  CountTable table = count_powerfree(FreenessSpec(3), Alphabet(2), 24);
  CHECK(table.at(0) == 1);
  CHECK(table.at(1) == 2);
  CHECK(table.at(12) == 254);
  CHECK(table.at(20) == 5324);
  CHECK(table.at(24) == 24054);
}

TEST_CASE("node budget trips") {
  EnumerationOptions opts;
  opts.node_budget = 100;
  CHECK_THROWS_AS(count_powerfree(FreenessSpec(3), Alphabet(2), 30, opts),
                  Error);
}

TEST_CASE("joint counts: totals, symmetry, naive agreement") {
  FreenessSpec spec(3);
  Alphabet binary(2);
  for (int n : {5, 9, 12}) {
    JointCountTable joint = count_joint(spec, binary, n);
    REQUIRE(static_cast<int>(joint.counts.size()) == n + 1);
    std::map<int, long> naive;
    long total = 0;
    for (const std::string& s : oracle::powerfree_strings(2, n, 3)) {
      ++naive[static_cast<int>(std::count(s.begin(), s.end(), '0'))];
      ++total;
    }
    CHECK(joint.total() == total);
    for (int n0 = 0; n0 <= n; ++n0) {
      CHECK(joint.counts[n0] == (naive.count(n0) ? naive[n0] : 0));
      // exchanging the letters is a bijection of the language
      CHECK(joint.counts[n0] == joint.counts[n - n0]);
    }
  }
}

TEST_CASE("joint counts equal plain counts in total") {
  FreenessSpec spec(3);
  Alphabet binary(2);
  JointCountTable joint = count_joint(spec, binary, 16);
  CountTable table = count_powerfree(spec, binary, 16);
  CHECK(joint.total() == table.at(16));
}

TEST_CASE("letter count range") {
  auto [lo, hi] = letter_count_range(FreenessSpec(3), Alphabet(2), 12, 0);
  long naive_lo = 100, naive_hi = -1;
  for (const std::string& s : oracle::powerfree_strings(2, 12, 3)) {
    long c = std::count(s.begin(), s.end(), '0');
    naive_lo = std::min(naive_lo, c);
    naive_hi = std::max(naive_hi, c);
  }
  CHECK(lo == naive_lo);
  CHECK(hi == naive_hi);
}

TEST_CASE("distribution stats on a symmetric table") {
  JointCountTable joint = count_joint(FreenessSpec(3), Alphabet(2), 14);
  FrequencyStats stats = distribution_stats(joint);
  CHECK(stats.n == 14);
  CHECK(stats.mean == BigRat(7));
  CHECK(stats.variance > 0.0);
  CHECK(stats.min_count + stats.max_count == 14);
  double mass = 0.0;
  // g integrates to ~1 by construction: sum of g * (grid step 1/sqrt(n))
  for (const auto& point : stats.scaled_points)
    mass += point.second / std::sqrt(14.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("count fixture loads and matches fresh enumeration") {
  CountTable fixture = load_count_fixture(
      kDataDir + "/binary_cubefree_counts.csv", FreenessSpec(3), Alphabet(2));
  CHECK(fixture.at(80) == BigInt("35070631260904"));
  CHECK(fixture.at(79) == BigInt("24060906866922"));
  CountTable fresh = count_powerfree(FreenessSpec(3), Alphabet(2), 18);
  for (int n = 0; n <= 18; ++n) CHECK(fixture.at(n) == fresh.at(n));
}

TEST_CASE("joint fixture n=80 has the published variance") {
  JointCountTable joint =
      load_joint_fixture(kDataDir + "/binary_cubefree_joint_n80.csv", 80);
  CHECK(joint.total() == BigInt("35070631260904"));
  FrequencyStats stats = distribution_stats(joint);
  CHECK(stats.variance == doctest::Approx(2.124).epsilon(0.001 / 2.124));
  CHECK(stats.min_count == 32);
  CHECK(stats.max_count == 48);
}

TEST_CASE("entropy upper bound from counts") {
  EntropyBound b = entropy_upper_from_count(24, BigInt(24054));
  CHECK(b.kind == EntropyBound::Kind::upper);
  CHECK(b.value == doctest::Approx(std::log(24054.0) / 24).epsilon(1e-12));
}

TEST_CASE("asymptotic fit recovers a pure exponential") {
  CountTable table(FreenessSpec(3), Alphabet(2));
  // counts A / x_c^n with A = 3, x_c = 1/2
  for (int n = 5; n <= 30; ++n)
    table.set(n, BigInt(3) * (BigInt(1) << n));
  auto [amplitude, x_c] = fit_asymptotics(table, 5, 30);
  CHECK(amplitude == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(x_c == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("csv writers: formats and labels") {
  CountTable table(FreenessSpec(3), Alphabet(2));
  table.set(0, 1);
  table.set(1, 2);
  std::ostringstream plain, labeled;
  write_counts_csv(plain, table);
  CHECK(plain.str() == "0,1\n1,2\n");
  write_counts_csv(labeled, table, "source=fixture");
  CHECK(labeled.str() == "0,1,source=fixture\n1,2,source=fixture\n");

  JointCountTable joint;
  joint.n = 2;
  joint.counts = {BigInt(0), BigInt(2), BigInt(1)};
  std::ostringstream js;
  write_joint_csv(js, joint);
  CHECK(js.str() == "2,1,2\n2,2,1\n");
}
