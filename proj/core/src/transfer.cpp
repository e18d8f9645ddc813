#include "powerfree/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace powerfree {

namespace {

using u64 = std::uint64_t;

// Depth-first walk over the capped-powerfree words up to the window length.
// Counts every level and collects the packed windows in lexicographic order.
struct BuildWalk {
  const FreenessSpec& spec;
  int window;
  int bpl;
  std::size_t budget;
  Word cur;
  u64 key = 0;
  std::vector<u64> levels;
  std::vector<u64> keys;

  BuildWalk(const FreenessSpec& s, Alphabet a, int m, std::size_t budget)
      : spec(s), window(m), bpl(a.bits_per_letter()), budget(budget), cur(a) {
    levels.assign(m + 1, 0);
    levels[0] = 1;
  }

  void run() {
    if (window == 0) {
      keys.push_back(0);
      return;
    }
    descend();
  }

  void descend() {
    int d = cur.length();
    if (d == window) {
      keys.push_back(key);
      return;
    }
    for (int a = 0; a < cur.alphabet().size(); ++a) {
      if (!extends_powerfree(cur, a, spec)) continue;
      if (++levels[d + 1] > budget)
        throw Error(Error::Kind::resource_limit,
                    "transfer system exceeds state budget " +
                        std::to_string(budget));
      cur.push_back(a);
      key |= static_cast<u64>(a) << (d * bpl);
      descend();
      key &= ~(((u64{1} << bpl) - 1) << (d * bpl));
      cur.pop_back();
    }
  }
};

Word unpack_key(u64 key, int length, Alphabet alphabet) {
  Word w(alphabet);
  int bpl = alphabet.bits_per_letter();
  u64 mask = (u64{1} << bpl) - 1;
  for (int i = 0; i < length; ++i)
    w.push_back(static_cast<int>((key >> (i * bpl)) & mask));
  return w;
}

}  // namespace

std::vector<Word> TransferSystem::state_words() const {
  std::vector<Word> out;
  out.reserve(keys_.size());
  for (u64 k : keys_) out.push_back(unpack_key(k, window_, alphabet_));
  return out;
}

TransferSystem build_transfer_system(const FreenessSpec& spec,
                                     Alphabet alphabet,
                                     std::size_t state_budget) {
  if (!spec.period_cap())
    throw Error(Error::Kind::invalid_argument,
                "transfer system requires a period cap");
  int p = *spec.period_cap();
  int m = p > 0 ? spec.k() * p - 1 : 0;
  int bpl = alphabet.bits_per_letter();
  if ((m + 1) * bpl > 64)
    throw Error(Error::Kind::resource_limit,
                "transfer window of " + std::to_string(m + 1) +
                    " letters does not fit in 64 packed bits");

  BuildWalk walk(spec, alphabet, m, state_budget);
  walk.run();

  TransferSystem ts(spec, alphabet);
  ts.window_ = m;
  ts.keys_ = std::move(walk.keys);
  ts.short_counts_.reserve(m);
  for (int n = 0; n < m; ++n) ts.short_counts_.emplace_back(walk.levels[n]);

  // Lookup index ordered by packed key (DFS order is lexicographic by
  // letters, which differs from integer order of the packed form).
  std::vector<std::pair<u64, std::int32_t>> index;
  index.reserve(ts.keys_.size());
  for (std::size_t i = 0; i < ts.keys_.size(); ++i)
    index.emplace_back(ts.keys_[i], static_cast<std::int32_t>(i));
  std::sort(index.begin(), index.end());

  int nletters = alphabet.size();
  ts.transitions_.assign(ts.keys_.size() * nletters, -1);
  for (std::size_t s = 0; s < ts.keys_.size(); ++s) {
    Word w = unpack_key(ts.keys_[s], m, alphabet);
    for (int a = 0; a < nletters; ++a) {
      if (!extends_powerfree(w, a, spec)) continue;
      u64 next = (ts.keys_[s] | (static_cast<u64>(a) << (m * bpl))) >> bpl;
      auto it = std::lower_bound(index.begin(), index.end(),
                                 std::make_pair(next, std::int32_t{-1}));
      // The shifted window is a factor of an admissible word, so it is
      // admissible itself and must be present.
      ts.transitions_[s * nletters + a] = it->second;
    }
  }
  return ts;
}

CountTable series_coefficients(const TransferSystem& ts, int n_max) {
  CountTable table(ts.spec(), ts.alphabet());
  int m = ts.window();
  for (int n = 0; n < m && n <= n_max; ++n)
    table.set(n, ts.short_counts()[n]);
  if (n_max < m) return table;

  int nstates = ts.state_count();
  int nletters = ts.alphabet().size();
  std::vector<BigInt> v(nstates, 1), next(nstates);
  table.set(m, BigInt(nstates));
  for (int n = m + 1; n <= n_max; ++n) {
    std::fill(next.begin(), next.end(), BigInt(0));
    for (int s = 0; s < nstates; ++s) {
      if (v[s] == 0) continue;
      for (int a = 0; a < nletters; ++a) {
        std::int32_t t = ts.transition(s, a);
        if (t >= 0) next[t] += v[s];
      }
    }
    v.swap(next);
    BigInt sum = 0;
    for (const BigInt& x : v) sum += x;
    table.set(n, std::move(sum));
  }
  return table;
}

std::pair<double, double> dominant_growth(const TransferSystem& ts, double tol,
                                          long max_iterations) {
  if (tol <= 0)
    throw Error(Error::Kind::invalid_argument, "tolerance must be positive");
  int nstates = ts.state_count();
  int nletters = ts.alphabet().size();
  std::vector<double> v(nstates, 1.0 / nstates), w(nstates);

  double lambda_prev = -1.0;
  int stable = 0;
  for (long it = 0; it < max_iterations; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    for (int s = 0; s < nstates; ++s) {
      for (int a = 0; a < nletters; ++a) {
        std::int32_t t = ts.transition(s, a);
        if (t >= 0) w[t] += v[s];
      }
    }
    double sum = 0.0;
    for (int s = 0; s < nstates; ++s) {
      w[s] += v[s];  // identity shift
      sum += w[s];
    }
    double lambda = sum - 1.0;  // v is L1-normalized
    for (int s = 0; s < nstates; ++s) v[s] = w[s] / sum;
    if (std::abs(lambda - lambda_prev) <= tol * 0.01) {
      if (++stable >= 3) return {lambda, std::log(lambda)};
    } else {
      stable = 0;
    }
    lambda_prev = lambda;
  }
  throw Error(Error::Kind::non_convergence,
              "power iteration did not settle within " +
                  std::to_string(max_iterations) + " iterations");
}

namespace {

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<u64> first_primes_above_2_61(int count) {
  std::vector<u64> out;
  for (u64 c = (u64{1} << 61) + 1; static_cast<int>(out.size()) < count;
       c += 2) {
    if (is_prime_u64(c)) out.push_back(c);
  }
  return out;
}

// Minimal linear recurrence of the sequence modulo a prime; returns the
// connection polynomial c (c[0] = 1, sum_i c[i] s[n-i] = 0 for n >= L).
std::vector<u64> berlekamp_massey(const std::vector<u64>& s, u64 mod,
                                  int& L_out) {
  std::vector<u64> C{1}, B{1};
  int L = 0, m = 1;
  u64 b = 1;
  for (std::size_t n = 0; n < s.size(); ++n) {
    u64 d = 0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(L) && i < C.size();
         ++i)
      d = (d + mulmod(C[i], s[n - i], mod)) % mod;
    if (d == 0) {
      ++m;
      continue;
    }
    u64 coef = mulmod(d, powmod(b, mod - 2, mod), mod);
    bool grow = 2 * L <= static_cast<int>(n);
    std::vector<u64> keep;
    if (grow) keep = C;
    if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
    for (std::size_t i = 0; i < B.size(); ++i) {
      u64 sub = mulmod(coef, B[i], mod);
      C[i + m] = (C[i + m] + mod - sub) % mod;
    }
    if (grow) {
      L = static_cast<int>(n) + 1 - L;
      B = std::move(keep);
      b = d;
      m = 1;
    } else {
      ++m;
    }
  }
  L_out = L;
  return C;
}

BigInt crt_symmetric(const std::vector<u64>& residues,
                     const std::vector<u64>& primes) {
  BigInt modulus = 1;
  for (u64 p : primes) modulus *= p;
  BigInt x = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    BigInt mi = modulus / primes[i];
    u64 mi_red = BigInt(mi % primes[i]).convert_to<u64>();
    u64 inv = powmod(mi_red, primes[i] - 2, primes[i]);
    x += mi * mulmod(residues[i], inv, primes[i]);
  }
  x %= modulus;
  if (x * 2 > modulus) x -= modulus;
  return x;
}

}  // namespace

RationalFunction exact_generating_function(const TransferSystem& ts,
                                           int degree_bound) {
  if (degree_bound < 1)
    throw Error(Error::Kind::invalid_argument, "degree bound must be >= 1");
  long n_terms = std::max(4L * degree_bound + 20, 64L);
  const long n_cap = 16L * degree_bound + 160;
  int nprimes = 3;
  std::string last_failure = "no recurrence candidate";

  for (int attempt = 0; attempt < 6; ++attempt) {
    CountTable tab = series_coefficients(ts, static_cast<int>(n_terms));
    std::vector<BigInt> series(n_terms + 1);
    for (long n = 0; n <= n_terms; ++n) series[n] = tab.at(static_cast<int>(n));

    std::vector<u64> primes = first_primes_above_2_61(nprimes);
    int L = 0;
    std::vector<std::vector<u64>> images;
    for (u64 p : primes) {
      std::vector<u64> reduced(series.size());
      for (std::size_t i = 0; i < series.size(); ++i) {
        BigInt r = series[i] % p;
        reduced[i] = r.convert_to<u64>();
      }
      int lp = 0;
      images.push_back(berlekamp_massey(reduced, p, lp));
      L = std::max(L, lp);
    }

    // The recurrence must be pinned down by far more data than its order,
    // otherwise the fit is meaningless; extend the series first.
    if (2 * static_cast<long>(L) + 10 > n_terms && n_terms < n_cap) {
      n_terms = std::min(2 * n_terms, n_cap);
      continue;
    }

    std::size_t width = 1;
    for (const auto& c : images) width = std::max(width, c.size());
    std::vector<BigInt> den_coeffs(width);
    for (std::size_t i = 0; i < width; ++i) {
      std::vector<u64> residues(primes.size());
      for (std::size_t j = 0; j < primes.size(); ++j)
        residues[j] = i < images[j].size() ? images[j][i] : 0;
      den_coeffs[i] = crt_symmetric(residues, primes);
    }
    Polynomial den(std::move(den_coeffs));

    if (den.is_zero() || den.coeff(0) != 1) {
      last_failure = "modular images disagree";
      nprimes = std::min(nprimes + 2, 9);
      continue;
    }
    if (den.degree() > degree_bound)
      throw Error(Error::Kind::reconstruction_failure,
                  "denominator degree " + std::to_string(den.degree()) +
                      " exceeds the bound " + std::to_string(degree_bound));

    // num = den * series, truncated below the recurrence order.
    int nnum = std::max(L, 1);
    std::vector<BigInt> num_coeffs(nnum);
    for (int i = 0; i < nnum; ++i) {
      BigInt acc = 0;
      for (int j = 0; j <= den.degree() && j <= i; ++j)
        acc += den.coeff(j) * series[i - j];
      num_coeffs[i] = std::move(acc);
    }
    RationalFunction rf(Polynomial(std::move(num_coeffs)), den);

    long need = std::max<long>(
        n_terms, rf.num().degree() + 3L * degree_bound + 10);
    if (need > n_terms) {
      CountTable more = series_coefficients(ts, static_cast<int>(need));
      series.resize(need + 1);
      for (long n = n_terms + 1; n <= need; ++n)
        series[n] = more.at(static_cast<int>(n));
    }
    std::vector<BigInt> regen = rf.series(static_cast<int>(need) + 1);
    bool ok = true;
    for (long n = 0; n <= need && ok; ++n) ok = regen[n] == series[n];
    if (ok && rf.is_reduced()) return rf;

    last_failure = ok ? "numerator and denominator share a factor"
                      : "recurrence fails on regenerated coefficients";
    nprimes = std::min(nprimes + 2, 9);
    if (n_terms < n_cap) n_terms = std::min(2 * n_terms, n_cap);
  }
  throw Error(Error::Kind::reconstruction_failure,
              "no recurrence of order <= " + std::to_string(degree_bound) +
                  " fits the series (" + last_failure + ")");
}

}  // namespace powerfree
