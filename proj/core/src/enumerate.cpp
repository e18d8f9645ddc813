#include "powerfree/enumerate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

namespace powerfree {

namespace {

constexpr int kMaxLen = 255;

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Mutable packed word for the search loops; capacity 256 bits.
struct Buf {
  std::array<std::uint64_t, 4> bits{};
  int len = 0;
};

inline void buf_push(Buf& b, int bpl, int letter) {
  unsigned bit = static_cast<unsigned>(b.len) * bpl;
  b.bits[bit >> 6] |= static_cast<std::uint64_t>(letter) << (bit & 63);
  ++b.len;
}

inline void buf_pop(Buf& b, int bpl, int letter) {
  --b.len;
  unsigned bit = static_cast<unsigned>(b.len) * bpl;
  b.bits[bit >> 6] ^= static_cast<std::uint64_t>(letter) << (bit & 63);
}

inline std::uint64_t bits_at(const std::array<std::uint64_t, 4>& w,
                             unsigned pos, int n) {
  unsigned word = pos >> 6;
  unsigned s = pos & 63;
  std::uint64_t lo = w[word] >> s;
  if (s != 0 && word + 1 < 4) lo |= w[word + 1] << (64 - s);
  return n >= 64 ? lo : (lo & ((std::uint64_t{1} << n) - 1));
}

// Small = the whole word fits in bits[0]; ranges then never straddle words.
template <bool Small>
inline bool suffix_periodic(const Buf& b, int bpl, int k, int q, int e) {
  int nb = (k - 1) * q * bpl;
  unsigned b1 = static_cast<unsigned>(e - k * q) * bpl;
  unsigned b2 = static_cast<unsigned>(e - (k - 1) * q) * bpl;
  if constexpr (Small) {
    std::uint64_t w = b.bits[0];
    return (((w >> b1) ^ (w >> b2)) & ((std::uint64_t{1} << nb) - 1)) == 0;
  } else {
    while (nb > 0) {
      int take = nb < 64 ? nb : 64;
      if (bits_at(b.bits, b1, take) != bits_at(b.bits, b2, take)) return false;
      b1 += take;
      b2 += take;
      nb -= take;
    }
    return true;
  }
}

template <bool Small>
inline bool push_if_powerfree(Buf& b, int bpl, int k, int cap, int letter) {
  buf_push(b, bpl, letter);
  int e = b.len;
  int maxq = e / k;
  if (cap >= 0 && cap < maxq) maxq = cap;
  for (int q = 1; q <= maxq; ++q) {
    if (suffix_periodic<Small>(b, bpl, k, q, e)) {
      buf_pop(b, bpl, letter);
      return false;
    }
  }
  return true;
}

struct Aborted {};

// Node budget shared across workers; flushed in batches.
struct Limits {
  std::atomic<std::uint64_t>* total = nullptr;
  std::atomic<bool>* abort = nullptr;
  std::uint64_t budget = 0;
  std::uint64_t pending = 0;

  inline void tick() {
    if (++pending >= 65536) flush();
  }
  void flush() {
    if (pending == 0) return;
    std::uint64_t t =
        total->fetch_add(pending, std::memory_order_relaxed) + pending;
    pending = 0;
    if (t > budget || abort->load(std::memory_order_relaxed)) {
      abort->store(true, std::memory_order_relaxed);
      throw Aborted{};
    }
  }
};

// Depth-first over all powerfree extensions of buf up to length n_max.
// pol.node(len, track) runs once per visited node strictly below the base.
template <bool Small, bool TrackLetter, class Policy>
void walk(Buf& buf, int bpl, int nletters, int k, int cap, int n_max,
          int tracked_letter, int track_init, Limits& lim, Policy& pol) {
  const int base = buf.len;
  if (base >= n_max) return;
  int track = track_init;
  std::array<std::uint8_t, kMaxLen + 1> choice{};
  int a = 0;
  for (;;) {
    if (buf.len < n_max && a < nletters) {
      if (push_if_powerfree<Small>(buf, bpl, k, cap, a)) {
        lim.tick();
        if constexpr (TrackLetter) track += (a == tracked_letter);
        pol.node(buf.len, track);
        choice[buf.len - base] = static_cast<std::uint8_t>(a);
        a = 0;
        continue;
      }
      ++a;
      continue;
    }
    if (buf.len == base) break;
    int last = choice[buf.len - base];
    if constexpr (TrackLetter) track -= (last == tracked_letter);
    buf_pop(buf, bpl, last);
    a = last + 1;
  }
}

struct CountPolicy {
  std::uint64_t* counts;
  inline void node(int len, int) { ++counts[len]; }
};

struct LeafHistPolicy {
  int n;
  std::uint64_t* hist;
  inline void node(int len, int track) {
    if (len == n) ++hist[track];
  }
};

struct LeafRangePolicy {
  int n;
  long mn = std::numeric_limits<long>::max();
  long mx = -1;
  std::uint64_t leaves = 0;
  inline void node(int len, int track) {
    if (len == n) {
      ++leaves;
      mn = std::min(mn, static_cast<long>(track));
      mx = std::max(mx, static_cast<long>(track));
    }
  }
};

struct Task {
  std::array<std::uint64_t, 4> bits;
  int track;
};

struct CollectPolicy {
  int depth;
  const Buf* buf;
  std::vector<Task>* out;
  inline void node(int len, int track) {
    if (len == depth) out->push_back(Task{buf->bits, track});
  }
};

enum class Mode { counts, joint, range };

struct EnumResult {
  std::vector<std::uint64_t> per_len;
  std::vector<std::uint64_t> hist;
  long mn = std::numeric_limits<long>::max();
  long mx = -1;
  std::uint64_t leaves = 0;
};

template <bool Small>
EnumResult enumerate_core(const FreenessSpec& spec, Alphabet alphabet,
                          int n_max, const EnumerationOptions& opts, Mode mode,
                          int tracked_letter) {
  const int bpl = alphabet.bits_per_letter();
  const int nletters = alphabet.size();
  const int k = spec.k();
  const int cap = spec.period_cap() ? *spec.period_cap() : -1;

  std::uint64_t budget =
      opts.node_budget != 0 ? opts.node_budget : default_node_budget();
  int workers = opts.workers > 0
                    ? opts.workers
                    : std::max(1u, std::thread::hardware_concurrency());

  std::atomic<std::uint64_t> total{0};
  std::atomic<bool> abort{false};

  EnumResult res;
  res.per_len.assign(n_max + 1, 0);
  if (mode == Mode::joint) res.hist.assign(n_max + 1, 0);

  const bool track = mode != Mode::counts;

  auto run_serial = [&](int depth, auto& pol) {
    Buf buf;
    Limits lim{&total, &abort, budget, 0};
    try {
      if (track)
        walk<Small, true>(buf, bpl, nletters, k, cap, depth, tracked_letter, 0,
                          lim, pol);
      else
        walk<Small, false>(buf, bpl, nletters, k, cap, depth, tracked_letter,
                           0, lim, pol);
      lim.flush();
    } catch (Aborted&) {
      throw Error(Error::Kind::resource_limit,
                  "enumeration exceeded node budget of " +
                      std::to_string(budget));
    }
  };

  int depth = std::min(opts.partition_depth, n_max);
  if (depth < 0) depth = 0;

  // Serial phase: counts up to the partition depth (or everything when the
  // target is that shallow).
  if (n_max <= depth || workers == 1) {
    // Root node.
    switch (mode) {
      case Mode::counts: res.per_len[0] = 1; break;
      case Mode::joint:
        if (n_max == 0) res.hist[0] = 1;
        break;
      case Mode::range:
        if (n_max == 0) {
          res.leaves = 1;
          res.mn = res.mx = 0;
        }
        break;
    }
    if (mode == Mode::counts) {
      CountPolicy pol{res.per_len.data()};
      run_serial(n_max, pol);
    } else if (mode == Mode::joint) {
      LeafHistPolicy pol{n_max, res.hist.data()};
      run_serial(n_max, pol);
    } else {
      LeafRangePolicy pol{n_max};
      run_serial(n_max, pol);
      res.mn = std::min(res.mn, pol.mn);
      res.mx = std::max(res.mx, pol.mx);
      res.leaves += pol.leaves;
    }
    return res;
  }

  // Pass 1: per-length counts to the partition depth.
  std::vector<std::uint64_t> head(depth + 1, 0);
  head[0] = 1;
  {
    CountPolicy pol{head.data()};
    run_serial(depth, pol);
  }

  // Shrink the partition depth when it would hand out too many subtrees.
  while (depth > 1 && head[depth] > 2'000'000) --depth;

  if (head[depth] == 0) {
    // Language dies out before the partition depth; the head has everything.
    if (mode == Mode::counts)
      std::copy(head.begin(), head.end(), res.per_len.begin());
    return res;
  }

  // Projected total nodes, geometric extrapolation from the head counts.
  {
    double sum = 0;
    for (int i = 0; i <= depth; ++i) sum += static_cast<double>(head[i]);
    double lam = head[depth - 1] > 0 ? static_cast<double>(head[depth]) /
                                           static_cast<double>(head[depth - 1])
                                     : static_cast<double>(nletters);
    double term = static_cast<double>(head[depth]);
    for (int n = depth + 1; n <= n_max && sum <= 1e19; ++n) {
      term *= lam;
      sum += term;
    }
    if (sum > static_cast<double>(budget))
      throw Error(Error::Kind::resource_limit,
                  "projected node count " + fmt_real(sum) +
                      " exceeds budget " + std::to_string(budget));
  }

  // Pass 2: collect the subtree roots.
  std::vector<Task> tasks;
  tasks.reserve(head[depth]);
  {
    Buf buf;
    CollectPolicy pol{depth, &buf, &tasks};
    Limits lim{&total, &abort, budget, 0};
    try {
      walk<Small, true>(buf, bpl, nletters, k, cap, depth, tracked_letter, 0,
                        lim, pol);
    } catch (Aborted&) {
      throw Error(Error::Kind::resource_limit, "enumeration exceeded budget");
    }
  }

  // Parallel phase over subtrees.
  struct WorkerOut {
    std::vector<std::uint64_t> per_len;
    std::vector<std::uint64_t> hist;
    long mn = std::numeric_limits<long>::max();
    long mx = -1;
    std::uint64_t leaves = 0;
  };
  std::vector<WorkerOut> outs(workers);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker_fn = [&](int wi) {
    WorkerOut& out = outs[wi];
    out.per_len.assign(n_max + 1, 0);
    if (mode == Mode::joint) out.hist.assign(n_max + 1, 0);
    Limits lim{&total, &abort, budget, 0};
    try {
      for (;;) {
        std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= tasks.size()) break;
        Buf buf;
        buf.bits = tasks[i].bits;
        buf.len = depth;
        if (mode == Mode::counts) {
          CountPolicy pol{out.per_len.data()};
          walk<Small, false>(buf, bpl, nletters, k, cap, n_max, tracked_letter,
                             tasks[i].track, lim, pol);
        } else if (mode == Mode::joint) {
          LeafHistPolicy pol{n_max, out.hist.data()};
          walk<Small, true>(buf, bpl, nletters, k, cap, n_max, tracked_letter,
                            tasks[i].track, lim, pol);
        } else {
          LeafRangePolicy pol{n_max};
          walk<Small, true>(buf, bpl, nletters, k, cap, n_max, tracked_letter,
                            tasks[i].track, lim, pol);
          out.mn = std::min(out.mn, pol.mn);
          out.mx = std::max(out.mx, pol.mx);
          out.leaves += pol.leaves;
        }
      }
      lim.flush();
    } catch (Aborted&) {
      // flag already set
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
      abort.store(true, std::memory_order_relaxed);
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker_fn, w);
  for (auto& t : threads) t.join();

  if (first_error) std::rethrow_exception(first_error);
  if (abort.load())
    throw Error(Error::Kind::resource_limit,
                "enumeration exceeded node budget of " + std::to_string(budget));

  if (mode == Mode::counts) {
    for (int i = 0; i <= depth; ++i) res.per_len[i] = head[i];
    for (const auto& out : outs)
      for (int i = depth + 1; i <= n_max; ++i) res.per_len[i] += out.per_len[i];
  } else if (mode == Mode::joint) {
    for (const auto& out : outs)
      for (std::size_t i = 0; i < res.hist.size(); ++i)
        res.hist[i] += out.hist[i];
  } else {
    for (const auto& out : outs) {
      res.mn = std::min(res.mn, out.mn);
      res.mx = std::max(res.mx, out.mx);
      res.leaves += out.leaves;
    }
  }
  return res;
}

EnumResult enumerate_dispatch(const FreenessSpec& spec, Alphabet alphabet,
                              int n_max, const EnumerationOptions& opts,
                              Mode mode, int tracked_letter) {
  if (n_max < 0)
    throw Error(Error::Kind::invalid_argument, "n_max must be >= 0");
  if (n_max > kMaxLen)
    throw Error(Error::Kind::resource_limit,
                "word length beyond packed capacity");
  int bpl = alphabet.bits_per_letter();
  if (n_max * bpl > 256)
    throw Error(Error::Kind::resource_limit,
                "word length beyond packed capacity");
  if (n_max * bpl <= 64)
    return enumerate_core<true>(spec, alphabet, n_max, opts, mode,
                                tracked_letter);
  return enumerate_core<false>(spec, alphabet, n_max, opts, mode,
                               tracked_letter);
}

}  // namespace

std::uint64_t default_node_budget() {
  if (const char* env = std::getenv("POWERFREE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw Error(Error::Kind::invalid_argument,
                  "POWERFREE_BUDGET must be a positive integer");
    return v;
  }
  return 2'000'000'000ULL;
}

const BigInt& CountTable::at(int n) const {
  auto it = counts_.find(n);
  if (it == counts_.end())
    throw Error(Error::Kind::invalid_argument,
                "no count stored for n=" + std::to_string(n));
  return it->second;
}

BigInt JointCountTable::total() const {
  BigInt t = 0;
  for (const auto& c : counts) t += c;
  return t;
}

CountTable count_powerfree(const FreenessSpec& spec, Alphabet alphabet,
                           int n_max, const EnumerationOptions& opts) {
  EnumResult r =
      enumerate_dispatch(spec, alphabet, n_max, opts, Mode::counts, 0);
  CountTable table(spec, alphabet);
  for (int n = 0; n <= n_max; ++n) table.set(n, BigInt(r.per_len[n]));
  return table;
}

JointCountTable count_joint(const FreenessSpec& spec, Alphabet alphabet, int n,
                            const EnumerationOptions& opts) {
  if (alphabet.size() != 2)
    throw Error(Error::Kind::unsupported_alphabet,
                "joint counts require a binary alphabet");
  EnumResult r = enumerate_dispatch(spec, alphabet, n, opts, Mode::joint, 0);
  JointCountTable table;
  table.n = n;
  table.counts.assign(n + 1, BigInt(0));
  for (int i = 0; i <= n; ++i) table.counts[i] = BigInt(r.hist[i]);
  return table;
}

std::pair<long, long> letter_count_range(const FreenessSpec& spec,
                                         Alphabet alphabet, int n, int letter,
                                         const EnumerationOptions& opts) {
  if (letter < 0 || letter >= alphabet.size())
    throw Error(Error::Kind::invalid_argument, "letter out of range");
  EnumResult r = enumerate_dispatch(spec, alphabet, n, opts, Mode::range, letter);
  if (r.leaves == 0)
    throw Error(Error::Kind::empty_language,
                "no powerfree words of length " + std::to_string(n));
  return {r.mn, r.mx};
}

FrequencyStats distribution_stats(const JointCountTable& table) {
  BigInt total = table.total();
  if (total == 0)
    throw Error(Error::Kind::empty_language,
                "no powerfree words of length " + std::to_string(table.n));
  FrequencyStats stats;
  stats.n = table.n;
  BigInt wsum = 0, sqsum = 0;
  long mn = -1, mx = -1;
  for (int n0 = 0; n0 <= table.n; ++n0) {
    const BigInt& c = table.counts[n0];
    if (c == 0) continue;
    wsum += c * n0;
    sqsum += c * n0 * n0;
    if (mn < 0) mn = n0;
    mx = n0;
  }
  stats.mean = BigRat(wsum, total);
  BigRat variance = BigRat(sqsum, total) - stats.mean * stats.mean;
  stats.variance = to_double(variance);
  stats.min_count = mn;
  stats.max_count = mx;
  double sqrt_n = std::sqrt(static_cast<double>(table.n));
  for (int n0 = 0; n0 <= table.n; ++n0) {
    const BigInt& c = table.counts[n0];
    if (c == 0) continue;
    double e = n0 - table.n / 2.0;
    double g = sqrt_n * to_double(BigRat(c, total));
    stats.scaled_points.emplace_back(e / sqrt_n, g);
  }
  return stats;
}

double variance_slope(const std::vector<FrequencyStats>& stats) {
  if (stats.size() < 2)
    throw Error(Error::Kind::degenerate_input,
                "variance slope needs at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : stats) {
    sx += s.n;
    sy += s.variance;
    sxx += static_cast<double>(s.n) * s.n;
    sxy += s.n * s.variance;
  }
  double n = static_cast<double>(stats.size());
  double det = n * sxx - sx * sx;
  if (det == 0)
    throw Error(Error::Kind::degenerate_input,
                "variance slope needs distinct sizes");
  return (n * sxy - sx * sy) / det;
}

EntropyBound entropy_upper_from_count(int n, const BigInt& count) {
  if (n < 1)
    throw Error(Error::Kind::degenerate_input,
                "entropy bound needs n >= 1");
  if (count <= 0)
    throw Error(Error::Kind::empty_language,
                "entropy bound needs a positive count");
  EntropyBound bound;
  bound.kind = EntropyBound::Kind::upper;
  bound.value = log_big(count) / n;
  bound.provenance.method = "ln c(n)/n at n=" + std::to_string(n);
  return bound;
}

std::pair<double, double> fit_asymptotics(const CountTable& table, int n_lo,
                                          int n_hi) {
  std::vector<std::pair<double, double>> pts;
  for (int n = n_lo; n <= n_hi; ++n) {
    if (!table.contains(n)) continue;
    const BigInt& c = table.at(n);
    if (c <= 0) continue;
    pts.emplace_back(static_cast<double>(n), log_big(c));
  }
  if (pts.size() < 2)
    throw Error(Error::Kind::degenerate_input,
                "asymptotic fit window too short");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(pts.size());
  double det = n * sxx - sx * sx;
  if (det == 0)
    throw Error(Error::Kind::degenerate_input, "asymptotic fit degenerate");
  double slope = (n * sxy - sx * sy) / det;
  double intercept = (sy - slope * sx) / n;
  return {std::exp(intercept), std::exp(-slope)};
}

void write_counts_csv(std::ostream& out, const CountTable& table,
                      const std::string& source_label) {
  for (const auto& [n, c] : table.counts()) {
    out << n << ',' << c;
    if (!source_label.empty()) out << ',' << source_label;
    out << '\n';
  }
}

void write_joint_csv(std::ostream& out, const JointCountTable& table,
                     const std::string& source_label) {
  for (int n0 = 0; n0 <= table.n; ++n0) {
    if (table.counts[n0] == 0) continue;
    out << table.n << ',' << n0 << ',' << table.counts[n0];
    if (!source_label.empty()) out << ',' << source_label;
    out << '\n';
  }
}

void write_stats_csv(std::ostream& out,
                     const std::vector<FrequencyStats>& rows) {
  for (const auto& s : rows) {
    out << s.n << ',' << fmt_real(s.variance) << ',' << s.min_count << ','
        << s.max_count << '\n';
  }
}

void write_scaled_csv(std::ostream& out, const FrequencyStats& stats) {
  for (auto [x, g] : stats.scaled_points)
    out << fmt_real(x) << ',' << fmt_real(g) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

CountTable load_count_fixture(const std::string& path, FreenessSpec spec,
                              Alphabet alphabet) {
  std::ifstream in(path);
  if (!in)
    throw Error(Error::Kind::io_error, "cannot open fixture " + path);
  CountTable table(spec, alphabet);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < 2)
      throw Error(Error::Kind::io_error, "bad fixture row: " + line);
    table.set(std::stoi(fields[0]), BigInt(fields[1]));
  }
  if (table.counts().empty())
    throw Error(Error::Kind::io_error, "fixture " + path + " is empty");
  return table;
}

JointCountTable load_joint_fixture(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in)
    throw Error(Error::Kind::io_error, "cannot open fixture " + path);
  JointCountTable table;
  table.n = n;
  table.counts.assign(n + 1, BigInt(0));
  bool any = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < 3)
      throw Error(Error::Kind::io_error, "bad fixture row: " + line);
    if (std::stoi(fields[0]) != n) continue;
    int n0 = std::stoi(fields[1]);
    if (n0 < 0 || n0 > n)
      throw Error(Error::Kind::io_error, "fixture letter count out of range");
    table.counts[n0] = BigInt(fields[2]);
    any = true;
  }
  if (!any)
    throw Error(Error::Kind::io_error,
                "fixture " + path + " has no rows for n=" + std::to_string(n));
  return table;
}

}  // namespace powerfree
