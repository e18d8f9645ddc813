// powerfree: one front end for the enumeration, generating-function,
// morphism and bound machinery in the core library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "powerfree/bounds.hpp"
#include "powerfree/enumerate.hpp"
#include "powerfree/morphism.hpp"
#include "powerfree/polynomial.hpp"
#include "powerfree/roots.hpp"
#include "powerfree/search.hpp"
#include "powerfree/testsets.hpp"
#include "powerfree/transfer.hpp"
#include "powerfree/word.hpp"

namespace {

using nlohmann::json;
using namespace powerfree;

std::string real12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json bound_json(const EntropyBound& b) {
  json j;
  j["kind"] = b.kind == EntropyBound::Kind::lower ? "lower" : "upper";
  j["value"] = b.value;
  j["nats"] = true;
  std::string prov = b.provenance.method;
  if (b.provenance.note) prov += "; " + *b.provenance.note;
  j["provenance"] = prov;
  j["citation"] = b.provenance.citation ? json(*b.provenance.citation)
                                        : json(nullptr);
  return j;
}

json frequency_bound_json(const FrequencyBound& b) {
  json j;
  j["quantity"] = b.quantity;
  j["lower"] = b.lower ? json(b.lower->str()) : json(nullptr);
  j["upper"] = b.upper ? json(b.upper->str()) : json(nullptr);
  std::string prov = b.provenance.method;
  if (b.provenance.note) prov += "; " + *b.provenance.note;
  j["provenance"] = prov;
  j["citation"] = b.provenance.citation ? json(*b.provenance.citation)
                                        : json(nullptr);
  return j;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

struct CommonFlags {
  int k = 3;
  int alphabet = 2;
  int workers = 0;
  std::uint64_t budget = 0;

  EnumerationOptions options() const {
    EnumerationOptions opts;
    opts.workers = workers;
    opts.node_budget = budget;
    return opts;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_budget = true) {
  cmd->add_option("--k", f.k, "power exponent (2 = squarefree, 3 = cubefree)")
      ->check(CLI::Range(2, 16));
  cmd->add_option("--alphabet", f.alphabet, "alphabet size")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--workers", f.workers, "worker threads (0 = all cores)");
  if (with_budget)
    cmd->add_option("--budget", f.budget,
                    "node budget (0 = POWERFREE_BUDGET or default)");
}

FreenessSpec make_spec(int k, std::optional<int> p) {
  return p ? FreenessSpec(k, *p) : FreenessSpec(k);
}

// k taken from the flag when given, else from the file, else cubefree.
int resolve_k(const MorphismFile& mf, std::optional<int> flag_k) {
  if (flag_k) return *flag_k;
  if (mf.k) return *mf.k;
  return 3;
}

int run_count(const CommonFlags& f, int max_n, std::optional<int> p,
              const std::string& fixture, int fresh_max) {
  FreenessSpec spec = make_spec(f.k, p);
  Alphabet alphabet(f.alphabet);
  int fresh_n = fixture.empty() ? max_n : std::min(max_n, fresh_max);
  CountTable fresh = count_powerfree(spec, alphabet, fresh_n, f.options());
  write_counts_csv(std::cout, fresh);
  if (!fixture.empty() && max_n > fresh_n) {
    CountTable rest = load_count_fixture(fixture, spec, alphabet);
    CountTable tail(spec, alphabet);
    for (int n = fresh_n + 1; n <= max_n; ++n) tail.set(n, rest.at(n));
    write_counts_csv(std::cout, tail, "source=fixture");
  }
  return 0;
}

int run_dist(const CommonFlags& f, int n, std::optional<int> p,
             const std::string& fixture, bool stats, bool scaled) {
  FreenessSpec spec = make_spec(f.k, p);
  JointCountTable joint =
      fixture.empty() ? count_joint(spec, Alphabet(f.alphabet), n, f.options())
                      : load_joint_fixture(fixture, n);
  if (stats || scaled) {
    FrequencyStats st = distribution_stats(joint);
    if (stats) write_stats_csv(std::cout, {st});
    if (scaled) write_scaled_csv(std::cout, st);
    return 0;
  }
  write_joint_csv(std::cout, joint, fixture.empty() ? "" : "source=fixture");
  return 0;
}

int run_genfun(const CommonFlags& f, int p, bool exact, int max_n) {
  TransferSystem ts = build_transfer_system(FreenessSpec(f.k, p),
                                            Alphabet(f.alphabet));
  if (exact) {
    RationalFunction rf = exact_generating_function(ts);
    std::cout << rf.str() << '\n';
    return 0;
  }
  write_counts_csv(std::cout, series_coefficients(ts, max_n));
  return 0;
}

int run_hp(const CommonFlags& f, int p, bool exact) {
  TransferSystem ts = build_transfer_system(FreenessSpec(f.k, p),
                                            Alphabet(f.alphabet));
  double h = 0.0;
  if (exact) {
    RationalFunction rf = exact_generating_function(ts);
    h = dominant_pole(rf).second;
  } else {
    h = dominant_growth(ts).second;
  }
  std::cout << real12(h) << '\n';
  return 0;
}

int run_poles(const CommonFlags& f, int p, double tol) {
  TransferSystem ts = build_transfer_system(FreenessSpec(f.k, p),
                                            Alphabet(f.alphabet));
  RationalFunction rf = exact_generating_function(ts);
  write_poles_csv(std::cout, all_poles(rf, tol));
  return 0;
}

int run_verify(const std::string& path, std::optional<int> flag_k,
               const std::string& method) {
  MorphismFile mf = load_morphism_json(path);
  int k = resolve_k(mf, flag_k);
  json out;
  out["k"] = k;
  out["source"] = mf.morphism.source().size();
  out["target"] = mf.morphism.target().size();
  if (method == "auto") {
    KpfCertificate cert = certify_kpowerfree(mf.morphism, k);
    out["verified"] = cert.verified;
    out["method"] = cert.method;
  } else if (method == "testset") {
    out["verified"] = kpowerfree_uniform_test(mf.morphism, k);
    out["method"] = "uniform test-set";
  } else if (method == "length") {
    out["verified"] =
        kpowerfree_uniform_test(mf.morphism, k, TestMethod::length_bound);
    out["method"] = "bounded-length image check";
  } else if (method == "keranen") {
    out["verified"] = keranen_binary_uniform_test(mf.morphism, k);
    out["method"] = "short binary test";
  } else if (method == "minimal") {
    out["verified"] = cubefree_binary_test(mf.morphism);
    out["method"] = "minimal cubefree test-set";
  } else {
    throw Error(Error::Kind::invalid_argument,
                "unknown method '" + method + "'");
  }
  print_json(out);
  return 0;
}

int run_search(const CommonFlags& f, int source, int ell) {
  SearchOptions opts;
  opts.workers = f.workers;
  SearchResult result = search_uniform_generating_sets(
      f.k, source, Alphabet(f.alphabet), ell, opts);
  std::cout << "count: " << result.count << '\n';
  std::cout << "representatives: " << result.representatives.size() << '\n';
  for (const GeneratingSet& s : result.representatives) {
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      if (i) std::cout << ',';
      std::cout << s.words[i].str();
    }
    std::cout << '\n';
  }
  return 0;
}

int run_testset(const CommonFlags& f, int source, const std::string& family,
                int bound, bool list) {
  TestSet ts = [&] {
    if (family == "minimal") return TestSet::minimal_cubefree();
    if (family == "uniform") return TestSet::uniform(f.k, Alphabet(source));
    if (family == "length-bound")
      return TestSet::length_bound(f.k, Alphabet(source), bound);
    throw Error(Error::Kind::invalid_argument,
                "unknown family '" + family + "'");
  }();
  if (list) {
    ts.for_each([](const Word& w) {
      std::cout << w.str() << '\n';
      return true;
    });
    return 0;
  }
  auto [count, max_len] = ts.count_and_max_length();
  std::cout << "count: " << count << '\n';
  std::cout << "max_length: " << max_len << '\n';
  return 0;
}

int run_bounds(const CommonFlags& f, bool registry,
               const std::string& language, std::optional<int> formula_r,
               int ell, const std::string& morphism_path, int r,
               bool frequencies, std::optional<int> flag_k,
               std::optional<int> from_count_n, const std::string& fixture,
               std::optional<int> p) {
  if (registry) {
    json arr = json::array();
    for (const ReferenceConstant& c : reference_constants()) {
      if (!language.empty() && c.language != language) continue;
      json j;
      j["key"] = c.key;
      j["quantity"] = c.quantity;
      j["language"] = c.language;
      j["value"] = c.value;
      j["exact"] = c.exact;
      j["citation"] = c.citation;
      arr.push_back(j);
    }
    print_json(arr);
    return 0;
  }
  if (formula_r) {
    print_json(bound_json(brinkhuis_bound(*formula_r, ell)));
    return 0;
  }
  if (!morphism_path.empty()) {
    MorphismFile mf = load_morphism_json(morphism_path);
    int k = resolve_k(mf, flag_k);
    KpfCertificate cert = certify_kpowerfree(mf.morphism, k);
    if (frequencies) {
      auto [freqs, bound] = lower_bound_with_frequencies(cert, r);
      json j = bound_json(bound);
      json fr = json::array();
      for (const BigRat& x : freqs) fr.push_back(x.str());
      j["frequencies"] = fr;
      print_json(j);
    } else {
      print_json(bound_json(lower_bound_from_morphism(cert, r)));
    }
    return 0;
  }
  if (from_count_n) {
    int n = *from_count_n;
    FreenessSpec spec = make_spec(f.k, p);
    Alphabet alphabet(f.alphabet);
    BigInt count;
    bool from_fixture = !fixture.empty();
    if (from_fixture) {
      count = load_count_fixture(fixture, spec, alphabet).at(n);
    } else {
      count = count_powerfree(spec, alphabet, n, f.options()).at(n);
    }
    EntropyBound b = entropy_upper_from_count(n, count);
    if (from_fixture) {
      b.provenance.note = b.provenance.note
                              ? *b.provenance.note + "; source=fixture"
                              : "source=fixture";
    }
    print_json(bound_json(b));
    return 0;
  }
  throw Error(Error::Kind::invalid_argument,
              "choose one of --registry, --formula-r, --morphism, "
              "--from-count");
}

int run_freq(const CommonFlags& f, const std::vector<std::string>& paths,
             bool bounds_mode, std::optional<int> n, std::optional<int> p) {
  if (!bounds_mode) {
    if (paths.size() != 1)
      throw Error(Error::Kind::invalid_argument,
                  "expected exactly one --morphism file");
    MorphismFile mf = load_morphism_json(paths[0]);
    std::vector<BigRat> freqs = pf_frequencies(mf.morphism);
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      if (i) std::cout << ' ';
      std::cout << i << ':' << freqs[i].str();
    }
    std::cout << '\n';
    return 0;
  }
  if (!n)
    throw Error(Error::Kind::invalid_argument, "--bounds requires --n");
  JointCountTable joint =
      count_joint(make_spec(f.k, p), Alphabet(f.alphabet), *n, f.options());
  std::vector<KpfCertificate> certs;
  for (const std::string& path : paths) {
    MorphismFile mf = load_morphism_json(path);
    certs.push_back(certify_kpowerfree(mf.morphism, mf.k ? *mf.k : f.k));
  }
  json arr = json::array();
  for (const FrequencyBound& b :
       frequency_bounds_from_enumeration_and_morphisms(joint, certs))
    arr.push_back(frequency_bound_json(b));
  print_json(arr);
  return 0;
}

int run_brinkhuis(const CommonFlags& f, const std::string& path,
                  int max_length) {
  std::ifstream in(path);
  if (!in)
    throw Error(Error::Kind::io_error, "cannot read '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("choices"))
    throw Error(Error::Kind::invalid_argument,
                "expected {\"alphabet\": N, \"choices\": [[...], ...]}");
  BrinkhuisCandidate cand{Alphabet(j.value("alphabet", 2)), {}};
  for (const json& set : j.at("choices")) {
    std::vector<Word> words;
    for (const json& w : set)
      words.push_back(Word::parse(cand.alphabet, w.get<std::string>()));
    cand.choices.push_back(std::move(words));
  }
  BrinkhuisOutcome outcome =
      verify_brinkhuis(cand, FreenessSpec(f.k), max_length, f.options());
  json out;
  out["refuted"] = outcome.refuted;
  out["verified_length"] = outcome.verified_length;
  if (outcome.word) out["word"] = outcome.word->str();
  if (!outcome.assignment.empty()) out["assignment"] = outcome.assignment;
  print_json(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"powerfree word enumeration, generating functions, morphism "
               "verification and entropy bounds"};
  app.require_subcommand(1);

  CommonFlags count_f;
  int count_max_n = 24;
  std::optional<int> count_p;
  std::string count_fixture;
  int count_fresh_max = 48;
  auto* count_cmd =
      app.add_subcommand("count", "exact counts by length, CSV n,count");
  add_common(count_cmd, count_f);
  count_cmd->add_option("--max-n", count_max_n, "largest length")->required();
  count_cmd->add_option("--p", count_p, "period cap (omit: unrestricted)");
  count_cmd->add_option("--fixture", count_fixture,
                        "count file for lengths past --fresh-max");
  count_cmd->add_option("--fresh-max", count_fresh_max,
                        "largest freshly enumerated length");

  CommonFlags dist_f;
  int dist_n = 20;
  std::optional<int> dist_p;
  std::string dist_fixture;
  bool dist_stats = false;
  bool dist_scaled = false;
  auto* dist_cmd = app.add_subcommand(
      "dist", "letter-0 occurrence distribution at one length, CSV");
  add_common(dist_cmd, dist_f);
  dist_cmd->add_option("--n", dist_n, "word length")->required();
  dist_cmd->add_option("--p", dist_p, "period cap (omit: unrestricted)");
  dist_cmd->add_option("--fixture", dist_fixture, "joint count file");
  dist_cmd->add_flag("--stats", dist_stats,
                     "CSV n,variance,min,max instead of raw counts");
  dist_cmd->add_flag("--scaled", dist_scaled,
                     "CSV x,g of the scaled distribution");

  CommonFlags genfun_f;
  int genfun_p = 1;
  bool genfun_exact = false;
  int genfun_max_n = 20;
  auto* genfun_cmd = app.add_subcommand(
      "genfun", "generating function of the period-capped language");
  add_common(genfun_cmd, genfun_f, false);
  genfun_cmd->add_option("--p", genfun_p, "period cap")->required();
  genfun_cmd->add_flag("--exact", genfun_exact,
                       "print the exact rational function");
  genfun_cmd->add_option("--max-n", genfun_max_n,
                         "series length for the CSV form");

  CommonFlags hp_f;
  int hp_p = 1;
  bool hp_exact = false;
  auto* hp_cmd =
      app.add_subcommand("hp", "entropy of the period-capped language");
  add_common(hp_cmd, hp_f, false);
  hp_cmd->add_option("--p", hp_p, "period cap")->required();
  hp_cmd->add_flag("--exact", hp_exact,
                   "dominant pole of the exact generating function");

  CommonFlags poles_f;
  int poles_p = 1;
  double poles_tol = 1e-10;
  auto* poles_cmd = app.add_subcommand(
      "poles", "denominator roots of the exact generating function, CSV");
  add_common(poles_cmd, poles_f, false);
  poles_cmd->add_option("--p", poles_p, "period cap")->required();
  poles_cmd->add_option("--tol", poles_tol, "root iteration tolerance");

  std::string verify_path;
  std::optional<int> verify_k;
  std::string verify_method = "auto";
  auto* verify_cmd = app.add_subcommand(
      "verify-morphism", "decide whether a morphism preserves powerfreeness");
  verify_cmd->add_option("--morphism", verify_path, "morphism JSON file")
      ->required();
  verify_cmd->add_option("--k", verify_k, "power exponent (default: file)");
  verify_cmd->add_option("--method", verify_method,
                         "auto|testset|length|keranen|minimal");

  CommonFlags search_f;
  int search_source = 3;
  int search_ell = 6;
  auto* search_cmd = app.add_subcommand(
      "search-morphisms", "uniform powerfree morphisms at one image length");
  add_common(search_cmd, search_f, false);
  search_cmd->add_option("--source", search_source, "source alphabet size")
      ->required();
  search_cmd->add_option("--ell", search_ell, "image length")->required();

  CommonFlags testset_f;
  int testset_source = 2;
  std::string testset_family = "uniform";
  int testset_bound = 0;
  bool testset_list = false;
  auto* testset_cmd = app.add_subcommand(
      "testset", "words whose images decide uniform powerfreeness");
  add_common(testset_cmd, testset_f, false);
  testset_cmd->add_option("--source", testset_source, "source alphabet size");
  testset_cmd->add_option("--family", testset_family,
                          "uniform|minimal|length-bound");
  testset_cmd->add_option("--bound", testset_bound,
                          "length cap for the length-bound family");
  testset_cmd->add_flag("--list", testset_list, "stream the words");

  CommonFlags bounds_f;
  bool bounds_registry = false;
  std::string bounds_language;
  std::optional<int> bounds_formula_r;
  int bounds_ell = 2;
  std::string bounds_morphism;
  int bounds_r = 1;
  bool bounds_frequencies = false;
  std::optional<int> bounds_k;
  std::optional<int> bounds_from_count;
  std::string bounds_fixture;
  std::optional<int> bounds_p;
  auto* bounds_cmd =
      app.add_subcommand("bounds", "entropy bounds and the published record");
  add_common(bounds_cmd, bounds_f);
  bounds_cmd->add_flag("--registry", bounds_registry,
                       "list the published reference constants");
  bounds_cmd->add_option("--language", bounds_language,
                         "registry filter, e.g. binary-cubefree");
  bounds_cmd->add_option("--formula-r", bounds_formula_r,
                         "ln(r)/(l-1) for a substitution set of r words");
  bounds_cmd->add_option("--ell", bounds_ell, "substitution word length");
  bounds_cmd->add_option("--morphism", bounds_morphism,
                         "lower bound from a verified morphism file");
  bounds_cmd->add_option("--r", bounds_r, "source/target alphabet ratio");
  bounds_cmd->add_flag("--frequencies", bounds_frequencies,
                       "also report the morphism's letter frequencies");
  bounds_cmd->add_option("--morphism-k", bounds_k,
                         "power exponent for --morphism (default: file)");
  bounds_cmd->add_option("--from-count", bounds_from_count,
                         "entropy upper bound ln c(n)/n at this n");
  bounds_cmd->add_option("--fixture", bounds_fixture,
                         "count file for --from-count");
  bounds_cmd->add_option("--p", bounds_p, "period cap for --from-count");

  CommonFlags freq_f;
  std::vector<std::string> freq_paths;
  bool freq_bounds = false;
  std::optional<int> freq_n;
  std::optional<int> freq_p;
  auto* freq_cmd = app.add_subcommand(
      "freq", "fixed-point letter frequencies of a morphism");
  add_common(freq_cmd, freq_f);
  freq_cmd->add_option("--morphism", freq_paths, "morphism JSON file(s)");
  freq_cmd->add_flag("--bounds", freq_bounds,
                     "letter frequency bounds from counts and morphisms");
  freq_cmd->add_option("--n", freq_n, "enumeration length for --bounds");
  freq_cmd->add_option("--p", freq_p, "period cap for --bounds");

  CommonFlags brink_f;
  std::string brink_path;
  int brink_max_length = 12;
  auto* brink_cmd = app.add_subcommand(
      "brinkhuis", "check a per-letter substitution set on powerfree words");
  add_common(brink_cmd, brink_f);
  brink_cmd->add_option("--file", brink_path, "candidate JSON file")
      ->required();
  brink_cmd->add_option("--max-length", brink_max_length,
                        "largest source word length to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    std::cerr << app.help() << '\n';
    return 2;
  }

  try {
    if (count_cmd->parsed())
      return run_count(count_f, count_max_n, count_p, count_fixture,
                       count_fresh_max);
    if (dist_cmd->parsed())
      return run_dist(dist_f, dist_n, dist_p, dist_fixture, dist_stats,
                      dist_scaled);
    if (genfun_cmd->parsed())
      return run_genfun(genfun_f, genfun_p, genfun_exact, genfun_max_n);
    if (hp_cmd->parsed()) return run_hp(hp_f, hp_p, hp_exact);
    if (poles_cmd->parsed()) return run_poles(poles_f, poles_p, poles_tol);
    if (verify_cmd->parsed())
      return run_verify(verify_path, verify_k, verify_method);
    if (search_cmd->parsed())
      return run_search(search_f, search_source, search_ell);
    if (testset_cmd->parsed())
      return run_testset(testset_f, testset_source, testset_family,
                         testset_bound, testset_list);
    if (bounds_cmd->parsed())
      return run_bounds(bounds_f, bounds_registry, bounds_language,
                        bounds_formula_r, bounds_ell, bounds_morphism,
                        bounds_r, bounds_frequencies, bounds_k,
                        bounds_from_count, bounds_fixture, bounds_p);
    if (freq_cmd->parsed())
      return run_freq(freq_f, freq_paths, freq_bounds, freq_n, freq_p);
    if (brink_cmd->parsed())
      return run_brinkhuis(brink_f, brink_path, brink_max_length);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 2;
}
