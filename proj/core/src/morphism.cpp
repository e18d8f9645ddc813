#include "powerfree/morphism.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace powerfree {

Morphism::Morphism(Alphabet source, Alphabet target, std::vector<Word> images)
    : source_(source), target_(target), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != source_.size())
    throw Error(Error::Kind::invalid_argument,
                "expected one image per source letter");
  for (const Word& w : images_)
    if (w.alphabet() != target_)
      throw Error(Error::Kind::wrong_alphabet,
                  "image alphabet differs from target alphabet");
}

Morphism Morphism::thue_morse() {
  Alphabet binary(2);
  return Morphism(binary, binary,
                  {Word(binary, "01"), Word(binary, "10")});
}

bool Morphism::is_uniform() const {
  for (const Word& w : images_)
    if (w.length() != images_[0].length()) return false;
  return true;
}

int Morphism::uniform_length() const {
  if (!is_uniform())
    throw Error(Error::Kind::non_uniform_input,
                "image lengths differ; morphism is not uniform");
  return images_[0].length();
}

Word Morphism::apply(const Word& w) const {
  if (w.alphabet() != source_)
    throw Error(Error::Kind::wrong_alphabet,
                "word alphabet differs from source alphabet");
  Word out(target_);
  for (int i = 0; i < w.length(); ++i) {
    const Word& img = images_[w[i]];
    for (int j = 0; j < img.length(); ++j) out.push_back(img[j]);
  }
  return out;
}

Word Morphism::iterate(int seed, int min_length) const {
  if (seed < 0 || seed >= source_.size())
    throw Error(Error::Kind::invalid_argument, "seed letter out of range");
  if (source_ != target_)
    throw Error(Error::Kind::non_prolongable_seed,
                "iteration needs source and target alphabets to coincide");
  const Word& img = images_[seed];
  if (img.length() < 2 || img[0] != seed)
    throw Error(Error::Kind::non_prolongable_seed,
                "image of the seed must start with the seed and be longer "
                "than one letter");
  Word w(source_);
  w.push_back(seed);
  while (w.length() < min_length) {
    Word next = apply(w);
    // next always extends w; equal length means the expansion is stuck.
    if (next.length() <= w.length())
      throw Error(Error::Kind::non_prolongable_seed,
                  "expansion stops growing before the requested length");
    w = std::move(next);
  }
  return w;
}

bool operator==(const Morphism& a, const Morphism& b) {
  return a.source_ == b.source_ && a.target_ == b.target_ &&
         a.images_ == b.images_;
}

SubstitutionMatrix substitution_matrix(const Morphism& m) {
  SubstitutionMatrix out;
  out.rows = m.target().size();
  out.cols = m.source().size();
  out.entries.assign(static_cast<std::size_t>(out.rows) * out.cols, 0);
  for (int j = 0; j < out.cols; ++j) {
    const Word& img = m.image(j);
    for (int i = 0; i < img.length(); ++i)
      ++out.entries[static_cast<std::size_t>(img[i]) * out.cols + j];
  }
  return out;
}

std::vector<BigRat> integer_eigenvector(
    const std::vector<std::vector<long>>& matrix, long eigenvalue) {
  std::size_t s = matrix.size();
  for (const auto& row : matrix)
    if (row.size() != s)
      throw Error(Error::Kind::dimension_mismatch, "matrix must be square");
  if (s == 0)
    throw Error(Error::Kind::invalid_argument, "matrix must be non-empty");

  // Row-reduce M - eigenvalue*I exactly.
  std::vector<std::vector<BigRat>> a(s, std::vector<BigRat>(s));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      a[i][j] = BigRat(matrix[i][j]) - (i == j ? BigRat(eigenvalue) : BigRat(0));

  std::vector<int> pivot_col(s, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < s && rank < s; ++col) {
    std::size_t sel = rank;
    while (sel < s && a[sel][col] == 0) ++sel;
    if (sel == s) continue;
    std::swap(a[sel], a[rank]);
    BigRat inv = a[rank][col];
    for (std::size_t j = col; j < s; ++j) a[rank][j] /= inv;
    for (std::size_t i = 0; i < s; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      BigRat f = a[i][col];
      for (std::size_t j = col; j < s; ++j) a[i][j] -= f * a[rank][j];
    }
    pivot_col[rank] = static_cast<int>(col);
    ++rank;
  }

  if (s - rank != 1)
    throw Error(Error::Kind::non_unique_eigenvector,
                "eigenspace dimension is " + std::to_string(s - rank) +
                    ", expected 1");

  // One free column; set it to 1 and back-substitute.
  std::vector<bool> is_pivot(s, false);
  for (std::size_t r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;

  std::vector<BigRat> v(s, BigRat(0));
  v[free_col] = 1;
  for (std::size_t r = 0; r < rank; ++r)
    v[pivot_col[r]] = -a[r][free_col];

  BigRat sum(0);
  for (const BigRat& x : v) sum += x;
  if (sum == 0)
    throw Error(Error::Kind::precondition_violation,
                "eigenvector components sum to zero; cannot normalize");
  for (BigRat& x : v) x /= sum;
  for (const BigRat& x : v)
    if (x < 0)
      throw Error(Error::Kind::precondition_violation,
                  "normalized eigenvector has a negative component");
  return v;
}

std::vector<BigRat> pf_frequencies(const Morphism& m) {
  int ell = m.uniform_length();
  if (ell == 0)
    throw Error(Error::Kind::degenerate_input,
                "images are empty; frequencies undefined");
  SubstitutionMatrix sm = substitution_matrix(m);
  if (sm.rows == sm.cols) {
    std::vector<std::vector<long>> rows(sm.rows, std::vector<long>(sm.cols));
    for (int i = 0; i < sm.rows; ++i)
      for (int j = 0; j < sm.cols; ++j) rows[i][j] = sm.at(i, j);
    return integer_eigenvector(rows, ell);
  }
  // Non-square: accept when every source letter has the same image letter
  // statistics, so the frequencies are just that common column over ell.
  for (int j = 1; j < sm.cols; ++j)
    for (int i = 0; i < sm.rows; ++i)
      if (sm.at(i, j) != sm.at(i, 0))
        throw Error(Error::Kind::non_unique_eigenvector,
                    "image letter statistics differ across source letters");
  std::vector<BigRat> v(sm.rows);
  for (int i = 0; i < sm.rows; ++i) v[i] = BigRat(sm.at(i, 0), ell);
  return v;
}

namespace {

// Letters used by an image string, read with the widest alphabet so the
// target size can be inferred before the real parse.
int max_letter(const std::string& text) {
  Word probe = Word::parse(Alphabet(256), text);
  int top = -1;
  for (int i = 0; i < probe.length(); ++i) top = std::max(top, probe[i]);
  return top;
}

}  // namespace

MorphismFile parse_morphism_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Error::Kind::invalid_argument,
                std::string("bad morphism JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("images") || !doc["images"].is_object())
    throw Error(Error::Kind::invalid_argument,
                "morphism JSON needs an \"images\" object");

  const auto& images = doc["images"];
  int source_size = static_cast<int>(images.size());
  if (source_size == 0)
    throw Error(Error::Kind::invalid_argument, "morphism has no images");

  std::vector<std::string> texts(source_size);
  for (const auto& [key, value] : images.items()) {
    int letter = -1;
    try {
      std::size_t used = 0;
      letter = std::stoi(key, &used);
      if (used != key.size()) letter = -1;
    } catch (const std::exception&) {
      letter = -1;
    }
    if (letter < 0 || letter >= source_size)
      throw Error(Error::Kind::invalid_argument,
                  "image keys must be the letters 0.." +
                      std::to_string(source_size - 1) + ", got \"" + key +
                      "\"");
    if (!value.is_string())
      throw Error(Error::Kind::invalid_argument,
                  "image of letter " + std::to_string(letter) +
                      " must be a string");
    texts[letter] = value.get<std::string>();
  }

  int target_size = 0;
  if (doc.contains("target")) {
    if (!doc["target"].is_number_integer())
      throw Error(Error::Kind::invalid_argument,
                  "\"target\" must be an integer alphabet size");
    target_size = doc["target"].get<int>();
  } else {
    for (const std::string& t : texts)
      target_size = std::max(target_size, max_letter(t) + 1);
    target_size = std::max(target_size, 2);
  }

  Alphabet source(source_size);
  Alphabet target(target_size);
  std::vector<Word> words;
  words.reserve(texts.size());
  for (const std::string& t : texts) words.push_back(Word::parse(target, t));

  MorphismFile out{Morphism(source, target, std::move(words)), std::nullopt};
  if (doc.contains("k")) {
    if (!doc["k"].is_number_integer() || doc["k"].get<int>() < 2)
      throw Error(Error::Kind::invalid_argument,
                  "\"k\" must be an integer >= 2");
    out.k = doc["k"].get<int>();
  }
  return out;
}

MorphismFile load_morphism_json(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Error::Kind::io_error, "cannot open morphism file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_morphism_json(buf.str());
}

std::string morphism_json(const Morphism& m, std::optional<int> k) {
  nlohmann::json doc;
  if (k) doc["k"] = *k;
  doc["target"] = m.target().size();
  nlohmann::json images = nlohmann::json::object();
  for (int a = 0; a < m.source().size(); ++a)
    images[std::to_string(a)] = m.image(a).str();
  doc["images"] = images;
  return doc.dump();
}

}  // namespace powerfree
