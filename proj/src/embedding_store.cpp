#include "dhd/embedding_store.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <unordered_set>

#include "dhd/errors.hpp"

namespace dhd {

namespace {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::string_view next_token(std::string_view& rest) {
  std::size_t start = rest.find_first_not_of(' ');
  if (start == std::string_view::npos) {
    rest = {};
    return {};
  }
  std::size_t end = rest.find(' ', start);
  if (end == std::string_view::npos) end = rest.size();
  std::string_view tok = rest.substr(start, end - start);
  rest.remove_prefix(end);
  return tok;
}

}  // namespace

EmbeddingSet::EmbeddingSet(std::vector<std::string> vocab, Matrix vectors) : vectors_(std::move(vectors)) {
  if (static_cast<std::size_t>(vectors_.rows()) != vocab.size()) {
    throw DomainError("embedding set: " + std::to_string(vocab.size()) + " words but " +
                      std::to_string(vectors_.rows()) + " vector rows");
  }
  check_finite(vectors_);
  auto v = std::make_shared<Vocabulary>();
  v->index.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!v->index.emplace(vocab[i], i).second) {
      throw DomainError("embedding set: duplicate word '" + vocab[i] + "'");
    }
  }
  v->words = std::move(vocab);
  vocab_ = std::move(v);
}

EmbeddingSet::EmbeddingSet(std::shared_ptr<const Vocabulary> vocab, Matrix vectors)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)) {
  if (static_cast<std::size_t>(vectors_.rows()) != size()) {
    throw DomainError("embedding set: row count does not match vocabulary");
  }
  check_finite(vectors_);
}

void EmbeddingSet::check_finite(const Matrix& m) {
  if (!m.allFinite()) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (!m.row(r).allFinite()) {
        throw DomainError("embedding set: non-finite value in row " + std::to_string(r));
      }
    }
  }
}

const std::vector<std::string>& EmbeddingSet::vocab() const {
  static const std::vector<std::string> kEmpty;
  return vocab_ ? vocab_->words : kEmpty;
}

std::optional<std::size_t> EmbeddingSet::index_of(std::string_view word) const {
  if (!vocab_) return std::nullopt;
  auto it = vocab_->index.find(word);
  if (it == vocab_->index.end()) return std::nullopt;
  return it->second;
}

Vector EmbeddingSet::vector(std::string_view word) const {
  auto i = index_of(word);
  if (!i) throw DomainError("word '" + std::string(word) + "' is not in the vocabulary");
  return row(*i).transpose();
}

EmbeddingSet EmbeddingSet::with_vectors(Matrix vectors) const {
  return EmbeddingSet(vocab_, std::move(vectors));
}

EmbeddingSet EmbeddingSet::subset(const std::vector<std::size_t>& rows) const {
  std::vector<std::string> words;
  words.reserve(rows.size());
  Matrix m(static_cast<Eigen::Index>(rows.size()), vectors_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    words.push_back(word(rows[i]));
    m.row(static_cast<Eigen::Index>(i)) = row(rows[i]);
  }
  return EmbeddingSet(std::move(words), std::move(m));
}

bool VocabFilter::accepts_token(std::string_view word) const {
  if (!require_alpha) return true;
  if (word.empty()) return false;
  for (char c : word) {
    if (!is_ascii_alpha(c)) return false;
  }
  return true;
}

EmbeddingSet load_text_embeddings(const std::filesystem::path& path, const VocabFilter& filter, LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding file '" + path.string() + "'");

  LoadStats local;
  std::vector<std::string> words;
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  const std::size_t cap = filter.max_rank.value_or(SIZE_MAX);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    ++local.lines;

    std::string_view rest(line);
    std::string_view word = next_token(rest);
    const std::size_t first_value = values.size();
    std::size_t count = 0;
    for (std::string_view tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": cannot parse value '" +
                         std::string(tok) + "'");
      }
      if (!std::isfinite(x)) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": non-finite value");
      }
      values.push_back(x);
      ++count;
    }
    if (count == 0) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": line has no vector values");
    }
    if (dim == 0) {
      dim = count;
    } else if (count != dim) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " values, found " + std::to_string(count));
    }

    std::string w(word);
    if (seen.contains(w)) {
      ++local.duplicates_skipped;
      values.resize(first_value);
      continue;
    }
    seen.insert(w);
    if (words.size() >= cap || !filter.accepts_token(w)) {
      ++local.filtered_out;
      values.resize(first_value);
      continue;
    }
    words.push_back(std::move(w));
  }
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  if (local.lines == 0) throw ParseError("embedding file '" + path.string() + "' is empty");
  if (words.empty()) throw ParseError("no words in '" + path.string() + "' survive the vocabulary filter");

  Matrix m = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(words.size()),
                                static_cast<Eigen::Index>(dim));
  if (stats) *stats = local;
  return EmbeddingSet(std::move(words), std::move(m));
}

EmbeddingSet apply_filter(const EmbeddingSet& e, const VocabFilter& filter) {
  const std::size_t cap = filter.max_rank.value_or(SIZE_MAX);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < e.size() && keep.size() < cap; ++i) {
    if (filter.accepts_token(e.word(i))) keep.push_back(i);
  }
  return e.subset(keep);
}

EmbeddingSet normalize_rows(const EmbeddingSet& e) {
  Matrix m = e.vectors();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double n = m.row(r).norm();
    if (n == 0.0) throw DomainError("cannot normalize zero vector of word '" + e.word(r) + "'");
    m.row(r) /= n;
  }
  return e.with_vectors(std::move(m));
}

void write_text_embeddings(const EmbeddingSet& e, const std::filesystem::path& path, int precision) {
  if (e.empty()) throw DomainError("refusing to write an empty embedding set to '" + path.string() + "'");
  if (precision < 0 || precision > 17) throw DomainError("precision must be in [0, 17]");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");

  std::string line;
  char buf[352];  // fits any finite double at precision <= 17
  for (std::size_t i = 0; i < e.size(); ++i) {
    line = e.word(i);
    auto r = e.row(i);
    for (Eigen::Index j = 0; j < r.size(); ++j) {
      int n = std::snprintf(buf, sizeof buf, " %.*f", precision, r(j));
      // "-0.000" reads back as zero either way; normalize for stable bytes.
      if (n > 1 && buf[1] == '-' && std::strtod(buf + 1, nullptr) == 0.0) {
        line.push_back(' ');
        line.append(buf + 2, static_cast<std::size_t>(n - 2));
      } else {
        line.append(buf, static_cast<std::size_t>(n));
      }
    }
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace dhd
