#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace dhd {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Vocabulary plus a dense row-major matrix, one row per word.
///
/// Immutable after construction. Sets derived with with_vectors() share the
/// vocabulary and its lookup table, so the pipeline stages that transform
/// only the vectors never copy strings.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;

  /// Validates: unique words, rows == |vocab|, all entries finite.
  EmbeddingSet(std::vector<std::string> vocab, Matrix vectors);

  std::size_t size() const { return vocab_ ? vocab_->words.size() : 0; }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  bool empty() const { return size() == 0; }

  const std::vector<std::string>& vocab() const;
  const std::string& word(std::size_t i) const { return vocab().at(i); }
  const Matrix& vectors() const { return vectors_; }
  auto row(std::size_t i) const { return vectors_.row(static_cast<Eigen::Index>(i)); }

  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word).has_value(); }

  /// Copy of the vector for `word`; throws DomainError when out of vocabulary.
  Vector vector(std::string_view word) const;

  /// Same vocabulary, new vectors (must have |vocab| rows and finite entries).
  EmbeddingSet with_vectors(Matrix vectors) const;

  /// Rows at `rows`, in that order.
  EmbeddingSet subset(const std::vector<std::size_t>& rows) const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  struct Vocabulary {
    std::vector<std::string> words;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index;
  };

  EmbeddingSet(std::shared_ptr<const Vocabulary> vocab, Matrix vectors);
  static void check_finite(const Matrix& m);

  std::shared_ptr<const Vocabulary> vocab_;
  Matrix vectors_;
};

/// Keeps a frequency-ordered prefix and/or purely alphabetic tokens.
/// The alphabetic test runs first; max_rank then counts surviving words
/// in file order. Surviving words keep their relative order.
struct VocabFilter {
  std::optional<std::size_t> max_rank;
  bool require_alpha = false;

  bool accepts_token(std::string_view word) const;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t duplicates_skipped = 0;
  std::size_t filtered_out = 0;
};

/// Reads `word v1 ... vd` lines. Duplicate words keep their first occurrence.
EmbeddingSet load_text_embeddings(const std::filesystem::path& path, const VocabFilter& filter = {},
                                  LoadStats* stats = nullptr);

/// Applies `filter` to an already loaded set.
EmbeddingSet apply_filter(const EmbeddingSet& e, const VocabFilter& filter);

/// Scales every row to unit Euclidean norm. Throws DomainError on a zero row.
EmbeddingSet normalize_rows(const EmbeddingSet& e);

/// Writes the text format with `precision` digits after the decimal point.
void write_text_embeddings(const EmbeddingSet& e, const std::filesystem::path& path, int precision = 6);

}  // namespace dhd
