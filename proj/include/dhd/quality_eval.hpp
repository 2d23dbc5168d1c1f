#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dhd/clustering.hpp"
#include "dhd/embedding_store.hpp"

namespace dhd {

enum class SectionKind { kSemantic, kSyntactic };

struct AnalogyQuestion {
  std::string a, b, c, expected;  // a : b :: c : expected
};

struct AnalogySection {
  std::string label;
  SectionKind kind = SectionKind::kSemantic;
  std::size_t begin = 0;  // question index range [begin, end)
  std::size_t end = 0;
};

struct AnalogyDataset {
  std::vector<AnalogyQuestion> questions;
  std::vector<AnalogySection> sections;
};

/// Google format: ": section-name" headers followed by 4-word lines.
/// Sections whose name starts with "gram" are syntactic, the rest semantic.
AnalogyDataset load_google_analogy(const std::filesystem::path& path, bool lowercase = true);

/// MSR format: 4 words per line, optional trailing tag column ignored.
/// Everything goes into one syntactic section labelled "msr".
AnalogyDataset load_msr_analogy(const std::filesystem::path& path, bool lowercase = true);

/// 3CosAdd over unit-normalized vectors, excluding the three query words.
/// Ties go to the lower vocabulary index. Keeps a reference to `e`.
class AnalogySolver {
 public:
  explicit AnalogySolver(const EmbeddingSet& e);

  /// Predicted row for a : b :: c : ?, by row indices.
  std::size_t solve(std::size_t a, std::size_t b, std::size_t c) const;

  /// Batched form; results are identical to solving each query in a batch of
  /// the same composition and independent of the thread count.
  std::vector<std::size_t> solve_all(const std::vector<std::array<std::size_t, 3>>& queries) const;

  const EmbeddingSet& embeddings() const { return e_; }

 private:
  void solve_batch(const std::array<std::size_t, 3>* queries, std::size_t m, std::size_t* out) const;

  const EmbeddingSet& e_;
  Matrix unit_;
};

/// Returns nullopt if any of a, b, c is out of vocabulary.
std::optional<std::string> solve_analogy(const EmbeddingSet& e, const std::string& a, const std::string& b,
                                         const std::string& c);

struct SectionScore {
  std::string label;
  SectionKind kind;
  std::size_t correct = 0;
  std::size_t attempted = 0;
  std::size_t skipped = 0;  // some word out of vocabulary
};

struct AnalogyScores {
  std::vector<SectionScore> sections;
  double semantic = 0.0;   // percent, NaN when no semantic question was attempted
  double syntactic = 0.0;
  double total = 0.0;
  std::size_t correct = 0, attempted = 0, skipped = 0;
  bool oov_counts_as_wrong = false;
};

struct AnalogyOptions {
  bool oov_counts_as_wrong = false;  // include skipped questions in the denominator
};

AnalogyScores analogy_accuracy(const AnalogySolver& solver, const AnalogyDataset& ds, const AnalogyOptions& opts = {});
AnalogyScores analogy_accuracy(const EmbeddingSet& e, const AnalogyDataset& ds, const AnalogyOptions& opts = {});

struct CategorizationDataset {
  std::vector<std::pair<std::string, std::string>> items;  // (word, category)
  std::vector<std::string> categories;                     // first-appearance order
  std::size_t duplicates_skipped = 0;
};

/// Lines "word<TAB>category".
CategorizationDataset load_categorization(const std::filesystem::path& path, bool lowercase = true);

struct CategorizationScore {
  double purity = 0.0;  // percent
  std::size_t clustered = 0;
  std::size_t oov = 0;
  std::size_t categories = 0;  // among in-vocabulary items; used as k
};

/// Clusters the in-vocabulary items into as many groups as they have
/// categories (km.k is overridden) and scores purity.
CategorizationScore categorization_purity(const EmbeddingSet& e, const CategorizationDataset& ds, KMeansConfig km);

}  // namespace dhd
