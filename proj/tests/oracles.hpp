#pragma once

// Straightforward reference implementations that the library results are
// checked against. They share no code with the library beyond EmbeddingSet.

#include <cstddef>
#include <string>
#include <vector>

#include "dhd/bias_eval.hpp"
#include "dhd/embedding_store.hpp"

namespace dhd::oracles {

double cosine(const Vector& u, const Vector& v);

/// WEAT by definition: per-word associations, effect size with the sample
/// standard deviation, and a one-sided p-value over every equal-size split
/// of X u Y enumerated as bitmasks. Needs |X| + |Y| <= 30.
struct Weat {
  double effect_size = 0.0;
  std::size_t at_least = 0;
  std::size_t total = 0;
  std::vector<double> associations;  // X then Y
};
Weat weat(const EmbeddingSet& e, const WeatSpec& spec);

/// 3CosAdd scores of every word for a : b :: c : ?, -inf for the query words.
std::vector<double> analogy_scores(const EmbeddingSet& e, std::size_t a, std::size_t b, std::size_t c);

/// First index of the maximum of analogy_scores.
std::size_t analogy_argmax(const EmbeddingSet& e, std::size_t a, std::size_t b, std::size_t c);

/// 1-based index, among the top k principal directions of the mean-centered
/// embeddings, of the one most aligned with f.
std::size_t most_aligned_component(const EmbeddingSet& e, const Vector& f, std::size_t k);

}  // namespace dhd::oracles
