#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dhd/clustering.hpp"
#include "dhd/embedding_store.hpp"

namespace dhd {

using WordPair = std::pair<std::string, std::string>;  // (female, male)

/// The ten definitional pairs used to build the gender direction.
std::vector<WordPair> default_gender_pairs();

struct DebiasConfig {
  std::vector<WordPair> gender_pairs = default_gender_pairs();
  /// Words never neutralized. Defaults to the words of the default pairs.
  std::set<std::string> exclude_words = pair_words(default_gender_pairs());
  std::size_t candidate_components = 20;
  std::size_t neighborhood_top_n = 500;
  std::uint64_t seed = 42;
  bool normalize_before_metrics = false;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_max_iters = 300;

  /// Two-cluster k-means settings derived from this config.
  KMeansConfig kmeans() const;

  static std::set<std::string> pair_words(const std::vector<WordPair>& pairs);
};

/// Reads {"pairs": [["she","he"], ...], "exclude": [...]} plus optional
/// numeric overrides (seed, candidate_components, neighborhood_top_n,
/// normalize, kmeans_restarts, kmeans_max_iters). A missing "exclude" means
/// the pair words; a missing "pairs" keeps the defaults.
DebiasConfig load_debias_config(const std::filesystem::path& path);

struct GenderDirection {
  Vector direction;  // unit, points from male to female
  std::string source_space;
  std::vector<WordPair> pairs_used;
  std::vector<WordPair> pairs_dropped;  // at least one word out of vocabulary
};

/// normalize(mean over pairs of (female - male)). Pairs with an OOV word are
/// dropped. Throws DomainError if none survive or the mean difference is zero.
GenderDirection gender_direction(const EmbeddingSet& e, const DebiasConfig& cfg, std::string source_space = "input");

/// Removes the projection on g from every word not in cfg.exclude_words.
/// Excluded rows are copied bit-for-bit.
EmbeddingSet hard_debias(const EmbeddingSet& e, const GenderDirection& g, const DebiasConfig& cfg);

/// The most gender-leaning words by signed cosine with g. Male words (most
/// negative cosine) come first with truth 0, then female words with truth 1.
struct BiasedWords {
  std::vector<std::size_t> rows;
  std::vector<int> truth;
};
BiasedWords select_biased_words(const EmbeddingSet& e, const Vector& g, std::size_t top_n);

struct SweepResult {
  struct Entry {
    std::size_t component;  // 1-based
    double accuracy;        // fraction in [0.5, 1]
    double explained_variance;
  };
  std::vector<Entry> per_component_accuracy;
  std::size_t chosen_component = 0;  // 1-based; lowest index among minima
  double baseline_accuracy = 0.0;    // Hard Debias alone
  bool forced = false;               // component supplied by the caller, no sweep run
  std::size_t top_n = 0;
  KMeansConfig kmeans;
};

/// Clustering accuracy of the top-n biased words (picked in the original
/// space) after removing each candidate principal direction of the
/// decentered embeddings and applying Hard Debias with a gender direction
/// recomputed in that space.
SweepResult sweep_dominating_directions(const EmbeddingSet& e, const DebiasConfig& cfg);

struct DoubleHardResult {
  EmbeddingSet embeddings;
  SweepResult sweep;
  Vector removed_direction;  // the chosen principal component
  GenderDirection gender;    // recomputed after frequency removal
};

/// Decenter, remove the chosen principal component from every word, then
/// Hard Debias with the recomputed gender direction. `component` is 1-based;
/// when absent the sweep picks it.
DoubleHardResult double_hard_debias(const EmbeddingSet& e, const DebiasConfig& cfg,
                                    std::optional<std::size_t> component = std::nullopt);

}  // namespace dhd
