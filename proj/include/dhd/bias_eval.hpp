#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dhd/clustering.hpp"
#include "dhd/debias.hpp"
#include "dhd/embedding_store.hpp"

namespace dhd {

// ---------------------------------------------------------------------------
// WEAT
// ---------------------------------------------------------------------------

/// Targets X, Y (e.g. career / family) against attributes A, B (e.g. male /
/// female names).
struct WeatSpec {
  std::string name;
  std::vector<std::string> targets_x;
  std::vector<std::string> targets_y;
  std::vector<std::string> attributes_a;
  std::vector<std::string> attributes_b;
};

/// Reads {"name": ..., "X": [...], "Y": [...], "A": [...], "B": [...]}.
WeatSpec load_weat_spec(const std::filesystem::path& path);

struct WeatOptions {
  std::size_t permutations = 100000;  // Monte Carlo draws when enumeration is too large
  std::size_t exact_limit = 100000;   // enumerate when C(|X|+|Y|, |X|) <= this
  std::uint64_t seed = 42;
  bool lowercase = true;
};

struct WeatResult {
  std::string name;
  double effect_size = 0.0;
  double p_value = 1.0;
  bool exact = false;
  std::size_t n_permutations = 0;  // partitions enumerated or drawn
  std::size_t n_at_least = 0;      // partitions with statistic >= observed (MC: includes observed)
  std::vector<std::string> dropped_words;
  std::size_t size_x = 0, size_y = 0, size_a = 0, size_b = 0;
  std::vector<std::string> warnings;
};

/// mean_a cos(w, a) - mean_b cos(w, b); A and B hold one vector per row.
double weat_association(const Eigen::Ref<const Vector>& w, const Matrix& attrs_a, const Matrix& attrs_b);

/// Effect size and one-sided permutation p-value of the differential
/// association of X vs Y with A vs B. Out-of-vocabulary words are dropped
/// and listed; an empty list after dropping throws DomainError.
WeatResult weat(const EmbeddingSet& e, const WeatSpec& spec, const WeatOptions& opts = {});

/// Permutation test on precomputed per-word associations s: the first
/// size_x entries form the observed X. Exposed for testing.
struct PermutationTally {
  std::size_t at_least = 0;
  std::size_t total = 0;
  bool exact = false;
};
PermutationTally weat_permutation_test(const std::vector<double>& s, std::size_t size_x, const WeatOptions& opts);

/// Tolerance used when comparing a partition statistic against the observed one.
double weat_tie_tolerance(const std::vector<double>& s);

/// Number of equal-size partitions, saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

// ---------------------------------------------------------------------------
// Neighborhood metric
// ---------------------------------------------------------------------------

struct ClusteringReport {
  std::string embedding_tag;
  std::map<std::size_t, double> per_n;  // top-n -> accuracy percent
  KMeansConfig kmeans;
};

/// Picks the top_n most male and most female words by cosine with g in
/// `original`, clusters their `debiased` vectors into two groups, and returns
/// the alignment accuracy with the gender tags, in percent.
double neighborhood_metric(const EmbeddingSet& original, const EmbeddingSet& debiased, const GenderDirection& g,
                           std::size_t top_n, const KMeansConfig& km);

ClusteringReport neighborhood_report(const EmbeddingSet& original, const EmbeddingSet& debiased,
                                     const GenderDirection& g, const std::vector<std::size_t>& top_ns,
                                     const KMeansConfig& km, std::string tag);

// ---------------------------------------------------------------------------
// Qualitative gaps and projection export
// ---------------------------------------------------------------------------

struct QualitativeGaps {
  std::string male_anchor;
  std::string female_anchor;
  std::vector<std::pair<std::string, double>> gaps;  // cos(w, male) - cos(w, female)
  std::vector<std::string> missing;
};

QualitativeGaps qualitative_gaps(const EmbeddingSet& e, const std::vector<std::string>& words,
                                 const std::string& male_anchor = "he", const std::string& female_anchor = "she");

struct ProjectionRow {
  std::string word;
  double x;
  double y;
  int tag;
};

/// Coordinates of the selected words on the top-2 principal components of
/// their own vectors.
std::vector<ProjectionRow> export_projection(const EmbeddingSet& e, const std::vector<std::string>& words,
                                             const std::vector<int>& truth);

void write_projection_csv(const std::vector<ProjectionRow>& rows, const std::filesystem::path& path);

}  // namespace dhd
