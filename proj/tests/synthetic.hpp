#pragma once

// Synthetic embedding generators shared by the unit and acceptance tests.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dhd/embedding_store.hpp"
#include "dhd/random.hpp"

namespace dhd::fixtures {

Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0);

/// Random orthonormal d x d basis (columns).
Eigen::MatrixXd orthonormal_basis(Rng& rng, std::size_t d);

/// The 20 default pair words come first (female, male, female, ...), then
/// "w<i>" filler words. Vectors are Gaussian plus a +/- signal along a
/// random gender axis for the pair words and a fraction of the fillers.
EmbeddingSet random_embeddings(std::uint64_t seed, std::size_t n_words, std::size_t dim);

/// Embeddings with a planted frequency direction.
///
/// Every word carries log_freq * f; the male word of each definitional pair
/// is more frequent than its female partner, which tilts the raw gender
/// direction towards f. 30% of the fillers are gendered along g. A stronger
/// topic direction, carried only by gender-neutral words, keeps f from being
/// the first principal component.
struct FrequencyFixture {
  EmbeddingSet embeddings;
  Vector frequency_direction;
  Vector gender_axis;
};
FrequencyFixture frequency_fixture(std::uint64_t seed, std::size_t n_words = 2000, std::size_t dim = 50);

/// Writes `contents` to a file under a per-process temp directory.
std::string write_temp_file(const std::string& name, const std::string& contents);

}  // namespace dhd::fixtures
