#include "synthetic.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dhd/debias.hpp"

namespace dhd::fixtures {

namespace {

std::vector<std::string> pair_then_filler_words(std::size_t n_words) {
  std::vector<std::string> words;
  for (const auto& [f, m] : default_gender_pairs()) {
    words.push_back(f);
    words.push_back(m);
  }
  for (std::size_t i = words.size(); i < n_words; ++i) words.push_back("w" + std::to_string(i));
  return words;
}

}  // namespace

Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = scale * rng.normal();
  }
  return m;
}

Eigen::MatrixXd orthonormal_basis(Rng& rng, std::size_t d) {
  Eigen::MatrixXd g = gaussian_matrix(rng, d, d);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

EmbeddingSet random_embeddings(std::uint64_t seed, std::size_t n_words, std::size_t dim) {
  Rng rng(seed);
  Matrix m = gaussian_matrix(rng, n_words, dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  Vector axis = gaussian_matrix(rng, dim, 1).col(0);
  axis.normalize();
  for (std::size_t i = 0; i < n_words; ++i) {
    double s = 0.0;
    if (i < 20) {
      s = i % 2 == 0 ? 0.8 : -0.8;
    } else if (rng.uniform01() < 0.3) {
      s = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * (0.2 + 0.6 * rng.uniform01());
    }
    m.row(static_cast<Eigen::Index>(i)) += s * axis.transpose();
  }
  return EmbeddingSet(pair_then_filler_words(n_words), std::move(m));
}

FrequencyFixture frequency_fixture(std::uint64_t seed, std::size_t n_words, std::size_t dim) {
  constexpr double kGender = 1.0;
  constexpr double kFrequency = 1.0;
  constexpr double kPairFrequencyGap = 1.5;  // male minus female log-frequency
  constexpr double kNoise = 0.25;
  constexpr double kTopic = 0.6;
  constexpr double kDominantTopic = 2.0;
  constexpr std::size_t kTopics = 6;

  Rng rng(seed);
  const Eigen::MatrixXd q = orthonormal_basis(rng, dim);
  const Vector f = q.col(0);
  const Vector g = q.col(1);
  const Vector dominant = q.col(2 + kTopics);

  Matrix m = gaussian_matrix(rng, n_words, dim, kNoise);
  for (std::size_t i = 20; i < n_words; ++i) {
    const double log_freq = rng.normal();
    double s = 0.15 * rng.normal();
    const bool gendered = rng.uniform01() < 0.3;
    if (gendered) s = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * (0.5 + 0.5 * rng.uniform01());
    Vector v = kFrequency * log_freq * f + kGender * s * g;
    for (std::size_t t = 0; t < kTopics; ++t) v += kTopic * rng.normal() * q.col(static_cast<Eigen::Index>(2 + t));
    if (!gendered) v += kDominantTopic * rng.normal() * dominant;
    m.row(static_cast<Eigen::Index>(i)) += v.transpose();
  }
  for (std::size_t p = 0; p < 10; ++p) {
    const double base = rng.normal();
    const Vector female = kFrequency * (base - kPairFrequencyGap / 2) * f + kGender * g;
    const Vector male = kFrequency * (base + kPairFrequencyGap / 2) * f - kGender * g;
    m.row(static_cast<Eigen::Index>(2 * p)) += female.transpose();
    m.row(static_cast<Eigen::Index>(2 * p + 1)) += male.transpose();
  }
  return {EmbeddingSet(pair_then_filler_words(n_words), std::move(m)), f, g};
}

std::string write_temp_file(const std::string& name, const std::string& contents) {
  const auto dir = std::filesystem::temp_directory_path() / ("dhd_tests_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  return path.string();
}

}  // namespace dhd::fixtures
