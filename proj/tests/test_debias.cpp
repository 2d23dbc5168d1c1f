#include <gtest/gtest.h>

#include <cmath>

#include "dhd/debias.hpp"
#include "dhd/errors.hpp"
#include "dhd/vector_math.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace dhd;

namespace {

EmbeddingSet make_set(std::vector<std::string> words, std::initializer_list<double> values, std::size_t dim) {
  Matrix m(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(dim));
  auto it = values.begin();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = *it++;
  return EmbeddingSet(std::move(words), std::move(m));
}

DebiasConfig config_with_pairs(std::vector<WordPair> pairs) {
  DebiasConfig cfg;
  cfg.gender_pairs = std::move(pairs);
  cfg.exclude_words = DebiasConfig::pair_words(cfg.gender_pairs);
  return cfg;
}

GenderDirection axis(Vector v) {
  GenderDirection g;
  g.direction = std::move(v);
  return g;
}

}  // namespace

TEST(GenderDirection, SinglePair) {
  auto e = make_set({"f", "m"}, {0, 1, 1, 0}, 2);
  auto g = gender_direction(e, config_with_pairs({{"f", "m"}}));
  EXPECT_NEAR(g.direction(0), -0.7071, 1e-4);
  EXPECT_NEAR(g.direction(1), 0.7071, 1e-4);
  EXPECT_EQ(g.pairs_used.size(), 1u);
}

TEST(GenderDirection, AveragesDifferencesAndReportsDropped) {
  auto e = make_set({"f1", "m1", "f2", "m2"}, {1, 0, 0, 0, 0, 1, 0, 0}, 2);
  auto g = gender_direction(e, config_with_pairs({{"f1", "m1"}, {"f2", "m2"}, {"f3", "m3"}}));
  EXPECT_NEAR(g.direction(0), 0.7071, 1e-4);
  EXPECT_NEAR(g.direction(1), 0.7071, 1e-4);
  ASSERT_EQ(g.pairs_dropped.size(), 1u);
  EXPECT_EQ(g.pairs_dropped[0].first, "f3");
}

TEST(GenderDirection, DegenerateInputsThrow) {
  auto same = make_set({"f", "m"}, {1, 2, 1, 2}, 2);
  EXPECT_THROW(gender_direction(same, config_with_pairs({{"f", "m"}})), DomainError);
  auto cancel = make_set({"f1", "m1", "f2", "m2"}, {1, 0, 0, 0, 0, 0, 1, 0}, 2);
  EXPECT_THROW(gender_direction(cancel, config_with_pairs({{"f1", "m1"}, {"f2", "m2"}})), DomainError);
  EXPECT_THROW(gender_direction(same, config_with_pairs({{"x", "y"}})), DomainError);
}

TEST(HardDebias, RemovesProjection) {
  auto e = make_set({"w", "she", "he"}, {3, 4, 1, 0, -1, 0}, 2);
  Vector g(2);
  g << 1, 0;
  auto out = hard_debias(e, axis(g), DebiasConfig{});
  EXPECT_NEAR(out.row(0)(0), 0.0, 1e-15);
  EXPECT_EQ(out.row(0)(1), 4.0);
  EXPECT_EQ(out.row(1), e.row(1));  // excluded pair word
  EXPECT_THROW(hard_debias(e, axis(2 * g), DebiasConfig{}), DomainError);
}

TEST(HardDebias, OrthogonalExclusionIdempotent) {
  auto e = fixtures::random_embeddings(8, 400, 25);
  DebiasConfig cfg;
  auto g = gender_direction(e, cfg);
  auto once = hard_debias(e, g, cfg);
  auto twice = hard_debias(once, g, cfg);
  EXPECT_EQ(once.vocab(), e.vocab());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (cfg.exclude_words.contains(e.word(i))) {
      EXPECT_TRUE((once.row(i).array() == e.row(i).array()).all()) << e.word(i);
    } else {
      EXPECT_LT(std::abs(once.row(i).dot(g.direction)), 1e-10);
    }
  }
  EXPECT_LT((once.vectors() - twice.vectors()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SelectBiasedWords, OrdersMaleThenFemale) {
  auto e = make_set({"a", "b", "c", "d", "e"}, {-1, 0.1, 1, 0.2, 0.1, 1, -0.5, 1, 2, -0.1}, 2);
  Vector g(2);
  g << 1, 0;
  auto sel = select_biased_words(e, g, 2);
  EXPECT_EQ(sel.rows, (std::vector<std::size_t>{0, 3, 4, 1}));
  EXPECT_EQ(sel.truth, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_THROW(select_biased_words(e, g, 3), DomainError);
  EXPECT_THROW(select_biased_words(e, g, 0), DomainError);
}

TEST(Sweep, SingleCandidate) {
  auto e = fixtures::random_embeddings(9, 300, 20);
  DebiasConfig cfg;
  cfg.candidate_components = 1;
  cfg.neighborhood_top_n = 50;
  auto s = sweep_dominating_directions(e, cfg);
  ASSERT_EQ(s.per_component_accuracy.size(), 1u);
  EXPECT_EQ(s.chosen_component, 1u);
  EXPECT_FALSE(s.forced);
  EXPECT_GE(s.per_component_accuracy[0].accuracy, 0.5);
  EXPECT_LE(s.per_component_accuracy[0].accuracy, 1.0);
}

TEST(Sweep, ChosenIsFirstMinimumAndVariancesMatchPca) {
  auto e = fixtures::random_embeddings(10, 500, 30);
  DebiasConfig cfg;
  cfg.candidate_components = 8;
  cfg.neighborhood_top_n = 60;
  auto s = sweep_dominating_directions(e, cfg);
  ASSERT_EQ(s.per_component_accuracy.size(), 8u);
  double best = 2.0;
  std::size_t first = 0;
  for (const auto& entry : s.per_component_accuracy)
    if (entry.accuracy < best) best = entry.accuracy, first = entry.component;
  EXPECT_EQ(s.chosen_component, first);
  auto [centered, mean] = decenter(e);
  auto pcs = principal_components(centered, 8);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(s.per_component_accuracy[i].explained_variance, pcs.explained_variance[i]);
}

TEST(Sweep, RejectsBadCandidateCount) {
  auto e = fixtures::random_embeddings(11, 200, 10);
  DebiasConfig cfg;
  cfg.neighborhood_top_n = 20;
  cfg.candidate_components = 0;
  EXPECT_THROW(sweep_dominating_directions(e, cfg), DomainError);
  cfg.candidate_components = 11;
  EXPECT_THROW(sweep_dominating_directions(e, cfg), DomainError);
}

TEST(Sweep, RecoversPlantedFrequencyDirection) {
  DebiasConfig cfg;
  cfg.neighborhood_top_n = 100;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto fx = fixtures::frequency_fixture(seed);
    auto s = sweep_dominating_directions(fx.embeddings, cfg);
    EXPECT_EQ(s.chosen_component, oracles::most_aligned_component(fx.embeddings, fx.frequency_direction, 20)) << seed;
    EXPECT_LT(s.per_component_accuracy[s.chosen_component - 1].accuracy, s.baseline_accuracy) << seed;
  }
}

TEST(DoubleHard, OrthogonalToGenderAndRemovedDirection) {
  auto fx = fixtures::frequency_fixture(3, 800, 30);
  DebiasConfig cfg;
  cfg.neighborhood_top_n = 100;
  cfg.candidate_components = 10;
  auto r = double_hard_debias(fx.embeddings, cfg);
  EXPECT_EQ(r.embeddings.vocab(), fx.embeddings.vocab());
  EXPECT_NEAR(r.removed_direction.norm(), 1.0, 1e-10);
  EXPECT_NEAR(r.gender.direction.norm(), 1.0, 1e-10);
  for (std::size_t i = 0; i < r.embeddings.size(); ++i) {
    EXPECT_LT(std::abs(r.embeddings.row(i).dot(r.removed_direction)), 1e-9);
    if (!cfg.exclude_words.contains(r.embeddings.word(i)))
      EXPECT_LT(std::abs(r.embeddings.row(i).dot(r.gender.direction)), 1e-9);
  }
}

TEST(DoubleHard, ForcedComponentChangesOutput) {
  auto e = fixtures::random_embeddings(12, 300, 20);
  DebiasConfig cfg;
  cfg.neighborhood_top_n = 50;
  auto one = double_hard_debias(e, cfg, 1);
  auto two = double_hard_debias(e, cfg, 2);
  EXPECT_TRUE(one.sweep.forced);
  EXPECT_EQ(one.sweep.chosen_component, 1u);
  EXPECT_TRUE(one.sweep.per_component_accuracy.empty());
  EXPECT_GT((one.embeddings.vectors() - two.embeddings.vectors()).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_THROW(double_hard_debias(e, cfg, 0), DomainError);
  EXPECT_THROW(double_hard_debias(e, cfg, 21), DomainError);
}

TEST(DoubleHard, Deterministic) {
  auto e = fixtures::random_embeddings(13, 300, 20);
  DebiasConfig cfg;
  cfg.neighborhood_top_n = 50;
  cfg.candidate_components = 6;
  auto a = double_hard_debias(e, cfg);
  auto b = double_hard_debias(e, cfg);
  EXPECT_EQ(a.sweep.chosen_component, b.sweep.chosen_component);
  EXPECT_EQ(a.embeddings.vectors(), b.embeddings.vectors());
}

TEST(DebiasConfigFile, ParsesPairsAndOverrides) {
  auto path = fixtures::write_temp_file("cfg.json",
                                        R"({"pairs": [["queen", "king"]], "seed": 7, "candidate_components": 5,
                                            "normalize": true})");
  auto cfg = load_debias_config(path);
  ASSERT_EQ(cfg.gender_pairs.size(), 1u);
  EXPECT_EQ(cfg.gender_pairs[0], (WordPair{"queen", "king"}));
  EXPECT_EQ(cfg.exclude_words, (std::set<std::string>{"king", "queen"}));
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.candidate_components, 5u);
  EXPECT_TRUE(cfg.kmeans().normalize);
  EXPECT_THROW(load_debias_config(fixtures::write_temp_file("bad.json", R"({"pairs": [["a"]]})")), ParseError);
  EXPECT_THROW(load_debias_config(fixtures::write_temp_file("broken.json", "{")), ParseError);
  EXPECT_THROW(load_debias_config("/nonexistent/cfg.json"), IoError);
}
