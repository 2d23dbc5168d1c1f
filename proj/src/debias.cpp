#include "dhd/debias.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "dhd/errors.hpp"
#include "dhd/parallel.hpp"
#include "dhd/vector_math.hpp"

namespace dhd {

std::vector<WordPair> default_gender_pairs() {
  return {{"she", "he"},       {"her", "his"},         {"woman", "man"},    {"mary", "john"},
          {"herself", "himself"}, {"daughter", "son"}, {"mother", "father"}, {"gal", "guy"},
          {"girl", "boy"},     {"female", "male"}};
}

std::set<std::string> DebiasConfig::pair_words(const std::vector<WordPair>& pairs) {
  std::set<std::string> words;
  for (const auto& [f, m] : pairs) {
    words.insert(f);
    words.insert(m);
  }
  return words;
}

KMeansConfig DebiasConfig::kmeans() const {
  KMeansConfig km;
  km.k = 2;
  km.seed = seed;
  km.restarts = kmeans_restarts;
  km.max_iters = kmeans_max_iters;
  km.normalize = normalize_before_metrics;
  return km;
}

DebiasConfig load_debias_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open debias config '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }

  DebiasConfig cfg;
  try {
    if (j.contains("pairs")) {
      cfg.gender_pairs.clear();
      for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw ParseError(path.string() + ": each pair must be [female, male]");
        cfg.gender_pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
      }
      if (cfg.gender_pairs.empty()) throw ParseError(path.string() + ": 'pairs' is empty");
    }
    if (j.contains("exclude")) {
      cfg.exclude_words = j.at("exclude").get<std::set<std::string>>();
    } else {
      cfg.exclude_words = DebiasConfig::pair_words(cfg.gender_pairs);
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("candidate_components")) cfg.candidate_components = j.at("candidate_components").get<std::size_t>();
    if (j.contains("neighborhood_top_n")) cfg.neighborhood_top_n = j.at("neighborhood_top_n").get<std::size_t>();
    if (j.contains("normalize")) cfg.normalize_before_metrics = j.at("normalize").get<bool>();
    if (j.contains("kmeans_restarts")) cfg.kmeans_restarts = j.at("kmeans_restarts").get<std::size_t>();
    if (j.contains("kmeans_max_iters")) cfg.kmeans_max_iters = j.at("kmeans_max_iters").get<std::size_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  return cfg;
}

GenderDirection gender_direction(const EmbeddingSet& e, const DebiasConfig& cfg, std::string source_space) {
  GenderDirection g;
  g.source_space = std::move(source_space);
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(e.dim()));
  for (const auto& pair : cfg.gender_pairs) {
    auto f = e.index_of(pair.first);
    auto m = e.index_of(pair.second);
    if (!f || !m) {
      g.pairs_dropped.push_back(pair);
      continue;
    }
    sum += (e.row(*f) - e.row(*m)).transpose();
    g.pairs_used.push_back(pair);
  }
  if (g.pairs_used.empty()) throw DomainError("gender_direction: no gender pair has both words in the vocabulary");

  Vector mean = sum / static_cast<double>(g.pairs_used.size());
  const double norm = mean.norm();
  double scale = 0.0;
  for (const auto& [f, m] : g.pairs_used) scale = std::max({scale, e.row(*e.index_of(f)).norm(), e.row(*e.index_of(m)).norm()});
  if (norm == 0.0 || norm <= 1e-12 * scale) {
    throw DomainError("gender_direction: pair differences cancel out (zero mean difference)");
  }
  g.direction = mean / norm;
  return g;
}

EmbeddingSet hard_debias(const EmbeddingSet& e, const GenderDirection& g, const DebiasConfig& cfg) {
  require_unit(g.direction);
  if (static_cast<std::size_t>(g.direction.size()) != e.dim()) throw DomainError("hard_debias: dimension mismatch");
  std::vector<bool> excluded(e.size(), false);
  for (const auto& w : cfg.exclude_words) {
    if (auto i = e.index_of(w)) excluded[*i] = true;
  }
  Matrix m = e.vectors();
  const double gg = g.direction.squaredNorm();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (excluded[static_cast<std::size_t>(r)]) continue;
    const double p = m.row(r).dot(g.direction) / gg;
    m.row(r) -= p * g.direction.transpose();
  }
  return e.with_vectors(std::move(m));
}

BiasedWords select_biased_words(const EmbeddingSet& e, const Vector& g, std::size_t top_n) {
  if (top_n == 0) throw DomainError("select_biased_words: top_n must be positive");
  if (2 * top_n > e.size()) {
    throw DomainError("select_biased_words: 2 x top_n = " + std::to_string(2 * top_n) + " exceeds vocabulary size " +
                      std::to_string(e.size()));
  }
  const double gnorm = g.norm();
  std::vector<double> score(e.size(), 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double n = e.row(i).norm();
    score[i] = n > 0.0 ? e.row(i).dot(g) / (n * gnorm) : 0.0;
  }
  std::vector<std::size_t> order(e.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

  BiasedWords out;
  out.rows.reserve(2 * top_n);
  for (std::size_t i = 0; i < top_n; ++i) {
    out.rows.push_back(order[i]);
    out.truth.push_back(0);
  }
  for (std::size_t i = 0; i < top_n; ++i) {
    out.rows.push_back(order[order.size() - 1 - i]);
    out.truth.push_back(1);
  }
  return out;
}

namespace {

double cluster_accuracy(const EmbeddingSet& sub, std::size_t pool_size, const std::vector<int>& truth,
                        const KMeansConfig& km) {
  Matrix points = sub.vectors().topRows(static_cast<Eigen::Index>(pool_size));
  ClusterAssignment a = kmeans(points, km);
  return alignment_accuracy(a.labels, truth);
}

}  // namespace

SweepResult sweep_dominating_directions(const EmbeddingSet& e, const DebiasConfig& cfg) {
  const std::size_t k = cfg.candidate_components;
  if (k < 1 || k > e.dim()) {
    throw DomainError("sweep: candidate_components=" + std::to_string(k) + " must be in [1, " + std::to_string(e.dim()) + "]");
  }

  SweepResult result;
  result.top_n = cfg.neighborhood_top_n;
  result.kmeans = cfg.kmeans();

  const GenderDirection g = gender_direction(e, cfg, "original");
  const BiasedWords pool = select_biased_words(e, g.direction, cfg.neighborhood_top_n);

  // Work on the pool plus the pair words only; rows [0, pool) are the pool.
  std::vector<std::size_t> rows = pool.rows;
  std::set<std::size_t> in_pool(pool.rows.begin(), pool.rows.end());
  for (const auto& w : DebiasConfig::pair_words(g.pairs_used)) {
    auto i = e.index_of(w);
    if (!in_pool.contains(*i)) rows.push_back(*i);
  }
  const std::size_t pool_size = pool.rows.size();

  result.baseline_accuracy = cluster_accuracy(hard_debias(e.subset(rows), g, cfg), pool_size, pool.truth, result.kmeans);

  const auto [centered, mean] = decenter(e);
  const PrincipalComponents pcs = principal_components(centered, k);
  const EmbeddingSet sub = centered.subset(rows);

  result.per_component_accuracy.resize(k);
  parallel_for(k, [&](std::size_t i) {
    Matrix m = sub.vectors();
    remove_component_rows(m, pcs.components[i]);
    const EmbeddingSet removed = sub.with_vectors(std::move(m));
    const GenderDirection gi = gender_direction(removed, cfg, "decentered-minus-pc" + std::to_string(i + 1));
    const EmbeddingSet debiased = hard_debias(removed, gi, cfg);
    result.per_component_accuracy[i] = {i + 1, cluster_accuracy(debiased, pool_size, pool.truth, result.kmeans),
                                        pcs.explained_variance[i]};
  });

  result.chosen_component = 1;
  double best = result.per_component_accuracy[0].accuracy;
  for (const auto& entry : result.per_component_accuracy) {
    if (entry.accuracy < best) {
      best = entry.accuracy;
      result.chosen_component = entry.component;
    }
  }
  return result;
}

DoubleHardResult double_hard_debias(const EmbeddingSet& e, const DebiasConfig& cfg, std::optional<std::size_t> component) {
  DoubleHardResult out;
  if (component) {
    if (*component < 1 || *component > cfg.candidate_components || *component > e.dim()) {
      throw DomainError("double_hard_debias: component " + std::to_string(*component) + " outside [1, " +
                        std::to_string(std::min(cfg.candidate_components, e.dim())) + "]");
    }
    out.sweep.forced = true;
    out.sweep.chosen_component = *component;
    out.sweep.top_n = cfg.neighborhood_top_n;
    out.sweep.kmeans = cfg.kmeans();
  } else {
    out.sweep = sweep_dominating_directions(e, cfg);
  }

  const std::size_t chosen = out.sweep.chosen_component;
  auto [centered, mean] = decenter(e);
  const PrincipalComponents pcs = principal_components(centered, chosen);
  out.removed_direction = pcs.components[chosen - 1];

  Matrix m = centered.vectors();
  remove_component_rows(m, out.removed_direction);
  const EmbeddingSet removed = e.with_vectors(std::move(m));
  out.gender = gender_direction(removed, cfg, "decentered-minus-pc" + std::to_string(chosen));
  out.embeddings = hard_debias(removed, out.gender, cfg);
  return out;
}

}  // namespace dhd
