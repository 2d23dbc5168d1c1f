#include "dhd/bias_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "dhd/errors.hpp"
#include "dhd/parallel.hpp"
#include "dhd/random.hpp"
#include "dhd/vector_math.hpp"

namespace dhd {

namespace {

constexpr std::size_t kDrawsPerBlock = 1000;

std::string to_lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

// In-vocabulary rows of `words`; OOV words are appended to `dropped`.
std::vector<std::size_t> resolve(const EmbeddingSet& e, const std::vector<std::string>& words, bool lowercase,
                                 std::vector<std::string>& dropped) {
  std::vector<std::size_t> rows;
  for (const auto& w : words) {
    const std::string key = lowercase ? to_lower(w) : w;
    if (auto i = e.index_of(key)) {
      rows.push_back(*i);
    } else {
      dropped.push_back(w);
    }
  }
  return rows;
}

Matrix gather(const EmbeddingSet& e, const std::vector<std::size_t>& rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(e.dim()));
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = e.row(rows[i]);
  return m;
}

double sum_subset(const std::vector<double>& s, const std::vector<std::size_t>& idx, std::size_t count) {
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += s[idx[i]];
  return acc;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

WeatSpec load_weat_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open WEAT spec '" + path.string() + "'");
  try {
    const auto j = nlohmann::json::parse(in);
    WeatSpec spec;
    spec.name = j.value("name", path.stem().string());
    spec.targets_x = j.at("X").get<std::vector<std::string>>();
    spec.targets_y = j.at("Y").get<std::vector<std::string>>();
    spec.attributes_a = j.at("A").get<std::vector<std::string>>();
    spec.attributes_b = j.at("B").get<std::vector<std::string>>();
    return spec;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
}

double weat_association(const Eigen::Ref<const Vector>& w, const Matrix& attrs_a, const Matrix& attrs_b) {
  if (attrs_a.rows() == 0 || attrs_b.rows() == 0) throw DomainError("weat_association: empty attribute set");
  double sa = 0.0;
  for (Eigen::Index i = 0; i < attrs_a.rows(); ++i) sa += cosine(w, attrs_a.row(i).transpose());
  double sb = 0.0;
  for (Eigen::Index i = 0; i < attrs_b.rows(); ++i) sb += cosine(w, attrs_b.row(i).transpose());
  return sa / static_cast<double>(attrs_a.rows()) - sb / static_cast<double>(attrs_b.rows());
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // Exact while the running value fits: r * (n - i) / (i + 1) stays integral.
  unsigned __int128 r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > SIZE_MAX) return SIZE_MAX;
  }
  return static_cast<std::size_t>(r);
}

double weat_tie_tolerance(const std::vector<double>& s) {
  double mass = 0.0;
  for (double v : s) mass += std::abs(v);
  return 1e-12 * std::max(mass, 1.0);
}

PermutationTally weat_permutation_test(const std::vector<double>& s, std::size_t size_x, const WeatOptions& opts) {
  const std::size_t n = s.size();
  if (size_x == 0 || size_x >= n) throw DomainError("weat: both target sets must be non-empty");

  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  const double observed = sum_subset(s, identity, size_x);
  const double threshold = observed - weat_tie_tolerance(s);

  PermutationTally tally;
  const std::size_t partitions = binomial(n, size_x);
  if (partitions <= opts.exact_limit) {
    tally.exact = true;
    std::vector<std::size_t> comb(identity.begin(), identity.begin() + static_cast<std::ptrdiff_t>(size_x));
    while (true) {
      ++tally.total;
      if (sum_subset(s, comb, size_x) >= threshold) ++tally.at_least;
      // Next combination in lexicographic order.
      std::size_t i = size_x;
      while (i > 0 && comb[i - 1] == n - size_x + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < size_x; ++j) comb[j] = comb[j - 1] + 1;
    }
    return tally;
  }

  if (opts.permutations == 0) throw DomainError("weat: permutation budget must be positive");
  const std::size_t blocks = (opts.permutations + kDrawsPerBlock - 1) / kDrawsPerBlock;
  std::vector<std::size_t> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(opts.seed, b));
    const std::size_t draws = std::min(kDrawsPerBlock, opts.permutations - b * kDrawsPerBlock);
    std::vector<std::size_t> idx = identity;
    std::size_t local = 0;
    for (std::size_t d = 0; d < draws; ++d) {
      for (std::size_t i = 0; i < size_x; ++i) {
        const std::size_t j = i + rng.uniform_index(n - i);
        std::swap(idx[i], idx[j]);
      }
      if (sum_subset(s, idx, size_x) >= threshold) ++local;
    }
    hits[b] = local;
  });
  // The observed partition counts once in both numerator and denominator.
  tally.at_least = std::accumulate(hits.begin(), hits.end(), std::size_t{0}) + 1;
  tally.total = opts.permutations + 1;
  return tally;
}

WeatResult weat(const EmbeddingSet& e, const WeatSpec& spec, const WeatOptions& opts) {
  WeatResult r;
  r.name = spec.name;
  const auto x = resolve(e, spec.targets_x, opts.lowercase, r.dropped_words);
  const auto y = resolve(e, spec.targets_y, opts.lowercase, r.dropped_words);
  const auto a = resolve(e, spec.attributes_a, opts.lowercase, r.dropped_words);
  const auto b = resolve(e, spec.attributes_b, opts.lowercase, r.dropped_words);
  if (x.empty() || y.empty() || a.empty() || b.empty()) {
    std::string msg = "weat '" + spec.name + "': a word list is empty after dropping out-of-vocabulary words:";
    for (const auto& w : r.dropped_words) msg += " " + w;
    throw DomainError(msg);
  }
  r.size_x = x.size();
  r.size_y = y.size();
  r.size_a = a.size();
  r.size_b = b.size();
  if (x.size() != y.size()) {
    r.warnings.push_back("|X| != |Y| (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                         "); effect size is not the standard balanced statistic");
  }

  const Matrix ma = gather(e, a);
  const Matrix mb = gather(e, b);
  std::vector<double> s;
  s.reserve(x.size() + y.size());
  for (auto i : x) s.push_back(weat_association(e.row(i).transpose(), ma, mb));
  for (auto i : y) s.push_back(weat_association(e.row(i).transpose(), ma, mb));

  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  const double mean_x = std::accumulate(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(x.size()), 0.0) / nx;
  const double mean_y = std::accumulate(s.begin() + static_cast<std::ptrdiff_t>(x.size()), s.end(), 0.0) / ny;
  const double mean_all = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  double ss = 0.0;
  for (double v : s) ss += (v - mean_all) * (v - mean_all);
  const double sd = s.size() > 1 ? std::sqrt(ss / static_cast<double>(s.size() - 1)) : 0.0;
  r.effect_size = sd > 0.0 ? (mean_x - mean_y) / sd : 0.0;

  const PermutationTally t = weat_permutation_test(s, x.size(), opts);
  r.exact = t.exact;
  r.n_permutations = t.total;
  r.n_at_least = t.at_least;
  r.p_value = static_cast<double>(t.at_least) / static_cast<double>(t.total);
  return r;
}

double neighborhood_metric(const EmbeddingSet& original, const EmbeddingSet& debiased, const GenderDirection& g,
                           std::size_t top_n, const KMeansConfig& km) {
  const BiasedWords pool = select_biased_words(original, g.direction, top_n);
  Matrix points(static_cast<Eigen::Index>(pool.rows.size()), static_cast<Eigen::Index>(debiased.dim()));
  for (std::size_t i = 0; i < pool.rows.size(); ++i) {
    const std::string& w = original.word(pool.rows[i]);
    auto j = debiased.index_of(w);
    if (!j) throw DomainError("neighborhood_metric: biased word '" + w + "' missing from the debiased embeddings");
    points.row(static_cast<Eigen::Index>(i)) = debiased.row(*j);
  }
  KMeansConfig two = km;
  two.k = 2;
  const ClusterAssignment a = kmeans(points, two);
  return 100.0 * alignment_accuracy(a.labels, pool.truth);
}

ClusteringReport neighborhood_report(const EmbeddingSet& original, const EmbeddingSet& debiased,
                                     const GenderDirection& g, const std::vector<std::size_t>& top_ns,
                                     const KMeansConfig& km, std::string tag) {
  ClusteringReport report;
  report.embedding_tag = std::move(tag);
  report.kmeans = km;
  report.kmeans.k = 2;
  std::vector<double> acc(top_ns.size());
  parallel_for(top_ns.size(), [&](std::size_t i) { acc[i] = neighborhood_metric(original, debiased, g, top_ns[i], km); });
  for (std::size_t i = 0; i < top_ns.size(); ++i) report.per_n[top_ns[i]] = acc[i];
  return report;
}

QualitativeGaps qualitative_gaps(const EmbeddingSet& e, const std::vector<std::string>& words,
                                 const std::string& male_anchor, const std::string& female_anchor) {
  QualitativeGaps out;
  out.male_anchor = male_anchor;
  out.female_anchor = female_anchor;
  const Vector he = e.vector(male_anchor);
  const Vector she = e.vector(female_anchor);
  for (const auto& w : words) {
    auto i = e.index_of(w);
    if (!i) {
      out.missing.push_back(w);
      continue;
    }
    const Vector v = e.row(*i).transpose();
    out.gaps.emplace_back(w, cosine(v, he) - cosine(v, she));
  }
  return out;
}

std::vector<ProjectionRow> export_projection(const EmbeddingSet& e, const std::vector<std::string>& words,
                                             const std::vector<int>& truth) {
  if (words.size() < 3) throw DomainError("export_projection: need at least 3 words");
  if (truth.size() != words.size()) throw DomainError("export_projection: one tag per word required");
  if (e.dim() < 2) throw DomainError("export_projection: embeddings must have at least 2 dimensions");
  std::vector<std::size_t> rows;
  for (const auto& w : words) {
    auto i = e.index_of(w);
    if (!i) throw DomainError("export_projection: word '" + w + "' is not in the vocabulary");
    rows.push_back(*i);
  }
  const Matrix m = gather(e, rows);
  const PrincipalComponents pc = principal_components(m, 2);
  std::vector<ProjectionRow> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Vector c = m.row(static_cast<Eigen::Index>(i)).transpose() - pc.mean;
    out.push_back({words[i], c.dot(pc.components[0]), c.dot(pc.components[1]), truth[i]});
  }
  return out;
}

void write_projection_csv(const std::vector<ProjectionRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "word,x,y,tag\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g,%d\n", r.x, r.y, r.tag);
    out << csv_field(r.word) << buf;
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace dhd
