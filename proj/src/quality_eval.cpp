#include "dhd/quality_eval.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dhd/errors.hpp"
#include "dhd/parallel.hpp"

namespace dhd {

namespace {

constexpr std::size_t kQueryBatch = 64;
constexpr Eigen::Index kVocabBlock = 8192;

std::string to_lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(std::move(tok));
  return out;
}

std::ifstream open_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double percent(std::size_t num, std::size_t den) {
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

AnalogyDataset load_google_analogy(const std::filesystem::path& path, bool lowercase) {
  auto in = open_dataset(path);
  AnalogyDataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == ":" || toks[0].starts_with(":")) {
      std::string label = toks[0] == ":" ? (toks.size() > 1 ? toks[1] : "") : toks[0].substr(1);
      if (label.empty()) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": empty section name");
      for (const auto& s : ds.sections) {
        if (s.label == label) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": duplicate section '" + label + "'");
      }
      if (!ds.sections.empty()) ds.sections.back().end = ds.questions.size();
      const SectionKind kind = label.starts_with("gram") ? SectionKind::kSyntactic : SectionKind::kSemantic;
      ds.sections.push_back({label, kind, ds.questions.size(), ds.questions.size()});
      continue;
    }
    if (toks.size() != 4) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 4 words, found " +
                       std::to_string(toks.size()));
    }
    if (ds.sections.empty()) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": question before any section header");
    if (lowercase) {
      for (auto& t : toks) t = to_lower(t);
    }
    ds.questions.push_back({toks[0], toks[1], toks[2], toks[3]});
  }
  if (!ds.sections.empty()) ds.sections.back().end = ds.questions.size();
  if (ds.questions.empty()) throw ParseError("analogy dataset '" + path.string() + "' has no questions");
  return ds;
}

AnalogyDataset load_msr_analogy(const std::filesystem::path& path, bool lowercase) {
  auto in = open_dataset(path);
  AnalogyDataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 4 && toks.size() != 5) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 4 words (plus optional tag)");
    }
    if (lowercase) {
      for (auto& t : toks) t = to_lower(t);
    }
    ds.questions.push_back({toks[0], toks[1], toks[2], toks[3]});
  }
  if (ds.questions.empty()) throw ParseError("analogy dataset '" + path.string() + "' has no questions");
  ds.sections.push_back({"msr", SectionKind::kSyntactic, 0, ds.questions.size()});
  return ds;
}

AnalogySolver::AnalogySolver(const EmbeddingSet& e) : e_(e), unit_(e.vectors()) {
  if (e.size() < 4) throw DomainError("analogy: vocabulary needs at least 4 words");
  for (Eigen::Index r = 0; r < unit_.rows(); ++r) {
    const double n = unit_.row(r).norm();
    if (n > 0.0) unit_.row(r) /= n;
  }
}

void AnalogySolver::solve_batch(const std::array<std::size_t, 3>* queries, std::size_t m, std::size_t* out) const {
  const auto cols = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd q(unit_.cols(), cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const auto& [a, b, c] = queries[j];
    q.col(j) = (unit_.row(static_cast<Eigen::Index>(c)) - unit_.row(static_cast<Eigen::Index>(a)) +
                unit_.row(static_cast<Eigen::Index>(b))).transpose();
  }

  std::vector<double> best(m, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> arg(m, 0);
  const Eigen::Index n = unit_.rows();
  Eigen::MatrixXd scores;
  for (Eigen::Index start = 0; start < n; start += kVocabBlock) {
    const Eigen::Index len = std::min(kVocabBlock, n - start);
    scores.noalias() = unit_.middleRows(start, len) * q;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& qj = queries[j];
      for (Eigen::Index r = 0; r < len; ++r) {
        const auto row = static_cast<std::size_t>(start + r);
        if (row == qj[0] || row == qj[1] || row == qj[2]) continue;
        if (scores(r, j) > best[j]) {
          best[j] = scores(r, j);
          arg[j] = row;
        }
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) out[j] = arg[j];
}

std::size_t AnalogySolver::solve(std::size_t a, std::size_t b, std::size_t c) const {
  const std::array<std::size_t, 3> query{a, b, c};
  std::size_t out = 0;
  solve_batch(&query, 1, &out);
  return out;
}

std::vector<std::size_t> AnalogySolver::solve_all(const std::vector<std::array<std::size_t, 3>>& queries) const {
  std::vector<std::size_t> out(queries.size());
  const std::size_t batches = (queries.size() + kQueryBatch - 1) / kQueryBatch;
  parallel_for(batches, [&](std::size_t b) {
    const std::size_t begin = b * kQueryBatch;
    const std::size_t m = std::min(kQueryBatch, queries.size() - begin);
    solve_batch(queries.data() + begin, m, out.data() + begin);
  });
  return out;
}

std::optional<std::string> solve_analogy(const EmbeddingSet& e, const std::string& a, const std::string& b,
                                         const std::string& c) {
  auto ia = e.index_of(a);
  auto ib = e.index_of(b);
  auto ic = e.index_of(c);
  if (!ia || !ib || !ic) return std::nullopt;
  AnalogySolver solver(e);
  return e.word(solver.solve(*ia, *ib, *ic));
}

AnalogyScores analogy_accuracy(const AnalogySolver& solver, const AnalogyDataset& ds, const AnalogyOptions& opts) {
  if (ds.questions.empty()) throw DomainError("analogy_accuracy: empty dataset");
  const EmbeddingSet& e = solver.embeddings();

  std::vector<std::array<std::size_t, 3>> queries;
  std::vector<std::size_t> expected;
  std::vector<std::size_t> question_of;  // query -> question index
  std::vector<bool> attempted(ds.questions.size(), false);
  for (std::size_t i = 0; i < ds.questions.size(); ++i) {
    const auto& q = ds.questions[i];
    auto ia = e.index_of(q.a), ib = e.index_of(q.b), ic = e.index_of(q.c), id = e.index_of(q.expected);
    if (!ia || !ib || !ic || !id) continue;
    attempted[i] = true;
    queries.push_back({*ia, *ib, *ic});
    expected.push_back(*id);
    question_of.push_back(i);
  }
  const auto predicted = solver.solve_all(queries);
  std::vector<bool> correct(ds.questions.size(), false);
  for (std::size_t k = 0; k < queries.size(); ++k) correct[question_of[k]] = predicted[k] == expected[k];

  AnalogyScores scores;
  scores.oov_counts_as_wrong = opts.oov_counts_as_wrong;
  std::size_t sem_c = 0, sem_d = 0, syn_c = 0, syn_d = 0;
  for (const auto& sec : ds.sections) {
    SectionScore s{sec.label, sec.kind};
    for (std::size_t i = sec.begin; i < sec.end; ++i) {
      if (!attempted[i]) {
        ++s.skipped;
        continue;
      }
      ++s.attempted;
      if (correct[i]) ++s.correct;
    }
    const std::size_t denom = s.attempted + (opts.oov_counts_as_wrong ? s.skipped : 0);
    if (sec.kind == SectionKind::kSemantic) {
      sem_c += s.correct;
      sem_d += denom;
    } else {
      syn_c += s.correct;
      syn_d += denom;
    }
    scores.correct += s.correct;
    scores.attempted += s.attempted;
    scores.skipped += s.skipped;
    scores.sections.push_back(std::move(s));
  }
  scores.semantic = percent(sem_c, sem_d);
  scores.syntactic = percent(syn_c, syn_d);
  scores.total = percent(sem_c + syn_c, sem_d + syn_d);
  return scores;
}

AnalogyScores analogy_accuracy(const EmbeddingSet& e, const AnalogyDataset& ds, const AnalogyOptions& opts) {
  const AnalogySolver solver(e);
  return analogy_accuracy(solver, ds, opts);
}

CategorizationDataset load_categorization(const std::filesystem::path& path, bool lowercase) {
  auto in = open_dataset(path);
  CategorizationDataset ds;
  std::set<std::string> seen;
  std::set<std::string> cats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 'word<TAB>category'");
    }
    std::string word = line.substr(0, tab);
    std::string cat = line.substr(tab + 1);
    if (lowercase) word = to_lower(word);
    if (!seen.insert(word).second) {
      ++ds.duplicates_skipped;
      continue;
    }
    if (cats.insert(cat).second) ds.categories.push_back(cat);
    ds.items.emplace_back(std::move(word), std::move(cat));
  }
  if (ds.categories.size() < 2) throw ParseError("categorization dataset '" + path.string() + "' needs at least 2 categories");
  return ds;
}

CategorizationScore categorization_purity(const EmbeddingSet& e, const CategorizationDataset& ds, KMeansConfig km) {
  std::map<std::string, int> category_id;
  std::vector<std::size_t> rows;
  std::vector<int> truth;
  CategorizationScore score;
  for (const auto& [word, cat] : ds.items) {
    auto i = e.index_of(word);
    if (!i) {
      ++score.oov;
      continue;
    }
    auto [it, inserted] = category_id.emplace(cat, static_cast<int>(category_id.size()));
    rows.push_back(*i);
    truth.push_back(it->second);
  }
  if (category_id.size() < 2) {
    throw DomainError("categorization: fewer than 2 categories have in-vocabulary words");
  }
  Matrix points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(e.dim()));
  for (std::size_t i = 0; i < rows.size(); ++i) points.row(static_cast<Eigen::Index>(i)) = e.row(rows[i]);

  km.k = category_id.size();
  const ClusterAssignment a = kmeans(points, km);
  score.purity = 100.0 * purity(a.labels, truth);
  score.clustered = rows.size();
  score.categories = category_id.size();
  return score;
}

}  // namespace dhd
