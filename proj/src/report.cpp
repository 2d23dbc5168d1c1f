#include "dhd/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dhd {

namespace {

std::string fixed(double x, int decimals) {
  if (std::isnan(x)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string sig(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

ordered_json number_or_null(double x) { return std::isnan(x) ? ordered_json(nullptr) : ordered_json(x); }

const char* kind_name(SectionKind k) { return k == SectionKind::kSemantic ? "semantic" : "syntactic"; }

}  // namespace

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

ordered_json to_json(const KMeansConfig& km) {
  return {{"k", km.k},           {"seed", km.seed},         {"max_iters", km.max_iters},
          {"tol", km.tol},       {"restarts", km.restarts}, {"normalize", km.normalize}};
}

ordered_json to_json(const DebiasConfig& cfg) {
  ordered_json pairs = ordered_json::array();
  for (const auto& [f, m] : cfg.gender_pairs) pairs.push_back({f, m});
  return {{"gender_pairs", pairs},
          {"exclude_words", cfg.exclude_words},
          {"candidate_components", cfg.candidate_components},
          {"neighborhood_top_n", cfg.neighborhood_top_n},
          {"seed", cfg.seed},
          {"normalize_before_metrics", cfg.normalize_before_metrics},
          {"kmeans", to_json(cfg.kmeans())},
          {"gender_direction_recomputed_after_frequency_removal", true},
          {"biased_words_selected_in", "original space"}};
}

ordered_json to_json(const GenderDirection& g) {
  ordered_json used = ordered_json::array();
  for (const auto& [f, m] : g.pairs_used) used.push_back({f, m});
  ordered_json dropped = ordered_json::array();
  for (const auto& [f, m] : g.pairs_dropped) dropped.push_back({f, m});
  return {{"source_space", g.source_space}, {"pairs_used", used}, {"pairs_dropped", dropped}};
}

ordered_json to_json(const SweepResult& s) {
  ordered_json per = ordered_json::array();
  for (const auto& e : s.per_component_accuracy) {
    per.push_back({{"component", e.component}, {"accuracy", e.accuracy}, {"explained_variance", e.explained_variance}});
  }
  ordered_json j;
  j["forced"] = s.forced;
  j["chosen_component"] = s.chosen_component;
  if (!s.forced) j["baseline_accuracy"] = s.baseline_accuracy;
  j["per_component_accuracy"] = per;
  j["top_n"] = s.top_n;
  j["kmeans"] = to_json(s.kmeans);
  return j;
}

ordered_json to_json(const WeatResult& r) {
  ordered_json j;
  j["name"] = r.name;
  j["effect_size"] = r.effect_size;
  j["p_value"] = round_significant(r.p_value, 4);
  j["p_method"] = r.exact ? "exact" : "monte_carlo";
  j["n_permutations"] = r.n_permutations;
  j["n_at_least_observed"] = r.n_at_least;
  j["sizes"] = {{"X", r.size_x}, {"Y", r.size_y}, {"A", r.size_a}, {"B", r.size_b}};
  j["dropped_words"] = r.dropped_words;
  j["warnings"] = r.warnings;
  return j;
}

ordered_json to_json(const ClusteringReport& r) {
  ordered_json per = ordered_json::object();
  for (const auto& [n, acc] : r.per_n) per[std::to_string(n)] = acc;
  return {{"embedding", r.embedding_tag}, {"accuracy_percent", per}, {"kmeans", to_json(r.kmeans)}};
}

ordered_json to_json(const AnalogyScores& s) {
  ordered_json sections = ordered_json::array();
  for (const auto& sec : s.sections) {
    sections.push_back({{"label", sec.label},
                        {"kind", kind_name(sec.kind)},
                        {"correct", sec.correct},
                        {"attempted", sec.attempted},
                        {"skipped", sec.skipped}});
  }
  return {{"semantic", number_or_null(s.semantic)},
          {"syntactic", number_or_null(s.syntactic)},
          {"total", number_or_null(s.total)},
          {"correct", s.correct},
          {"attempted", s.attempted},
          {"skipped", s.skipped},
          {"oov_counts_as_wrong", s.oov_counts_as_wrong},
          {"sections", sections}};
}

ordered_json to_json(const CategorizationScore& s) {
  return {{"purity", s.purity}, {"clustered", s.clustered}, {"oov", s.oov}, {"categories", s.categories}};
}

ordered_json to_json(const QualitativeGaps& q) {
  ordered_json gaps = ordered_json::array();
  for (const auto& [w, g] : q.gaps) gaps.push_back({{"word", w}, {"gap", g}});
  return {{"male_anchor", q.male_anchor}, {"female_anchor", q.female_anchor}, {"gaps", gaps}, {"missing", q.missing}};
}

ordered_json to_json(const EvalReport& r) {
  ordered_json j = ordered_json::object();
  if (!r.weat.empty()) {
    ordered_json w = ordered_json::array();
    for (const auto& x : r.weat) w.push_back(to_json(x));
    j["weat"] = std::move(w);
  }
  if (!r.clustering.empty()) {
    ordered_json c = ordered_json::array();
    for (const auto& x : r.clustering) c.push_back(to_json(x));
    j["neighborhood"] = std::move(c);
  }
  if (r.google || r.msr) {
    ordered_json a = ordered_json::object();
    if (r.google) a["google"] = to_json(*r.google);
    if (r.msr) a["msr"] = to_json(*r.msr);
    j["analogy"] = std::move(a);
  }
  if (!r.categorization.empty()) {
    ordered_json c = ordered_json::object();
    for (const auto& [name, s] : r.categorization) c[name] = to_json(s);
    j["categorization"] = std::move(c);
  }
  ordered_json errors = ordered_json::array();
  for (const auto& [what, msg] : r.errors) errors.push_back({{"evaluation", what}, {"message", msg}});
  j["errors"] = std::move(errors);
  return j;
}

std::string format_weat_table(const std::vector<WeatResult>& results, const std::string& embedding_tag) {
  std::ostringstream os;
  os << "WEAT (effect size d, one-sided p)\n";
  std::string head1 = pad("Embeddings", 20);
  std::string head2 = pad("", 20);
  std::string row = pad(embedding_tag, 20);
  for (const auto& r : results) {
    head1 += pad(r.name, 24);
    head2 += pad("d", 10) + pad("p", 14);
    row += pad(fixed(r.effect_size, 4), 10) + pad(sig(round_significant(r.p_value, 4), 4), 14);
  }
  os << head1 << "\n" << head2 << "\n" << row << "\n";
  return os.str();
}

std::string format_clustering_table(const std::vector<ClusteringReport>& reports) {
  std::ostringstream os;
  os << "Neighborhood clustering accuracy (%)\n";
  if (reports.empty()) return os.str();
  std::string head = pad("Embeddings", 20);
  for (const auto& [n, acc] : reports.front().per_n) head += pad("Top " + std::to_string(n), 10);
  os << head << "\n";
  for (const auto& r : reports) {
    std::string row = pad(r.embedding_tag, 20);
    for (const auto& [n, acc] : r.per_n) row += pad(fixed(acc, 1), 10);
    os << row << "\n";
  }
  os << "(k-means seed " << reports.front().kmeans.seed << ", restarts " << reports.front().kmeans.restarts
     << ", normalized " << (reports.front().kmeans.normalize ? "yes" : "no") << ")\n";
  return os.str();
}

std::string format_quality_table(const EvalReport& r, const std::string& embedding_tag) {
  auto cat = [&](const char* name) {
    auto it = r.categorization.find(name);
    return it == r.categorization.end() ? std::string("-") : fixed(it->second.purity, 1);
  };
  std::ostringstream os;
  os << "Analogy accuracy / categorization purity (x100)\n";
  os << pad("Embeddings", 20) << pad("Sem", 8) << pad("Syn", 8) << pad("Total", 8) << pad("MSR", 8) << "| "
     << pad("AP", 8) << pad("ESSLI", 8) << pad("Battig", 8) << pad("BLESS", 8) << "\n";
  os << pad(embedding_tag, 20) << pad(r.google ? fixed(r.google->semantic, 1) : "-", 8)
     << pad(r.google ? fixed(r.google->syntactic, 1) : "-", 8) << pad(r.google ? fixed(r.google->total, 1) : "-", 8)
     << pad(r.msr ? fixed(r.msr->total, 1) : "-", 8) << "| " << pad(cat("ap"), 8) << pad(cat("esslli"), 8)
     << pad(cat("battig"), 8) << pad(cat("bless"), 8) << "\n";
  return os.str();
}

std::string format_eval_text(const EvalReport& r, const std::string& embedding_tag) {
  std::ostringstream os;
  if (!r.weat.empty()) os << format_weat_table(r.weat, embedding_tag) << "\n";
  if (!r.clustering.empty()) os << format_clustering_table(r.clustering) << "\n";
  if (r.google || r.msr || !r.categorization.empty()) os << format_quality_table(r, embedding_tag) << "\n";
  if (!r.errors.empty()) {
    os << "Errors\n";
    for (const auto& [what, msg] : r.errors) os << "  " << what << ": " << msg << "\n";
  }
  return os.str();
}

std::string format_sweep_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "component,accuracy\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "baseline,%.17g\n", s.baseline_accuracy);
  os << buf;
  for (const auto& e : s.per_component_accuracy) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", e.component, e.accuracy);
    os << buf;
  }
  return os.str();
}

std::string format_qualitative_table(const std::vector<std::pair<std::string, QualitativeGaps>>& columns) {
  std::ostringstream os;
  if (columns.empty()) return os.str();
  const auto& first = columns.front().second;
  os << "cos(w, " << first.male_anchor << ") - cos(w, " << first.female_anchor << ")\n";
  os << pad("Word", 16);
  for (const auto& [tag, q] : columns) os << pad(tag, 12);
  os << "\n";
  for (std::size_t i = 0; i < first.gaps.size(); ++i) {
    const std::string& w = first.gaps[i].first;
    os << pad(w, 16);
    for (const auto& [tag, q] : columns) {
      std::string cell = "-";
      for (const auto& [word, gap] : q.gaps) {
        if (word == w) cell = fixed(gap, 3);
      }
      os << pad(cell, 12);
    }
    os << "\n";
  }
  if (!first.missing.empty()) {
    os << "missing:";
    for (const auto& w : first.missing) os << " " << w;
    os << "\n";
  }
  return os.str();
}

}  // namespace dhd
