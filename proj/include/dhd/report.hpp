#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dhd/bias_eval.hpp"
#include "dhd/debias.hpp"
#include "dhd/manifest.hpp"
#include "dhd/quality_eval.hpp"

namespace dhd {

/// Everything `dhd eval` can produce. Absent members were not requested.
struct EvalReport {
  std::optional<AnalogyScores> google;
  std::optional<AnalogyScores> msr;
  std::map<std::string, CategorizationScore> categorization;  // ap, esslli, battig, bless
  std::vector<WeatResult> weat;
  std::vector<ClusteringReport> clustering;
  std::vector<std::pair<std::string, std::string>> errors;  // (evaluation, message)
};

/// Rounds to `digits` significant figures.
double round_significant(double x, int digits);

ordered_json to_json(const KMeansConfig& km);
ordered_json to_json(const DebiasConfig& cfg);
ordered_json to_json(const GenderDirection& g);
ordered_json to_json(const SweepResult& s);
ordered_json to_json(const WeatResult& r);
ordered_json to_json(const ClusteringReport& r);
ordered_json to_json(const AnalogyScores& s);
ordered_json to_json(const CategorizationScore& s);
ordered_json to_json(const QualitativeGaps& q);
ordered_json to_json(const EvalReport& r);

/// Plain-text tables laid out like the published result tables.
std::string format_weat_table(const std::vector<WeatResult>& results, const std::string& embedding_tag);
std::string format_clustering_table(const std::vector<ClusteringReport>& reports);
std::string format_quality_table(const EvalReport& r, const std::string& embedding_tag);
std::string format_eval_text(const EvalReport& r, const std::string& embedding_tag);
std::string format_sweep_csv(const SweepResult& s);
std::string format_qualitative_table(const std::vector<std::pair<std::string, QualitativeGaps>>& columns);

}  // namespace dhd
