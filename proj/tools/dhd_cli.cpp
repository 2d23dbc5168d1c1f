// dhd: Hard / Double-Hard Debias of word embeddings and the bias and quality
// evaluations that go with it.

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhd/bias_eval.hpp"
#include "dhd/debias.hpp"
#include "dhd/embedding_store.hpp"
#include "dhd/errors.hpp"
#include "dhd/manifest.hpp"
#include "dhd/parallel.hpp"
#include "dhd/quality_eval.hpp"
#include "dhd/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;

/// A required input file is missing; maps to exit code 2.
struct MissingInput : dhd::Error {
  using dhd::Error::Error;
};

void require_file(const std::string& role, const std::string& path) {
  if (!fs::is_regular_file(path)) throw MissingInput(role + " file not found: " + path);
}

struct CommonOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::size_t max_rank = 0;  // 0 = no cutoff
  bool require_alpha = false;
  bool normalize = false;
  std::string config_path;
  std::size_t restarts = 10;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* normalize_opt = nullptr;
  CLI::Option* restarts_opt = nullptr;

  void attach(CLI::App* app) {
    seed_opt = app->add_option("--seed", seed, "Seed for every random choice (k-means, WEAT sampling)");
    app->add_option("--threads", threads, "Worker threads; 0 = all cores. Never changes results");
    app->add_option("--max-rank", max_rank, "Keep only the first N words of each embedding file (0 = all)");
    app->add_flag("--require-alpha", require_alpha, "Drop tokens with non-alphabetic characters");
    normalize_opt = app->add_flag("--normalize", normalize, "Unit-normalize vectors before clustering");
    restarts_opt = app->add_option("--restarts", restarts, "k-means restarts (restart r uses seed + r)");
    app->add_option("--config", config_path, "Debias config JSON: {\"pairs\": [[f, m], ...], \"exclude\": [...]}");
  }

  dhd::VocabFilter filter() const {
    dhd::VocabFilter f;
    if (max_rank > 0) f.max_rank = max_rank;
    f.require_alpha = require_alpha;
    return f;
  }

  /// JSON config first, then any flag given on the command line.
  dhd::DebiasConfig debias_config() const {
    dhd::DebiasConfig cfg;
    if (!config_path.empty()) {
      require_file("config", config_path);
      cfg = dhd::load_debias_config(config_path);
    }
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (normalize_opt->count() > 0) cfg.normalize_before_metrics = normalize;
    if (restarts_opt->count() > 0) cfg.kmeans_restarts = restarts;
    return cfg;
  }

  void record(dhd::RunManifest& m) const {
    m.config["vocab_filter"] = {{"max_rank", max_rank > 0 ? dhd::ordered_json(max_rank) : dhd::ordered_json(nullptr)},
                                {"require_alpha", require_alpha},
                                {"max_rank_assumes_frequency_order", true}};
  }
};

dhd::EmbeddingSet load(dhd::RunManifest& m, const std::string& role, const std::string& path,
                       const CommonOptions& common, dhd::ordered_json& load_info) {
  require_file(role, path);
  dhd::LoadStats stats;
  auto e = dhd::load_text_embeddings(path, common.filter(), &stats);
  m.add_input(role, path);
  load_info[role] = {{"words", e.size()},
                     {"dim", e.dim()},
                     {"lines", stats.lines},
                     {"duplicates_skipped", stats.duplicates_skipped},
                     {"filtered_out", stats.filtered_out}};
  if (stats.duplicates_skipped > 0) {
    std::cerr << "warning: " << path << ": skipped " << stats.duplicates_skipped << " duplicate words\n";
  }
  return e;
}

void warn_dropped_pairs(const dhd::GenderDirection& g) {
  for (const auto& [f, m] : g.pairs_dropped) {
    std::cerr << "warning: gender pair (" << f << ", " << m << ") dropped: word out of vocabulary\n";
  }
}

dhd::RunManifest start_manifest(const std::string& command, const CommonOptions& common) {
  dhd::set_thread_count(common.threads);
  dhd::RunManifest m;
  m.command = command;
  m.timestamp = dhd::utc_timestamp();
  m.threads = dhd::thread_count();
  common.record(m);
  return m;
}

std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }

// ---------------------------------------------------------------------------

struct DebiasArgs {
  CommonOptions common;
  std::string embeddings;
  std::string out;
  std::optional<std::size_t> component;
  std::optional<std::size_t> candidates;
  std::optional<std::size_t> top_n;
  int precision = 6;
};

int run_debias(const DebiasArgs& a) {
  dhd::RunManifest m = start_manifest("debias", a.common);
  dhd::DebiasConfig cfg = a.common.debias_config();
  if (a.candidates) cfg.candidate_components = *a.candidates;
  if (a.top_n) cfg.neighborhood_top_n = *a.top_n;
  if (!a.common.config_path.empty()) m.add_input("config", a.common.config_path);

  dhd::ordered_json load_info;
  const auto e = load(m, "embeddings", a.embeddings, a.common, load_info);
  m.config["debias"] = dhd::to_json(cfg);
  m.config["forced_component"] = a.component ? dhd::ordered_json(*a.component) : dhd::ordered_json(nullptr);
  m.config["precision"] = a.precision;

  const auto result = dhd::double_hard_debias(e, cfg, a.component);
  warn_dropped_pairs(result.gender);
  dhd::write_text_embeddings(result.embeddings, a.out, a.precision);

  dhd::ordered_json report;
  report["manifest"] = m.reproducible();
  report["load"] = load_info;
  report["sweep"] = dhd::to_json(result.sweep);
  report["final_gender_direction"] = dhd::to_json(result.gender);
  report["output"] = {{"path", a.out}, {"sha256", dhd::sha256_file(a.out)}};
  dhd::write_json(report, a.out + ".sweep.json");
  dhd::write_json(m.run_record(), manifest_path(a.out));

  std::cout << "removed principal component " << result.sweep.chosen_component
            << (result.sweep.forced ? " (forced)" : " (chosen by sweep)") << "\n"
            << "wrote " << a.out << ", " << a.out << ".sweep.json, " << manifest_path(a.out) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  CommonOptions common;
  std::string embeddings;
  std::string original;
  std::string tag;
  std::vector<std::string> weat_specs;
  std::string google, msr, ap, esslli, battig, bless;
  std::vector<std::size_t> top_ns{100, 500, 1000};
  std::vector<std::string> only;
  std::size_t permutations = 100000;
  bool oov_as_wrong = false;
  bool no_lowercase = false;
  std::string out;
  std::string text_out;
};

int run_eval(const EvalArgs& a) {
  dhd::RunManifest m = start_manifest("eval", a.common);
  const std::set<std::string> only(a.only.begin(), a.only.end());
  auto wanted = [&](const std::string& what, bool have_inputs) { return only.empty() ? have_inputs : only.contains(what); };
  const bool lowercase = !a.no_lowercase;
  const std::string tag = a.tag.empty() ? fs::path(a.embeddings).stem().string() : a.tag;

  dhd::ordered_json load_info;
  const auto e = load(m, "embeddings", a.embeddings, a.common, load_info);
  const dhd::DebiasConfig cfg = a.common.debias_config();
  if (!a.common.config_path.empty()) m.add_input("config", a.common.config_path);

  dhd::KMeansConfig km = cfg.kmeans();
  dhd::EvalReport report;
  auto guarded = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const MissingInput&) {
      throw;
    } catch (const std::exception& ex) {
      report.errors.emplace_back(what, ex.what());
      std::cerr << "error: " << what << ": " << ex.what() << "\n";
    }
  };

  m.config["embedding_tag"] = tag;
  m.config["lowercase_datasets"] = lowercase;
  m.config["kmeans"] = dhd::to_json(km);

  if (wanted("weat", !a.weat_specs.empty())) {
    dhd::WeatOptions wo;
    wo.permutations = a.permutations;
    wo.seed = cfg.seed;
    wo.lowercase = lowercase;
    m.config["weat"] = {{"permutations", wo.permutations}, {"exact_limit", wo.exact_limit}, {"seed", wo.seed}};
    if (a.weat_specs.empty()) report.errors.emplace_back("weat", "no --weat spec given");
    for (const auto& path : a.weat_specs) {
      require_file("weat spec", path);
      m.add_input("weat_spec", path);
      guarded("weat:" + path, [&] { report.weat.push_back(dhd::weat(e, dhd::load_weat_spec(path), wo)); });
    }
  }

  if (wanted("neighborhood", true)) {
    m.config["neighborhood"] = {{"top_n", a.top_ns}, {"gender_pairs", dhd::to_json(cfg)["gender_pairs"]}};
    guarded("neighborhood", [&] {
      std::optional<dhd::EmbeddingSet> original;
      if (!a.original.empty()) original = load(m, "original", a.original, a.common, load_info);
      const dhd::EmbeddingSet& base = original ? *original : e;
      const auto g = dhd::gender_direction(base, cfg, "original");
      warn_dropped_pairs(g);
      report.clustering.push_back(dhd::neighborhood_report(base, e, g, a.top_ns, km, tag));
    });
  }

  if (wanted("analogy", !a.google.empty() || !a.msr.empty())) {
    dhd::AnalogyOptions ao;
    ao.oov_counts_as_wrong = a.oov_as_wrong;
    m.config["analogy"] = {{"method", "3CosAdd"}, {"oov_counts_as_wrong", ao.oov_counts_as_wrong}};
    if (a.google.empty() && a.msr.empty()) report.errors.emplace_back("analogy", "no --google or --msr dataset given");
    std::optional<dhd::AnalogySolver> solver;
    guarded("analogy", [&] { solver.emplace(e); });
    if (solver && !a.google.empty()) {
      require_file("google analogy", a.google);
      m.add_input("google_analogy", a.google);
      guarded("analogy:google", [&] {
        report.google = dhd::analogy_accuracy(*solver, dhd::load_google_analogy(a.google, lowercase), ao);
      });
    }
    if (solver && !a.msr.empty()) {
      require_file("msr analogy", a.msr);
      m.add_input("msr_analogy", a.msr);
      guarded("analogy:msr", [&] { report.msr = dhd::analogy_accuracy(*solver, dhd::load_msr_analogy(a.msr, lowercase), ao); });
    }
  }

  const std::vector<std::pair<std::string, std::string>> cat_sets{
      {"ap", a.ap}, {"esslli", a.esslli}, {"battig", a.battig}, {"bless", a.bless}};
  bool any_cat = false;
  for (const auto& [name, path] : cat_sets) any_cat = any_cat || !path.empty();
  if (wanted("categorization", any_cat)) {
    if (!any_cat) report.errors.emplace_back("categorization", "no categorization dataset given");
    for (const auto& [name, path] : cat_sets) {
      if (path.empty()) continue;
      require_file(name + " dataset", path);
      m.add_input(name, path);
      guarded("categorization:" + name, [&] {
        report.categorization[name] = dhd::categorization_purity(e, dhd::load_categorization(path, lowercase), km);
      });
    }
  }

  dhd::ordered_json j;
  j["manifest"] = m.reproducible();
  j["load"] = load_info;
  j["results"] = dhd::to_json(report);
  const std::string text = format_eval_text(report, tag);
  std::cout << text;
  if (!a.out.empty()) {
    dhd::write_json(j, a.out);
    dhd::write_json(m.run_record(), manifest_path(a.out));
    dhd::write_text(text, a.text_out.empty() ? a.out + ".txt" : a.text_out);
  }
  return report.errors.empty() ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  CommonOptions common;
  std::string embeddings;
  std::string out;
  std::optional<std::size_t> candidates;
  std::optional<std::size_t> top_n;
};

int run_sweep_plot(const SweepArgs& a) {
  dhd::RunManifest m = start_manifest("sweep-plot", a.common);
  dhd::DebiasConfig cfg = a.common.debias_config();
  if (a.candidates) cfg.candidate_components = *a.candidates;
  if (a.top_n) cfg.neighborhood_top_n = *a.top_n;
  if (!a.common.config_path.empty()) m.add_input("config", a.common.config_path);
  dhd::ordered_json load_info;
  const auto e = load(m, "embeddings", a.embeddings, a.common, load_info);
  m.config["debias"] = dhd::to_json(cfg);

  const auto sweep = dhd::sweep_dominating_directions(e, cfg);
  const std::string csv = dhd::format_sweep_csv(sweep);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    dhd::write_text(csv, a.out);
    dhd::ordered_json record = m.run_record();
    record["sweep"] = dhd::to_json(sweep);
    dhd::write_json(record, manifest_path(a.out));
    std::cout << "chosen component " << sweep.chosen_component << "; wrote " << a.out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct QualitativeArgs {
  CommonOptions common;
  std::vector<std::string> embeddings;  // tag=path or path
  std::vector<std::string> words{"doctor", "programmer", "homemaker", "nurse", "worker", "president", "politician"};
  std::string male = "he";
  std::string female = "she";
  std::string out;
};

int run_qualitative(const QualitativeArgs& a) {
  dhd::RunManifest m = start_manifest("qualitative", a.common);
  m.config["words"] = a.words;
  m.config["anchors"] = {{"male", a.male}, {"female", a.female}};
  dhd::ordered_json load_info;
  std::vector<std::pair<std::string, dhd::QualitativeGaps>> columns;
  for (const auto& spec : a.embeddings) {
    const auto eq = spec.find('=');
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    const std::string tag = eq == std::string::npos ? fs::path(path).stem().string() : spec.substr(0, eq);
    const auto e = load(m, tag, path, a.common, load_info);
    columns.emplace_back(tag, dhd::qualitative_gaps(e, a.words, a.male, a.female));
  }
  std::cout << dhd::format_qualitative_table(columns);
  if (!a.out.empty()) {
    dhd::ordered_json j;
    j["manifest"] = m.reproducible();
    j["load"] = load_info;
    dhd::ordered_json cols = dhd::ordered_json::object();
    for (const auto& [tag, q] : columns) cols[tag] = dhd::to_json(q);
    j["gaps"] = cols;
    dhd::write_json(j, a.out);
    dhd::write_json(m.run_record(), manifest_path(a.out));
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ProjectArgs {
  CommonOptions common;
  std::string embeddings;
  std::string original;
  std::size_t top_n = 500;
  std::string out;
};

int run_project(const ProjectArgs& a) {
  dhd::RunManifest m = start_manifest("project", a.common);
  const dhd::DebiasConfig cfg = a.common.debias_config();
  if (!a.common.config_path.empty()) m.add_input("config", a.common.config_path);
  m.config["top_n"] = a.top_n;
  dhd::ordered_json load_info;
  const auto e = load(m, "embeddings", a.embeddings, a.common, load_info);
  std::optional<dhd::EmbeddingSet> original;
  if (!a.original.empty()) original = load(m, "original", a.original, a.common, load_info);
  const dhd::EmbeddingSet& base = original ? *original : e;

  const auto g = dhd::gender_direction(base, cfg, "original");
  warn_dropped_pairs(g);
  const auto pool = dhd::select_biased_words(base, g.direction, a.top_n);
  std::vector<std::string> words;
  for (auto r : pool.rows) words.push_back(base.word(r));
  const auto rows = dhd::export_projection(e, words, pool.truth);
  dhd::write_projection_csv(rows, a.out);
  dhd::write_json(m.run_record(), manifest_path(a.out));
  std::cout << "wrote " << rows.size() << " rows to " << a.out << " (tag 0 = male-leaning, 1 = female-leaning)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard / Double-Hard Debias for word embeddings, with bias and quality evaluation"};
  app.set_version_flag("--version", std::string(dhd::tool_version()));
  app.require_subcommand(1);

  DebiasArgs debias;
  auto* c_debias = app.add_subcommand("debias", "Apply Double-Hard Debias and write the debiased vectors");
  debias.common.attach(c_debias);
  c_debias->add_option("--embeddings", debias.embeddings, "Input vectors (word v1 ... vd per line)")->required();
  c_debias->add_option("--out", debias.out, "Output vector file")->required();
  c_debias->add_option("--component", debias.component, "Force the removed principal component (1-based)");
  c_debias->add_option("--candidates", debias.candidates, "Principal components tried by the sweep (default 20)");
  c_debias->add_option("--top-n", debias.top_n, "Biased words per gender used by the sweep (default 500)");
  c_debias->add_option("--precision", debias.precision, "Digits after the decimal point in the output");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Bias (WEAT, neighborhood) and quality (analogy, categorization) metrics");
  eval.common.attach(c_eval);
  c_eval->add_option("--embeddings", eval.embeddings, "Vectors to evaluate")->required();
  c_eval->add_option("--original", eval.original, "Original vectors used to pick biased words (default: --embeddings)");
  c_eval->add_option("--tag", eval.tag, "Row label in the tables (default: file stem)");
  c_eval->add_option("--weat", eval.weat_specs, "WEAT spec JSON (repeatable)");
  c_eval->add_option("--google", eval.google, "Google analogy questions");
  c_eval->add_option("--msr", eval.msr, "MSR analogy questions");
  c_eval->add_option("--ap", eval.ap, "AP categorization (word<TAB>category)");
  c_eval->add_option("--esslli", eval.esslli, "ESSLLI 2008 categorization");
  c_eval->add_option("--battig", eval.battig, "Battig categorization");
  c_eval->add_option("--bless", eval.bless, "BLESS categorization");
  c_eval->add_option("--top-n", eval.top_ns, "Neighborhood metric sizes")->delimiter(',');
  c_eval->add_option("--only", eval.only, "Restrict to: weat, neighborhood, analogy, categorization")
      ->delimiter(',')
      ->check(CLI::IsMember({"weat", "neighborhood", "analogy", "categorization"}));
  c_eval->add_option("--permutations", eval.permutations, "Monte Carlo WEAT draws when exact enumeration is too large");
  c_eval->add_flag("--oov-as-wrong", eval.oov_as_wrong, "Count analogy questions with OOV words as wrong");
  c_eval->add_flag("--no-lowercase", eval.no_lowercase, "Do not case-fold dataset words");
  c_eval->add_option("--out", eval.out, "JSON report path");
  c_eval->add_option("--text-out", eval.text_out, "Text table path (default: <out>.txt)");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep-plot", "Clustering accuracy per removed principal component, as CSV");
  sweep.common.attach(c_sweep);
  c_sweep->add_option("--embeddings", sweep.embeddings, "Input vectors")->required();
  c_sweep->add_option("--out", sweep.out, "CSV path (default: stdout)");
  c_sweep->add_option("--candidates", sweep.candidates, "Principal components to try (default 20)");
  c_sweep->add_option("--top-n", sweep.top_n, "Biased words per gender (default 500)");

  QualitativeArgs qual;
  auto* c_qual = app.add_subcommand("qualitative", "cos(w, he) - cos(w, she) for a word list");
  qual.common.attach(c_qual);
  c_qual->add_option("--embeddings", qual.embeddings, "Vector files, optionally tag=path (repeatable)")->required();
  c_qual->add_option("--words", qual.words, "Words to report")->delimiter(',');
  c_qual->add_option("--male", qual.male, "Male anchor word");
  c_qual->add_option("--female", qual.female, "Female anchor word");
  c_qual->add_option("--out", qual.out, "JSON output path");

  ProjectArgs proj;
  auto* c_proj = app.add_subcommand("project", "2-D PCA coordinates of the most gender-biased words, as CSV");
  proj.common.attach(c_proj);
  c_proj->add_option("--embeddings", proj.embeddings, "Vectors to project")->required();
  c_proj->add_option("--original", proj.original, "Vectors used to pick biased words (default: --embeddings)");
  c_proj->add_option("--top-n", proj.top_n, "Words per gender");
  c_proj->add_option("--out", proj.out, "CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_debias) return run_debias(debias);
    if (*c_eval) return run_eval(eval);
    if (*c_sweep) return run_sweep_plot(sweep);
    if (*c_qual) return run_qualitative(qual);
    if (*c_proj) return run_project(proj);
  } catch (const MissingInput& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
