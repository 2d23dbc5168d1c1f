#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "dhd/embedding_store.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(DHD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(dhd::fixtures::write_temp_file("cli_marker", "")).parent_path() /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::create_directories(dir_);
    vectors_ = (dir_ / "vectors.txt").string();
    dhd::write_text_embeddings(dhd::fixtures::random_embeddings(17, 300, 16), vectors_, 6);
    weat_ = (dir_ / "weat.json").string();
    std::ofstream(weat_) << R"({"name": "toy", "X": ["w20", "w21", "w22", "w23"], "Y": ["w24", "w25", "w26", "w27"],
                              "A": ["he", "his", "man"], "B": ["she", "her", "woman"]})";
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string vectors_;
  std::string weat_;
};

}  // namespace

TEST_F(Cli, DebiasWritesVectorsSweepAndManifest) {
  const auto out = path("out.txt");
  ASSERT_EQ(run("debias --embeddings " + vectors_ + " --out " + out + " --top-n 40 --candidates 5"), 0);
  const auto e = dhd::load_text_embeddings(out);
  EXPECT_EQ(e.size(), 300u);
  EXPECT_EQ(e.word(0), "she");
  const auto sweep = nlohmann::json::parse(slurp(out + ".sweep.json"));
  EXPECT_EQ(sweep["sweep"]["per_component_accuracy"].size(), 5u);
  EXPECT_EQ(sweep["manifest"]["inputs"][0]["role"], "embeddings");
  const auto record = nlohmann::json::parse(slurp(out + ".manifest.json"));
  EXPECT_TRUE(record.contains("timestamp"));
}

TEST_F(Cli, DebiasIsByteIdenticalAcrossRunsAndThreads) {
  ASSERT_EQ(run("debias --embeddings " + vectors_ + " --out " + path("a.txt") + " --top-n 40 --candidates 6 --threads 1"), 0);
  ASSERT_EQ(run("debias --embeddings " + vectors_ + " --out " + path("b.txt") + " --top-n 40 --candidates 6 --threads 4"), 0);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
}

TEST_F(Cli, EvalIsByteIdenticalAcrossRunsAndThreads) {
  const std::string base = "eval --embeddings " + vectors_ + " --weat " + weat_ + " --top-n 20,50 --tag toy";
  ASSERT_EQ(run(base + " --threads 1 --out " + path("r1.json")), 0);
  ASSERT_EQ(run(base + " --threads 1 --out " + path("r2.json")), 0);
  ASSERT_EQ(run(base + " --threads 8 --out " + path("r8.json")), 0);
  const auto r1 = slurp(path("r1.json"));
  EXPECT_EQ(r1, slurp(path("r2.json")));
  EXPECT_EQ(r1, slurp(path("r8.json")));
  const auto j = nlohmann::json::parse(r1);
  EXPECT_EQ(j["results"]["weat"][0]["name"], "toy");
  EXPECT_EQ(j["results"]["neighborhood"][0]["accuracy_percent"].size(), 2u);
  EXPECT_TRUE(fs::exists(path("r1.json.txt")));
  EXPECT_NE(slurp(path("r1.json.manifest.json")).find("\"threads\": 1"), std::string::npos);
}

TEST_F(Cli, MissingInputExitsWithTwo) {
  EXPECT_EQ(run("eval --embeddings " + path("nope.txt")), 2);
  EXPECT_EQ(run("eval --embeddings " + vectors_ + " --google " + path("nope.txt")), 2);
  EXPECT_EQ(run("debias --embeddings " + path("nope.txt") + " --out " + path("x.txt")), 2);
}

TEST_F(Cli, FailedEvaluationIsReportedAndExitsNonZero) {
  const auto out = path("r.json");
  EXPECT_EQ(run("eval --embeddings " + vectors_ + " --only neighborhood --top-n 1000 --out " + out), 1);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["results"]["errors"][0]["evaluation"], "neighborhood");
}

TEST_F(Cli, SweepPlotQualitativeAndProject) {
  ASSERT_EQ(run("sweep-plot --embeddings " + vectors_ + " --top-n 40 --candidates 4 --out " + path("s.csv")), 0);
  const auto csv = slurp(path("s.csv"));
  EXPECT_EQ(csv.rfind("component,accuracy\nbaseline,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);

  ASSERT_EQ(run("qualitative --embeddings glove=" + vectors_ + " --words w30,w31,absent --out " + path("q.json")), 0);
  const auto q = nlohmann::json::parse(slurp(path("q.json")));
  EXPECT_EQ(q["gaps"]["glove"]["gaps"].size(), 2u);
  EXPECT_EQ(q["gaps"]["glove"]["missing"][0], "absent");

  ASSERT_EQ(run("project --embeddings " + vectors_ + " --top-n 30 --out " + path("p.csv")), 0);
  const auto p = slurp(path("p.csv"));
  EXPECT_EQ(p.rfind("word,x,y,tag\n", 0), 0u);
  EXPECT_EQ(std::count(p.begin(), p.end(), '\n'), 61);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  const auto cfg = path("cfg.json");
  std::ofstream(cfg) << R"({"pairs": [["she", "he"], ["her", "his"]], "seed": 3, "candidate_components": 3})";
  const auto out = path("c.txt");
  ASSERT_EQ(run("debias --embeddings " + vectors_ + " --config " + cfg + " --seed 9 --top-n 30 --out " + out), 0);
  const auto j = nlohmann::json::parse(slurp(out + ".sweep.json"));
  EXPECT_EQ(j["manifest"]["config"]["debias"]["seed"], 9);
  EXPECT_EQ(j["manifest"]["config"]["debias"]["candidate_components"], 3);
  EXPECT_EQ(j["final_gender_direction"]["pairs_used"].size(), 2u);
}
