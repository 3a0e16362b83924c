#include "cli.h"

#include <atomic>
#include <stdexcept>

#include "emoint/csv.h"
#include "emoint/ranker.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "pipeline.h"

namespace emoint {
namespace {

using testing::ReadFile;
using testing::RunCli;

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { ws_ = new testing::Workspace(testing::MakeWorkspace("cli", 4, 3)); }
  static void TearDownTestSuite() {
    delete ws_;
    ws_ = nullptr;
  }
  static testing::Workspace* ws_;
};

testing::Workspace* CliTest::ws_ = nullptr;

TEST_F(CliTest, EveryCommandIsDeterministic) {
  const auto first = testing::RunPipeline(*ws_, "a", 1);
  const auto second = testing::RunPipeline(*ws_, "b", 1);
  ASSERT_EQ(first.size(), 8u);
  for (const auto& [name, text] : first) {
    EXPECT_FALSE(text.empty()) << name;
    EXPECT_EQ(text, second.at(name)) << name;
  }
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutputs) {
  const auto serial = testing::RunPipeline(*ws_, "serial", 1);
  const auto parallel = testing::RunPipeline(*ws_, "parallel", 4);
  ASSERT_FALSE(serial.empty());
  EXPECT_EQ(serial, parallel);
}

TEST_F(CliTest, ScoresSpanUnitIntervalAndSeparateClasses) {
  const auto out = testing::RunPipeline(*ws_, "scores", 0);
  ASSERT_FALSE(out.empty());
  const auto scores = testing::ParseScores(out.at("scores.csv"));
  ASSERT_EQ(scores.size(), ws_->files.size());
  double lo = 1.0, hi = 0.0, emo = 0.0, neu = 0.0;
  for (const auto& [id, s] : scores) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    (id.find("_angry_") != std::string::npos ? emo : neu) += s;
  }
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 1.0);
  EXPECT_GT(emo, neu);
  EXPECT_NE(out.at("scores.csv").find("utt_id,intensity,level\n"), std::string::npos);

  const auto model = nlohmann::json::parse(out.at("model.json"));
  EXPECT_EQ(model["version"], 1);
  EXPECT_EQ(model["emotion"], "angry");
  EXPECT_EQ(model["weights"].size(), 384u);

  const auto conv = nlohmann::json::parse(out.at("conversion.json"));
  EXPECT_EQ(conv["n_pairs"], 3);
  EXPECT_GT(conv["mean_mcd_db"].get<double>(), 0.0);
}

TEST_F(CliTest, SaveLoadPreservesScores) {
  const auto out = testing::RunPipeline(*ws_, "io", 1);
  ASSERT_FALSE(out.empty());
  const RankingModel m = LoadModel(ws_->Path("io_model.json"));
  SaveModel(m, ws_->Path("io_model_copy.json"));
  EXPECT_EQ(ReadFile(ws_->Path("io_model_copy.json")), out.at("model.json"));
  const RankingModel back = LoadModel(ws_->Path("io_model_copy.json"));
  for (const auto& fv : ReadFeatureCsv(ws_->Path("io_features.csv"))) {
    EXPECT_NEAR(Score(back, fv.values), Score(m, fv.values), 1e-12);
  }
}

TEST_F(CliTest, DescribeFeatures) {
  ::testing::internal::CaptureStdout();
  EXPECT_EQ(RunCli({"extract-features", "--describe-features"}), cli::kExitOk);
  const auto j = nlohmann::json::parse(::testing::internal::GetCapturedStdout());
  EXPECT_EQ(j["dimension"], 384);
  ASSERT_EQ(j["features"].size(), 384u);
  EXPECT_EQ(j["features"][0]["name"], "zcr_mean");
  EXPECT_EQ(j["features"][383]["name"], "mfcc12_de_mse");
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  const auto cfg = ws_->Path("run.cfg");
  std::ofstream(cfg) << "mcep_order = 12\nddur_mode = span\n";
  ASSERT_EQ(RunCli({"--config", cfg.string(), "eval-conversion", "--pairs", ws_->Str("pairs.tsv"),
                    "--out", ws_->Str("cfg_conv.json")}),
            cli::kExitOk);
  auto j = nlohmann::json::parse(ReadFile(ws_->Path("cfg_conv.json")));
  EXPECT_EQ(j["mcep_order"], 12);
  EXPECT_EQ(j["ddur_mode"], "span");
  ASSERT_EQ(RunCli({"--config", cfg.string(), "eval-conversion", "--pairs", ws_->Str("pairs.tsv"),
                    "--mcep-order", "20", "--out", ws_->Str("cfg_conv.json")}),
            cli::kExitOk);
  j = nlohmann::json::parse(ReadFile(ws_->Path("cfg_conv.json")));
  EXPECT_EQ(j["mcep_order"], 20);
}

TEST_F(CliTest, ExitCodes) {
  // Usage and validation problems.
  EXPECT_EQ(RunCli({"no-such-command"}), cli::kExitValidation);
  EXPECT_EQ(RunCli({"train-ranker", "--features", "x"}), cli::kExitValidation);
  EXPECT_EQ(RunCli({"eval-conversion", "--pairs", ws_->Str("pairs.tsv"), "--mcep-order", "99",
                    "--out", ws_->Str("bad.json")}),
            cli::kExitValidation);
  const auto bad_manifest = ws_->Path("bad_manifest.tsv");
  std::ofstream(bad_manifest) << "utt_id\twav_path\tspeaker\temotion\tsplit\n"
                              << "x\t" << ws_->files[0].path.string() << "\ts\tbored\ttrain\n";
  EXPECT_EQ(RunCli({"extract-features", "--manifest", bad_manifest.string(), "--out",
                    ws_->Str("bad.csv")}),
            cli::kExitValidation);
  // I/O problems.
  EXPECT_EQ(RunCli({"extract-features", "--manifest", ws_->Str("absent.tsv"), "--out",
                    ws_->Str("bad.csv")}),
            cli::kExitIo);
  EXPECT_EQ(RunCli({"score-intensity", "--model", ws_->Str("absent.json"), "--features",
                    ws_->Str("absent.csv"), "--out", ws_->Str("bad.csv")}),
            cli::kExitIo);
  EXPECT_EQ(RunCli({"contours", "--converted", ws_->Str("absent.wav"), "--reference",
                    ws_->files[0].path.string(), "--out", ws_->Str("bad.csv")}),
            cli::kExitIo);
  EXPECT_EQ(RunCli({"--config", ws_->Str("absent.cfg"), "make-manifest", "--root",
                    ws_->Str("corpus"), "--out", ws_->Str("m.tsv")}),
            cli::kExitIo);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  cli::ParallelFor(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
  try {
    cli::ParallelFor(100, 4, [](std::size_t i) {
      if (i == 17 || i == 80) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

}  // namespace
}  // namespace emoint
