#include "emoint/manifest.h"

#include <fstream>

#include "emoint/error.h"
#include "emoint/signal.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace emoint {
namespace {

namespace fs = std::filesystem;

void Touch(const fs::path& p) {
  fs::create_directories(p.parent_path());
  SaveWav(Waveform(testing::Sine(200, 0.05, 16000), 16000), p);
}

void Write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kIoError;
}

constexpr const char* kHeader = "utt_id\twav_path\tspeaker\temotion\tsplit\n";

TEST(Manifest, ParsesRows) {
  const auto dir = testing::TempDir("manifest_ok");
  Touch(dir / "wav/a.wav");
  Touch(dir / "wav/b.wav");
  Touch(dir / "wav/c.wav");
  Write(dir / "m.tsv", std::string(kHeader) +
                           "a\twav/a.wav\tspk1\tneutral\ttrain\n"
                           "b\twav/b.wav\tspk1\tANGRY\teval\n"
                           "\n"
                           "c\t" + (dir / "wav/c.wav").string() + "\tspk2\tSad\treference\n");
  const Manifest m = ParseManifest(dir / "m.tsv");
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_EQ(m.entries[1].emotion, Emotion::kAngry);
  EXPECT_EQ(m.entries[1].split, Split::kEval);
  EXPECT_EQ(m.entries[2].emotion, Emotion::kSad);
  EXPECT_EQ(m.entries[2].speaker, "spk2");
  EXPECT_TRUE(fs::exists(m.entries[0].wav_path));
  ASSERT_NE(m.Find("b"), nullptr);
  EXPECT_EQ(m.Find("zzz"), nullptr);

  // Formatting relative to the same location reproduces relative paths.
  const std::string text = FormatManifest(m, dir / "m.tsv");
  EXPECT_NE(text.find("a\twav/a.wav\tspk1\tneutral\ttrain\n"), std::string::npos);
  Write(dir / "m2.tsv", text);
  EXPECT_EQ(ParseManifest(dir / "m2.tsv").entries.size(), 3u);
}

TEST(Manifest, Errors) {
  const auto dir = testing::TempDir("manifest_bad");
  Touch(dir / "a.wav");
  Write(dir / "dup.tsv", std::string(kHeader) + "a\ta.wav\ts\tneutral\ttrain\n"
                                                "a\ta.wav\ts\tangry\ttrain\n");
  EXPECT_EQ(CodeOf([&] { ParseManifest(dir / "dup.tsv"); }), ErrorCode::kDuplicateId);

  Write(dir / "emo.tsv", std::string(kHeader) + "a\ta.wav\ts\tbored\ttrain\n");
  EXPECT_EQ(CodeOf([&] { ParseManifest(dir / "emo.tsv"); }), ErrorCode::kUnknownEmotion);

  Write(dir / "miss.tsv", std::string(kHeader) + "x\tnope.wav\ts\tneutral\ttrain\n");
  EXPECT_EQ(CodeOf([&] { ParseManifest(dir / "miss.tsv"); }), ErrorCode::kMissingFile);

  Write(dir / "cols.tsv", std::string(kHeader) + "a\ta.wav\ts\tneutral\ttrain\n"
                                                 "b\ta.wav\ts\n");
  try {
    ParseManifest(dir / "cols.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }

  Write(dir / "head.tsv", "id\tpath\n");
  EXPECT_EQ(CodeOf([&] { ParseManifest(dir / "head.tsv"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseManifest(dir / "absent.tsv"); }), ErrorCode::kNotFound);
}

TEST(ScanCorpus, FlatAndSplitLayouts) {
  const auto dir = testing::TempDir("scan");
  Touch(dir / "spk2/neutral/n2.wav");
  Touch(dir / "spk1/angry/a1.wav");
  Touch(dir / "spk1/neutral/n1.wav");
  Touch(dir / "spk3/Happy/train/h1.wav");
  Touch(dir / "spk3/Happy/evaluation/h2.wav");
  Touch(dir / "spk3/Happy/test/h3.wav");
  Write(dir / "spk1/neutral/notes.txt", "ignored");
  const Manifest m = ScanCorpus(dir);
  ASSERT_EQ(m.entries.size(), 6u);
  EXPECT_EQ(m.entries[0].utt_id, "a1");
  EXPECT_EQ(m.entries[1].utt_id, "n1");
  EXPECT_EQ(m.entries[2].utt_id, "n2");
  EXPECT_EQ(m.Find("h2")->split, Split::kEval);
  EXPECT_EQ(m.Find("h3")->split, Split::kReference);
  EXPECT_EQ(m.Find("h1")->emotion, Emotion::kHappy);
  EXPECT_EQ(m.Find("n2")->speaker, "spk2");

  Touch(dir / "spk4/calm/x.wav");
  EXPECT_EQ(CodeOf([&] { ScanCorpus(dir); }), ErrorCode::kUnknownEmotion);
  EXPECT_EQ(CodeOf([&] { ScanCorpus(dir / "none"); }), ErrorCode::kNotFound);
}

TEST(Names, RoundTrip) {
  for (Emotion e : {Emotion::kNeutral, Emotion::kAngry, Emotion::kHappy, Emotion::kSad,
                    Emotion::kSurprise}) {
    EXPECT_EQ(ParseEmotion(EmotionName(e)), e);
  }
  for (Split s : {Split::kTrain, Split::kEval, Split::kReference}) {
    EXPECT_EQ(ParseSplit(SplitName(s)), s);
  }
}

TEST(Config, ParsesKeys) {
  const Config c = ParseConfig(
      "# run settings\n"
      "c = 0.5\n"
      "n_similar = 12\n"
      "seed = 42   # trailing comment\n"
      "jobs = 3\n"
      "mcep_order = 13\n"
      "ddur_mode = \"span\"\n"
      "mcd_include_c0 = true\n"
      "f0_min_hz = 80\n"
      "f0_max_hz = 300\n"
      "voicing_threshold = 0.5\n"
      "output_dir = out\n");
  EXPECT_EQ(c.c, 0.5);
  EXPECT_EQ(c.n_similar, 12u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.jobs, 3);
  EXPECT_EQ(c.eval.mcep.order, 13);
  EXPECT_EQ(c.eval.ddur_mode, DdurMode::kSpan);
  EXPECT_TRUE(c.eval.mcd.include_c0);
  EXPECT_EQ(c.features.pitch.f0_min_hz, 80.0);
  EXPECT_EQ(c.eval.pitch.f0_max_hz, 300.0);
  EXPECT_EQ(c.eval.pitch.voicing_threshold, 0.5);
  EXPECT_EQ(c.output_dir, fs::path("out"));

  const Config d = ParseConfig("");
  EXPECT_EQ(d.c, 1.0);
  EXPECT_FALSE(d.n_similar.has_value());
  EXPECT_EQ(d.eval.mcep.order, 24);
}

TEST(Config, RejectsBadInput) {
  for (const char* text : {"unknown = 1\n", "c = 0\n", "c = abc\n", "jobs = -1\n",
                           "mcep_order = 40\n", "f0_min_hz = 500\n", "ddur_mode = mean\n",
                           "voicing_threshold = 1.5\n", "just words\n",
                           "mcd_include_c0 = maybe\n"}) {
    EXPECT_EQ(CodeOf([&] { ParseConfig(text); }), ErrorCode::kInvalidParams) << text;
  }
  EXPECT_EQ(CodeOf([] { LoadConfig("/nonexistent/cfg"); }), ErrorCode::kNotFound);
}

}  // namespace
}  // namespace emoint
