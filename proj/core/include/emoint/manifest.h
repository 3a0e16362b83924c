#ifndef EMOINT_MANIFEST_H_
#define EMOINT_MANIFEST_H_

// Corpus manifests and run configuration for the command-line workflows.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoint/conv_metrics.h"
#include "emoint/features.h"

namespace emoint {

enum class Emotion { kNeutral, kAngry, kHappy, kSad, kSurprise };
enum class Split { kTrain, kEval, kReference };

std::string_view EmotionName(Emotion emotion);
Emotion ParseEmotion(std::string_view name);  // case-insensitive; kUnknownEmotion
std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);      // kParseError

struct ManifestEntry {
  std::string utt_id;
  std::filesystem::path wav_path;
  std::string speaker;
  Emotion emotion = Emotion::kNeutral;
  Split split = Split::kTrain;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry* Find(std::string_view utt_id) const;
};

// TSV with header `utt_id wav_path speaker emotion split`. Relative paths
// are resolved against the manifest's directory. Throws kParseError (with
// line number), kDuplicateId, kUnknownEmotion, kMissingFile.
Manifest ParseManifest(const std::filesystem::path& path);

// Walks root/<speaker>/<emotion>/[<split>/]*.wav in sorted order. Split
// directories train, eval/evaluation and reference/test are recognised;
// files directly under the emotion directory go to train.
Manifest ScanCorpus(const std::filesystem::path& root);

// Paths are written relative to the manifest's directory when possible.
std::string FormatManifest(const Manifest& manifest,
                           const std::filesystem::path& manifest_path);

struct Config {
  LldConfig features;
  double c = 1.0;
  std::optional<std::size_t> n_similar;
  std::uint64_t seed = 0;
  EvalConfig eval;
  int jobs = 0;  // 0 = hardware concurrency
  std::filesystem::path output_dir;
};

// `key = value` lines; `#` starts a comment; optional quotes around values.
// Unknown keys and out-of-range values throw kInvalidParams.
Config ParseConfig(std::string_view text, std::string_view origin = "config");
Config LoadConfig(const std::filesystem::path& path);

// Applies one key to a config with the same validation as ParseConfig.
void SetConfigValue(Config& config, std::string_view key, std::string_view value);

void ValidateConfig(const Config& config);

}  // namespace emoint

#endif  // EMOINT_MANIFEST_H_
