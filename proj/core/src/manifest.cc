#include "emoint/manifest.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "emoint/csv.h"
#include "emoint/error.h"

namespace emoint {
namespace fs = std::filesystem;

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

constexpr std::array<std::string_view, 5> kEmotionNames = {
    "neutral", "angry", "happy", "sad", "surprise"};

std::optional<Split> SplitFromDirectory(std::string_view name) {
  const std::string lower = Lower(name);
  if (lower == "train") return Split::kTrain;
  if (lower == "eval" || lower == "evaluation") return Split::kEval;
  if (lower == "reference" || lower == "test") return Split::kReference;
  return std::nullopt;
}

std::vector<fs::path> SortedChildren(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

bool IsWav(const fs::path& p) {
  return fs::is_regular_file(p) && Lower(p.extension().string()) == ".wav";
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kInvalidParams,
                "config key '" + std::string(key) + "': bad number '" +
                    std::string(value) + "'");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  const std::string v = Lower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::kInvalidParams,
              "config key '" + std::string(key) + "': expected a boolean");
}

}  // namespace

std::string_view EmotionName(Emotion emotion) {
  return kEmotionNames[static_cast<std::size_t>(emotion)];
}

Emotion ParseEmotion(std::string_view name) {
  const std::string lower = Lower(name);
  for (std::size_t i = 0; i < kEmotionNames.size(); ++i) {
    if (lower == kEmotionNames[i]) return static_cast<Emotion>(i);
  }
  throw Error(ErrorCode::kUnknownEmotion, "unknown emotion '" + std::string(name) + "'");
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kEval: return "eval";
    case Split::kReference: return "reference";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "eval") return Split::kEval;
  if (name == "reference") return Split::kReference;
  throw Error(ErrorCode::kParseError, "unknown split '" + std::string(name) + "'");
}

const ManifestEntry* Manifest::Find(std::string_view utt_id) const {
  for (const auto& e : entries) {
    if (e.utt_id == utt_id) return &e;
  }
  return nullptr;
}

Manifest ParseManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "manifest " + path.string());
  const fs::path base = path.parent_path();
  const std::vector<std::string> expected = {"utt_id", "wav_path", "speaker",
                                             "emotion", "split"};
  Manifest manifest;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  const auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto fields = SplitLine(line, '\t');
    if (!have_header) {
      if (fields != expected) {
        throw Error(ErrorCode::kParseError,
                    where() + "header must be utt_id, wav_path, speaker, emotion, split "
                              "(tab-separated)");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != expected.size()) {
      throw Error(ErrorCode::kParseError,
                  where() + "expected 5 tab-separated fields, found " +
                      std::to_string(fields.size()));
    }
    ManifestEntry entry;
    entry.utt_id = fields[0];
    if (entry.utt_id.empty()) throw Error(ErrorCode::kParseError, where() + "empty utt_id");
    if (!seen.insert(entry.utt_id).second) {
      throw Error(ErrorCode::kDuplicateId, where() + "duplicate utt_id '" + entry.utt_id + "'");
    }
    entry.wav_path = fields[1];
    if (entry.wav_path.is_relative()) entry.wav_path = base / entry.wav_path;
    entry.speaker = fields[2];
    try {
      entry.emotion = ParseEmotion(fields[3]);
      entry.split = ParseSplit(fields[4]);
    } catch (const Error& e) {
      throw Error(e.code(), where() + e.what());
    }
    if (!fs::exists(entry.wav_path)) {
      throw Error(ErrorCode::kMissingFile, where() + entry.wav_path.string());
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (!have_header) throw Error(ErrorCode::kParseError, path.string() + ": empty manifest");
  return manifest;
}

Manifest ScanCorpus(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kNotFound, "corpus root " + root.string());
  }
  Manifest manifest;
  std::set<std::string> seen;
  const auto add = [&](const fs::path& wav, const std::string& speaker,
                       Emotion emotion, Split split) {
    ManifestEntry e{wav.stem().string(), fs::absolute(wav), speaker, emotion, split};
    if (!seen.insert(e.utt_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "utterance id '" + e.utt_id + "' occurs twice under " + root.string());
    }
    manifest.entries.push_back(std::move(e));
  };
  for (const fs::path& speaker_dir : SortedChildren(root)) {
    if (!fs::is_directory(speaker_dir)) continue;
    const std::string speaker = speaker_dir.filename().string();
    for (const fs::path& emotion_dir : SortedChildren(speaker_dir)) {
      if (!fs::is_directory(emotion_dir)) continue;
      const Emotion emotion = ParseEmotion(emotion_dir.filename().string());
      for (const fs::path& child : SortedChildren(emotion_dir)) {
        if (IsWav(child)) {
          add(child, speaker, emotion, Split::kTrain);
        } else if (fs::is_directory(child)) {
          const auto split = SplitFromDirectory(child.filename().string());
          if (!split) continue;
          for (const fs::path& wav : SortedChildren(child)) {
            if (IsWav(wav)) add(wav, speaker, emotion, *split);
          }
        }
      }
    }
  }
  return manifest;
}

std::string FormatManifest(const Manifest& manifest, const fs::path& manifest_path) {
  const fs::path base = fs::absolute(manifest_path).parent_path();
  std::string out = "utt_id\twav_path\tspeaker\temotion\tsplit\n";
  for (const auto& e : manifest.entries) {
    out += e.utt_id + '\t' + fs::absolute(e.wav_path).lexically_proximate(base).generic_string() +
           '\t' + e.speaker + '\t' + std::string(EmotionName(e.emotion)) + '\t' +
           std::string(SplitName(e.split)) + '\n';
  }
  return out;
}

void SetConfigValue(Config& config, std::string_view key, std::string_view value) {
  if (key == "c") {
    config.c = ParseNumber<double>(key, value);
  } else if (key == "n_similar") {
    config.n_similar = ParseNumber<std::size_t>(key, value);
  } else if (key == "seed") {
    config.seed = ParseNumber<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    config.jobs = ParseNumber<int>(key, value);
  } else if (key == "mcep_order") {
    config.eval.mcep.order = ParseNumber<int>(key, value);
  } else if (key == "ddur_mode") {
    config.eval.ddur_mode = ParseDdurMode(value);
  } else if (key == "mcd_include_c0") {
    config.eval.mcd.include_c0 = ParseBool(key, value);
  } else if (key == "f0_min_hz") {
    config.features.pitch.f0_min_hz = ParseNumber<double>(key, value);
    config.eval.pitch.f0_min_hz = config.features.pitch.f0_min_hz;
  } else if (key == "f0_max_hz") {
    config.features.pitch.f0_max_hz = ParseNumber<double>(key, value);
    config.eval.pitch.f0_max_hz = config.features.pitch.f0_max_hz;
  } else if (key == "voicing_threshold") {
    config.features.pitch.voicing_threshold = ParseNumber<double>(key, value);
    config.eval.pitch.voicing_threshold = config.features.pitch.voicing_threshold;
  } else if (key == "output_dir") {
    config.output_dir = std::string(value);
  } else {
    throw Error(ErrorCode::kInvalidParams, "unknown config key '" + std::string(key) + "'");
  }
}

void ValidateConfig(const Config& config) {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::kInvalidParams, what);
  };
  require(config.c > 0.0 && std::isfinite(config.c), "c must be positive");
  require(config.jobs >= 0, "jobs must be >= 0");
  require(config.eval.mcep.order >= 1 && config.eval.mcep.order < config.eval.mcep.n_bands,
          "mcep_order must be in [1, " + std::to_string(config.eval.mcep.n_bands - 1) + "]");
  const PitchConfig& p = config.features.pitch;
  require(p.f0_min_hz > 0.0 && p.f0_min_hz < p.f0_max_hz,
          "f0 range must satisfy 0 < f0_min_hz < f0_max_hz");
  require(p.voicing_threshold > 0.0 && p.voicing_threshold < 1.0,
          "voicing_threshold must be in (0, 1)");
}

Config ParseConfig(std::string_view text, std::string_view origin) {
  Config config;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidParams, std::string(origin) + ":" +
                                                 std::to_string(line_no) +
                                                 ": expected key = value");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    std::string_view value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    SetConfigValue(config, key, value);
  }
  ValidateConfig(config);
  return config;
}

Config LoadConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), path.string());
}

}  // namespace emoint
