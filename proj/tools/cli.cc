#include "cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "emoint/conv_metrics.h"
#include "emoint/csv.h"
#include "emoint/emo_eval.h"
#include "emoint/error.h"
#include "emoint/features.h"
#include "emoint/manifest.h"
#include "emoint/ranker.h"

namespace emoint::cli {
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

struct Options {
  std::string config_path;
  std::optional<int> jobs;

  // extract-features
  std::string manifest;
  std::string out;
  bool describe = false;

  // train-ranker / score-intensity
  std::string features;
  std::string emotion;
  std::optional<double> c;
  std::optional<std::size_t> n_similar;
  std::optional<std::uint64_t> seed;
  std::string model;
  bool with_levels = false;

  // eval-*
  std::string embeddings;
  std::string pairs;
  std::optional<int> mcep_order;
  std::optional<std::string> ddur_mode;
  std::string converted;
  std::string reference;
  std::string report;

  // make-manifest
  std::string root;
};

Config ResolveConfig(const Options& o) {
  Config cfg = o.config_path.empty() ? Config{} : LoadConfig(o.config_path);
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.c) cfg.c = *o.c;
  if (o.n_similar) cfg.n_similar = *o.n_similar;
  if (o.seed) cfg.seed = *o.seed;
  if (o.mcep_order) cfg.eval.mcep.order = *o.mcep_order;
  if (o.ddur_mode) cfg.eval.ddur_mode = ParseDdurMode(*o.ddur_mode);
  ValidateConfig(cfg);
  return cfg;
}

// Output paths are taken relative to output_dir when one is configured.
fs::path OutputPath(const Config& cfg, const std::string& out) {
  fs::path p(out);
  if (!cfg.output_dir.empty() && p.is_relative()) {
    fs::create_directories(cfg.output_dir);
    p = cfg.output_dir / p;
  }
  return p;
}

std::string DescribeFeaturesJson() {
  ordered_json arr = ordered_json::array();
  for (const auto& d : DescribeFeatures()) {
    arr.push_back({{"index", d.index},
                   {"name", d.name},
                   {"lld", d.lld},
                   {"delta", d.delta},
                   {"functional", d.functional}});
  }
  ordered_json j;
  j["dimension"] = kFeatureDim;
  j["layout"] = "index = trajectory * 12 + functional; trajectories 0-15 are LLDs, 16-31 their deltas";
  j["features"] = arr;
  return j.dump(2) + "\n";
}

int ExtractFeatures(const Options& o, const Config& cfg) {
  if (o.describe) {
    std::cout << DescribeFeaturesJson();
    if (o.manifest.empty()) return kExitOk;
  }
  if (o.manifest.empty() || o.out.empty()) {
    throw Error(ErrorCode::kInvalidParams, "extract-features needs --manifest and --out");
  }
  const Manifest manifest = ParseManifest(o.manifest);
  std::vector<FeatureVector> rows(manifest.entries.size());
  ParallelFor(rows.size(), cfg.jobs, [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    rows[i] = ExtractFeatureVector(LoadWav(e.wav_path), e.utt_id, cfg.features);
  });
  WriteFeatureCsv(rows, OutputPath(cfg, o.out));
  return kExitOk;
}

int TrainRankerCommand(const Options& o, const Config& cfg) {
  const Emotion emotion = ParseEmotion(o.emotion);
  if (emotion == Emotion::kNeutral) {
    throw Error(ErrorCode::kInvalidParams, "--emotion must name a non-neutral emotion");
  }
  const Manifest manifest = ParseManifest(o.manifest);
  const std::vector<FeatureVector> table = ReadFeatureCsv(o.features);
  std::map<std::string, const FeatureVector*> by_id;
  for (const auto& fv : table) by_id.emplace(fv.id, &fv);

  std::vector<const FeatureVector*> selected;
  std::vector<SampleClass> labels;
  for (const auto& e : manifest.entries) {
    if (e.split != Split::kTrain) continue;
    if (e.emotion != Emotion::kNeutral && e.emotion != emotion) continue;
    const auto it = by_id.find(e.utt_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kInvalidParams,
                  "no feature row for training utterance '" + e.utt_id + "'");
    }
    selected.push_back(it->second);
    labels.push_back(e.emotion == Emotion::kNeutral ? SampleClass::kNeutral
                                                    : SampleClass::kEmotional);
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(selected.size()), kFeatureDim);
  for (std::size_t r = 0; r < selected.size(); ++r) {
    for (int k = 0; k < kFeatureDim; ++k) {
      x(static_cast<Eigen::Index>(r), k) = selected[r]->values[k];
    }
  }
  const PairSets pairs = BuildPairs(std::move(x), labels, cfg.n_similar, cfg.seed);
  const RankingModel model =
      TrainRanker(pairs, cfg.c, SolverConfig{}, std::string(EmotionName(emotion)));
  SaveModel(model, OutputPath(cfg, o.out));
  std::cerr << "trained " << model.emotion << " ranker on " << selected.size()
            << " utterances (" << pairs.ordered.size() << " ordered, "
            << pairs.similar.size() << " similar pairs): "
            << model.solver_report.iterations << " Newton steps, objective "
            << model.solver_report.final_objective << "\n";
  return kExitOk;
}

int ScoreIntensity(const Options& o, const Config& cfg) {
  const RankingModel model = LoadModel(o.model);
  const std::vector<FeatureVector> table = ReadFeatureCsv(o.features);
  std::string out = o.with_levels ? "utt_id,intensity,level\n" : "utt_id,intensity\n";
  for (const auto& fv : table) {
    const double s = Score(model, fv.values);
    out += fv.id + ',' + FormatDouble(s);
    if (o.with_levels) out += ',' + std::string(NearestIntensityLevel(s));
    out += '\n';
  }
  WriteTextFile(OutputPath(cfg, o.out), out);
  return kExitOk;
}

int EvalClustering(const Options& o, const Config& cfg) {
  const EmbeddingSet set = LoadEmbeddingsCsv(o.embeddings);
  WriteTextFile(OutputPath(cfg, o.out), ClusterReportJson(ClusteringRatio(set), set.class_names));
  return kExitOk;
}

int EvalConversion(const Options& o, const Config& cfg) {
  const fs::path pairs_path(o.pairs);
  const CsvTable table = [&] {
    CsvTable t = ReadCsv(pairs_path, '\t');
    // The first line is data unless it is the documented header.
    if (!(t.header.size() == 2 && t.header[0] == "converted_wav" &&
          t.header[1] == "reference_wav")) {
      t.rows.insert(t.rows.begin(), t.header);
    }
    return t;
  }();
  const fs::path base = pairs_path.parent_path();
  const auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() ? base / path : path;
  };
  for (const auto& row : table.rows) {
    if (row.size() != 2) {
      throw Error(ErrorCode::kParseError, o.pairs + ": expected converted_wav<TAB>reference_wav");
    }
  }

  struct Result {
    double mcd = 0.0;
    double ddur = 0.0;
  };
  std::vector<Result> results(table.rows.size());
  ParallelFor(results.size(), cfg.jobs, [&](std::size_t i) {
    const Waveform conv = LoadWav(resolve(table.rows[i][0]));
    const Waveform ref = LoadWav(resolve(table.rows[i][1]));
    const McepSequence a = Mcep(conv, cfg.eval.mcep);
    const McepSequence b = Mcep(ref, cfg.eval.mcep);
    results[i].mcd = Mcd(a, b, cfg.eval.mcd);
    results[i].ddur = Ddur(conv, ref, cfg.eval);
  });

  ordered_json j;
  j["mcep_order"] = cfg.eval.mcep.order;
  j["mcd_include_c0"] = cfg.eval.mcd.include_c0;
  j["ddur_mode"] = DdurModeName(cfg.eval.ddur_mode);
  ordered_json rows = ordered_json::array();
  double mcd_sum = 0.0, ddur_sum = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    rows.push_back({{"converted", table.rows[i][0]},
                    {"reference", table.rows[i][1]},
                    {"mcd_db", results[i].mcd},
                    {"ddur_s", results[i].ddur}});
    mcd_sum += results[i].mcd;
    ddur_sum += results[i].ddur;
  }
  const double n = std::max<double>(1.0, static_cast<double>(results.size()));
  j["n_pairs"] = results.size();
  j["mean_mcd_db"] = mcd_sum / n;
  j["mean_ddur_s"] = ddur_sum / n;
  j["pairs"] = rows;
  WriteTextFile(OutputPath(cfg, o.out), j.dump(2) + "\n");
  return kExitOk;
}

std::string EvaluationReportJson(const EvaluationReport& r) {
  const auto table = [](const std::vector<ContourRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
      arr.push_back({{"i", row.i}, {"j", row.j},
                     {"converted", row.converted}, {"reference", row.reference}});
    }
    return arr;
  };
  ordered_json j;
  j["mcd_db"] = r.mcd_db;
  j["ddur_s"] = r.ddur_s;
  j["n_aligned_frames"] = r.n_aligned_frames;
  j["aligned_f0"] = table(r.aligned_f0);
  j["aligned_energy"] = table(r.aligned_energy);
  return j.dump(2) + "\n";
}

int Contours(const Options& o, const Config& cfg) {
  const EvaluationReport report =
      ContourReport(LoadWav(o.converted), LoadWav(o.reference), cfg.eval);
  WriteTextFile(OutputPath(cfg, o.out), ContourCsv(report));
  if (!o.report.empty()) {
    WriteTextFile(OutputPath(cfg, o.report), EvaluationReportJson(report));
  }
  return kExitOk;
}

int MakeManifest(const Options& o, const Config& cfg) {
  const fs::path out = OutputPath(cfg, o.out);
  WriteTextFile(out, FormatManifest(ScanCorpus(o.root), out));
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args) {
  CLI::App app{"Emotion intensity ranking and voice-conversion evaluation toolkit", "emoint"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "key = value configuration file (flags override)");
  app.add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");

  auto* extract = app.add_subcommand("extract-features", "Compute 384-d utterance features");
  extract->add_option("--manifest", o.manifest, "Corpus manifest (TSV)");
  extract->add_option("--out", o.out, "Output features CSV");
  extract->add_flag("--describe-features", o.describe,
                    "Print the feature index map as JSON to stdout");

  auto* train = app.add_subcommand("train-ranker", "Learn a relative-attribute intensity ranker");
  train->add_option("--features", o.features, "Features CSV")->required();
  train->add_option("--manifest", o.manifest, "Corpus manifest (TSV)")->required();
  train->add_option("--emotion", o.emotion, "Emotion to rank against neutral")->required();
  train->add_option("--c", o.c, "Margin / slack trade-off C (default 1.0)");
  train->add_option("--n-similar", o.n_similar, "Similar pairs (default |ordered| / 2)");
  train->add_option("--seed", o.seed, "Pair sampling seed (default 0)");
  train->add_option("--out", o.out, "Output model JSON")->required();

  auto* score = app.add_subcommand("score-intensity", "Score features with a trained ranker");
  score->add_option("--model", o.model, "Model JSON")->required();
  score->add_option("--features", o.features, "Features CSV")->required();
  score->add_option("--out", o.out, "Output scores CSV")->required();
  score->add_flag("--with-levels", o.with_levels,
                  "Append the nearest preset level (weak/medium/strong)");

  auto* clustering = app.add_subcommand("eval-clustering", "Clustering ratio of labelled embeddings");
  clustering->add_option("--embeddings", o.embeddings, "Embeddings CSV id,label,d0..")->required();
  clustering->add_option("--out", o.out, "Output report JSON")->required();

  auto* conversion = app.add_subcommand("eval-conversion", "MCD and DDUR over utterance pairs");
  conversion->add_option("--pairs", o.pairs, "TSV converted_wav<TAB>reference_wav")->required();
  conversion->add_option("--out", o.out, "Output report JSON")->required();
  conversion->add_option("--mcep-order", o.mcep_order, "Mel-cepstral order (default 24)");
  conversion->add_option("--ddur-mode", o.ddur_mode, "Voiced duration: total | span");

  auto* contours = app.add_subcommand("contours", "DTW-aligned pitch and energy contours");
  contours->add_option("--converted", o.converted, "Converted WAV")->required();
  contours->add_option("--reference", o.reference, "Reference WAV")->required();
  contours->add_option("--out", o.out, "Output contour CSV")->required();
  contours->add_option("--report", o.report, "Also write the evaluation report JSON");
  contours->add_option("--ddur-mode", o.ddur_mode, "Voiced duration: total | span");

  auto* make_manifest = app.add_subcommand("make-manifest", "Build a manifest from speaker/emotion/*.wav");
  make_manifest->add_option("--root", o.root, "Corpus root")->required();
  make_manifest->add_option("--out", o.out, "Output manifest TSV")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    const Config cfg = ResolveConfig(o);
    if (extract->parsed()) return ExtractFeatures(o, cfg);
    if (train->parsed()) return TrainRankerCommand(o, cfg);
    if (score->parsed()) return ScoreIntensity(o, cfg);
    if (clustering->parsed()) return EvalClustering(o, cfg);
    if (conversion->parsed()) return EvalConversion(o, cfg);
    if (contours->parsed()) return Contours(o, cfg);
    if (make_manifest->parsed()) return MakeManifest(o, cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return IsIoError(e.code()) ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace emoint::cli
