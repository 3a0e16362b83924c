#include "emoint/emo_eval.h"

#include <cmath>
#include <map>
#include <string>

#include <json.hpp>

#include "emoint/csv.h"
#include "emoint/error.h"

namespace emoint {
namespace {

void CheckLabels(const EmbeddingSet& set) {
  if (set.labels.size() != static_cast<std::size_t>(set.embeddings.rows())) {
    throw Error(ErrorCode::kDimensionMismatch, "one label per embedding required");
  }
  if (set.embeddings.cols() < 1) {
    throw Error(ErrorCode::kInvalidParams, "embeddings need at least one dimension");
  }
  for (int label : set.labels) {
    if (label < 0 || label >= set.num_classes()) {
      throw Error(ErrorCode::kInvalidParams,
                  "label " + std::to_string(label) + " outside class list");
    }
  }
}

}  // namespace

Eigen::MatrixXd Centroids(const EmbeddingSet& set) {
  CheckLabels(set);
  const int k = set.num_classes();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, set.embeddings.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < set.embeddings.rows(); ++i) {
    sums.row(set.labels[i]) += set.embeddings.row(i);
    ++counts[set.labels[i]];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kEmptyClass,
                  "class '" + set.class_names[c] + "' has no embeddings");
    }
    sums.row(c) /= counts[c];
  }
  return sums;
}

ClusterReport ClusteringRatio(const EmbeddingSet& set) {
  const int k = set.num_classes();
  if (k < 2) {
    throw Error(ErrorCode::kInvalidParams, "clustering ratio needs K >= 2 classes");
  }
  ClusterReport report;
  report.centroids = Centroids(set);

  std::vector<double> inter(static_cast<std::size_t>(k), 0.0);
  std::vector<double> intra(static_cast<std::size_t>(k), 0.0);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index n = 0; n < set.embeddings.rows(); ++n) {
    const int i = set.labels[n];
    ++counts[i];
    for (int j = 0; j < k; ++j) {
      const double dist = (set.embeddings.row(n) - report.centroids.row(j)).norm();
      (j == i ? intra : inter)[i] += dist;
    }
  }
  for (int i = 0; i < k; ++i) {
    report.dist_inter += inter[i] / counts[i];
    report.dist_intra += intra[i] / counts[i];
  }
  report.dist_inter /= static_cast<double>(k) * (k - 1);
  report.dist_intra /= k;
  if (!(report.dist_inter > 0.0)) {
    throw Error(ErrorCode::kDegenerateClusters,
                "inter-class distance is zero; all centroids coincide");
  }
  report.ratio = report.dist_intra / report.dist_inter;
  return report;
}

double EmotionClassificationLoss(std::span<const double> label,
                                 std::span<const double> probs) {
  if (label.size() != probs.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "label and probabilities differ in length");
  }
  if (label.empty()) {
    throw Error(ErrorCode::kInvalidDistribution, "empty distribution");
  }
  std::size_t target = label.size();
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == 1.0 && target == label.size()) {
      target = i;
    } else if (label[i] != 0.0) {
      throw Error(ErrorCode::kInvalidDistribution, "label is not one-hot");
    }
  }
  if (target == label.size()) {
    throw Error(ErrorCode::kInvalidDistribution, "label has no hot entry");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::kInvalidDistribution, "probabilities must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidDistribution,
                "probabilities sum to " + std::to_string(total));
  }
  return -std::log(std::max(probs[target], 1e-12));
}

double EmotionSimilarityLoss(std::span<const double> h_emo,
                             std::span<const double> h_ser) {
  if (h_emo.size() != h_ser.size() || h_emo.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding sizes " + std::to_string(h_emo.size()) + " and " +
                    std::to_string(h_ser.size()));
  }
  double acc = 0.0;
  for (std::size_t d = 0; d < h_emo.size(); ++d) {
    const double diff = h_emo[d] - h_ser[d];
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(h_emo.size()));
}

EmbeddingSet LoadEmbeddingsCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path);
  if (table.header.size() < 3 || table.header[0] != "id" || table.header[1] != "label") {
    throw Error(ErrorCode::kParseError,
                path.string() + ": header must be id,label,d0,...");
  }
  const auto dim = static_cast<Eigen::Index>(table.header.size() - 2);
  EmbeddingSet set;
  set.embeddings.resize(static_cast<Eigen::Index>(table.rows.size()), dim);
  std::map<std::string, int> index;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    set.ids.push_back(row[0]);
    auto [it, inserted] = index.emplace(row[1], set.num_classes());
    if (inserted) set.class_names.push_back(row[1]);
    set.labels.push_back(it->second);
    for (Eigen::Index d = 0; d < dim; ++d) {
      set.embeddings(static_cast<Eigen::Index>(r), d) =
          ParseDouble(row[static_cast<std::size_t>(d) + 2], path, r + 2);
    }
  }
  return set;
}

std::string ClusterReportJson(const ClusterReport& report,
                              const std::vector<std::string>& class_names) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json centroids = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < report.centroids.rows(); ++i) {
    const Eigen::VectorXd row = report.centroids.row(i).transpose();
    centroids.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  j["classes"] = class_names;
  j["centroids"] = centroids;
  j["dist_inter"] = report.dist_inter;
  j["dist_intra"] = report.dist_intra;
  j["ratio"] = report.ratio;
  return j.dump(2) + "\n";
}

}  // namespace emoint
