#ifndef EMOINT_EMO_EVAL_H_
#define EMOINT_EMO_EVAL_H_

// Embedding-space evaluation: class centroids, the intra/inter clustering
// ratio, and the emotion classification (cross-entropy) and embedding
// similarity (RMS difference) losses.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace emoint {

struct EmbeddingSet {
  Eigen::MatrixXd embeddings;        // n x D
  std::vector<int> labels;           // class index per row, in [0, K)
  std::vector<std::string> class_names;
  std::vector<std::string> ids;      // optional, parallel to rows

  int num_classes() const { return static_cast<int>(class_names.size()); }
};

struct ClusterReport {
  Eigen::MatrixXd centroids;  // K x D
  double dist_inter = 0.0;
  double dist_intra = 0.0;
  double ratio = 0.0;
};

// Throws kEmptyClass when some class has no member, kInvalidParams on
// malformed labels.
Eigen::MatrixXd Centroids(const EmbeddingSet& set);

// dist_inter = 1/(K(K-1)) sum_i 1/N_i sum_{e in E_i} sum_{j != i} |e - c_j|
// dist_intra = 1/K        sum_i 1/N_i sum_{e in E_i} |e - c_i|
// ratio      = dist_intra / dist_inter
// Requires K >= 2; throws kDegenerateClusters when dist_inter is 0.
ClusterReport ClusteringRatio(const EmbeddingSet& set);

// -log(max(p_target, 1e-12)). `label` must be one-hot and `probs` a
// distribution (non-negative, sum 1 +/- 1e-6); throws kInvalidDistribution.
double EmotionClassificationLoss(std::span<const double> label,
                                 std::span<const double> probs);

// sqrt(1/D sum_d (a_d - b_d)^2). Throws kDimensionMismatch.
double EmotionSimilarityLoss(std::span<const double> h_emo,
                             std::span<const double> h_ser);

// CSV with header `id,label,d0,...,dN`; class indices follow first
// appearance of each label.
EmbeddingSet LoadEmbeddingsCsv(const std::filesystem::path& path);

std::string ClusterReportJson(const ClusterReport& report,
                              const std::vector<std::string>& class_names);

}  // namespace emoint

#endif  // EMOINT_EMO_EVAL_H_
