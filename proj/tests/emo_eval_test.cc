#include "emoint/emo_eval.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "emoint/error.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace emoint {
namespace {

EmbeddingSet HandExample() {
  EmbeddingSet s;
  s.embeddings.resize(4, 2);
  s.embeddings << -1, 0, 1, 0, 3, 0, 5, 0;
  s.labels = {0, 0, 1, 1};
  s.class_names = {"a", "b"};
  return s;
}

// Three isotropic Gaussian classes with centres `separation` apart.
EmbeddingSet GaussianClusters(double separation, int per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  EmbeddingSet s;
  s.class_names = {"x", "y", "z"};
  s.embeddings.resize(3 * per_class, 4);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < per_class; ++i) {
      const int r = k * per_class + i;
      for (int d = 0; d < 4; ++d) s.embeddings(r, d) = g(rng);
      s.embeddings(r, k) += separation;
      s.labels.push_back(k);
    }
  }
  return s;
}

// Direct evaluation of the intra/inter means from their definitions.
double RatioOracle(const EmbeddingSet& s) {
  const int k = s.num_classes();
  std::vector<Eigen::VectorXd> c(k, Eigen::VectorXd::Zero(s.embeddings.cols()));
  std::vector<int> n(k, 0);
  for (Eigen::Index r = 0; r < s.embeddings.rows(); ++r) {
    c[s.labels[r]] += s.embeddings.row(r).transpose();
    ++n[s.labels[r]];
  }
  for (int i = 0; i < k; ++i) c[i] /= n[i];
  double intra = 0.0, inter = 0.0;
  for (Eigen::Index r = 0; r < s.embeddings.rows(); ++r) {
    const int i = s.labels[r];
    for (int j = 0; j < k; ++j) {
      const double dist = (s.embeddings.row(r).transpose() - c[j]).norm() / n[i];
      (i == j ? intra : inter) += dist;
    }
  }
  return (intra / k) / (inter / (k * (k - 1.0)));
}

TEST(Centroids, ClassMeans) {
  const Eigen::MatrixXd c = Centroids(HandExample());
  EXPECT_EQ(c(0, 0), 0.0);
  EXPECT_EQ(c(1, 0), 4.0);
  EXPECT_EQ(c(1, 1), 0.0);
}

TEST(Centroids, EmptyClass) {
  EmbeddingSet s = HandExample();
  s.class_names.push_back("unused");
  try {
    Centroids(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyClass);
  }
}

TEST(ClusteringRatio, HandExample) {
  const ClusterReport r = ClusteringRatio(HandExample());
  EXPECT_EQ(r.dist_intra, 1.0);
  EXPECT_EQ(r.dist_inter, 4.0);
  EXPECT_EQ(r.ratio, 0.25);
}

TEST(ClusteringRatio, MatchesOracle) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const EmbeddingSet s = GaussianClusters(3.0, 30, seed);
    EXPECT_NEAR(ClusteringRatio(s).ratio, RatioOracle(s), 1e-12);
  }
}

TEST(ClusteringRatio, SeparationLowersRatio) {
  const double near = ClusteringRatio(GaussianClusters(2.0, 200, 11)).ratio;
  const double far = ClusteringRatio(GaussianClusters(10.0, 200, 11)).ratio;
  EXPECT_LT(far, near);
}

TEST(ClusteringRatio, InvariantUnderSimilarityTransforms) {
  const EmbeddingSet s = GaussianClusters(2.5, 40, 5);
  const double base = ClusteringRatio(s).ratio;

  EmbeddingSet moved = s;
  moved.embeddings.rowwise() += Eigen::RowVector4d(10, -3, 7, 0.5);
  EXPECT_NEAR(ClusteringRatio(moved).ratio, base, 1e-9);

  // Rotation in the (0, 1) plane and a reflection of axis 3.
  const double t = 0.7;
  Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
  rot(0, 0) = std::cos(t), rot(0, 1) = -std::sin(t);
  rot(1, 0) = std::sin(t), rot(1, 1) = std::cos(t);
  rot(3, 3) = -1.0;
  EmbeddingSet rotated = s;
  rotated.embeddings = s.embeddings * rot.transpose();
  EXPECT_NEAR(ClusteringRatio(rotated).ratio, base, 1e-9);

  EmbeddingSet scaled = s;
  scaled.embeddings *= 37.5;
  EXPECT_NEAR(ClusteringRatio(scaled).ratio, base, 1e-9);
}

TEST(ClusteringRatio, Errors) {
  EmbeddingSet one = HandExample();
  one.labels = {0, 0, 0, 0};
  one.class_names = {"a"};
  EXPECT_THROW(ClusteringRatio(one), Error);

  EmbeddingSet same;
  same.embeddings = Eigen::MatrixXd::Ones(4, 2);
  same.labels = {0, 0, 1, 1};
  same.class_names = {"a", "b"};
  try {
    ClusteringRatio(same);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateClusters);
  }
}

TEST(ClassificationLoss, Values) {
  EXPECT_EQ(EmotionClassificationLoss(std::vector<double>{0, 1, 0},
                                      std::vector<double>{0, 1, 0}),
            0.0);
  EXPECT_NEAR(EmotionClassificationLoss(std::vector<double>{0, 0, 1, 0},
                                        std::vector<double>(4, 0.25)),
              std::log(4.0), 1e-12);
  EXPECT_NEAR(EmotionClassificationLoss(std::vector<double>{1, 0},
                                        std::vector<double>{0.5, 0.5}),
              std::numbers::ln2, 1e-12);
  // Zero probability on the target is floored, not infinite.
  EXPECT_NEAR(EmotionClassificationLoss(std::vector<double>{1, 0},
                                        std::vector<double>{0, 1}),
              -std::log(1e-12), 1e-9);
}

TEST(ClassificationLoss, RejectsMalformedInputs) {
  const auto code = [](std::vector<double> label, std::vector<double> probs) {
    try {
      EmotionClassificationLoss(label, probs);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kNotFound;
  };
  EXPECT_EQ(code({1, 1}, {0.5, 0.5}), ErrorCode::kInvalidDistribution);
  EXPECT_EQ(code({0.5, 0.5}, {0.5, 0.5}), ErrorCode::kInvalidDistribution);
  EXPECT_EQ(code({1, 0}, {0.7, 0.7}), ErrorCode::kInvalidDistribution);
  EXPECT_EQ(code({1, 0}, {1.5, -0.5}), ErrorCode::kInvalidDistribution);
  EXPECT_EQ(code({1, 0, 0}, {0.5, 0.5}), ErrorCode::kDimensionMismatch);
}

TEST(SimilarityLoss, Values) {
  const std::vector<double> a = {0.1, -2.0, 3.0};
  EXPECT_EQ(EmotionSimilarityLoss(a, a), 0.0);
  EXPECT_NEAR(EmotionSimilarityLoss(std::vector<double>{0, 0, 0},
                                    std::vector<double>{1, 1, 1}),
              1.0, 1e-15);
  EXPECT_NEAR(EmotionSimilarityLoss(std::vector<double>{0, 0},
                                    std::vector<double>{3, 4}),
              3.5355339059327378, 1e-12);
  try {
    EmotionSimilarityLoss(a, std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(SimilarityLoss, MetricProperties) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(6), b(6), c(6);
    for (int d = 0; d < 6; ++d) a[d] = g(rng), b[d] = g(rng), c[d] = g(rng);
    const double ab = EmotionSimilarityLoss(a, b);
    EXPECT_EQ(ab, EmotionSimilarityLoss(b, a));
    EXPECT_LE(EmotionSimilarityLoss(a, c), ab + EmotionSimilarityLoss(b, c) + 1e-12);
  }
}

TEST(EmbeddingsCsv, LoadAndReport) {
  const auto dir = testing::TempDir("emb_csv");
  {
    std::ofstream out(dir / "e.csv");
    out << "id,label,d0,d1\n"
        << "u1,sad,3,0\n"
        << "u2,angry,-1,0\n"
        << "u3,sad,5,0\n"
        << "u4,angry,1,0\n";
  }
  const EmbeddingSet s = LoadEmbeddingsCsv(dir / "e.csv");
  ASSERT_EQ(s.class_names, (std::vector<std::string>{"sad", "angry"}));
  EXPECT_EQ(s.labels, (std::vector<int>{0, 1, 0, 1}));
  EXPECT_EQ(s.ids[2], "u3");
  const ClusterReport r = ClusteringRatio(s);
  EXPECT_EQ(r.ratio, 0.25);

  const auto j = nlohmann::json::parse(ClusterReportJson(r, s.class_names));
  EXPECT_EQ(j["ratio"].get<double>(), 0.25);
  EXPECT_EQ(j["dist_inter"].get<double>(), 4.0);
  EXPECT_EQ(j["classes"][1].get<std::string>(), "angry");
  EXPECT_EQ(j["centroids"][0][0].get<double>(), 4.0);
}

TEST(EmbeddingsCsv, Errors) {
  const auto dir = testing::TempDir("emb_csv_bad");
  {
    std::ofstream out(dir / "bad.csv");
    out << "id,label,d0\nu1,sad,abc\n";
  }
  try {
    LoadEmbeddingsCsv(dir / "bad.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
  try {
    LoadEmbeddingsCsv(dir / "missing.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(IsIoError(e.code()));
  }
}

}  // namespace
}  // namespace emoint
