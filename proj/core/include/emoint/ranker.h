#ifndef EMOINT_RANKER_H_
#define EMOINT_RANKER_H_

// Relative-attribute ranking of emotion intensity.
//
// A linear function r(x) = w . x is learned so that emotional samples
// outrank neutral ones (ordered pairs) while pairs drawn from the same class
// score alike (similar pairs). With the slack variables eliminated the
// training problem is the unconstrained, piecewise-quadratic primal
//
//   f(w) = 1/2 |w|^2 + C * ( sum_{(a,b) in O} max(0, 1 - w.(x_a - x_b))^2
//                          + sum_{(a,b) in S} (w.(x_a - x_b))^2 )
//
// which is minimised with Newton steps (conjugate-gradient inner solves,
// backtracking line search). Scores are min-max normalised to [0, 1] over
// the training set.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace emoint {

enum class SampleClass { kNeutral, kEmotional };

struct IndexPair {
  std::size_t a = 0;
  std::size_t b = 0;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

struct PairSets {
  Eigen::MatrixXd features;          // T x d, one training sample per row
  std::vector<IndexPair> ordered;    // a (emotional) must outrank b (neutral)
  std::vector<IndexPair> similar;    // a and b share a class
};

// Cap on |O|; larger E x N products are subsampled without replacement.
inline constexpr std::size_t kMaxOrderedPairs = 10000;

// Ordered pairs are the full E x N product (or a seeded subsample of it);
// similar pairs are drawn half from N x N and half from E x E.
// n_similar defaults to |O| / 2. Throws kEmptyClass.
PairSets BuildPairs(Eigen::MatrixXd features,
                    std::span<const SampleClass> labels,
                    std::optional<std::size_t> n_similar, std::uint64_t seed);

// Checks index ranges and rejects (i, i) pairs.
void ValidatePairs(const PairSets& pairs);

// Primal objective over pairs.features as stored. Throws kDimensionMismatch.
double RankingObjective(const Eigen::VectorXd& weights, const PairSets& pairs,
                        double c);

struct SolverConfig {
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;
  bool standardize = true;
  double std_floor = 1e-8;
  int max_backtracks = 60;
  double armijo = 1e-4;
};

struct SolverReport {
  int iterations = 0;
  double final_objective = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  // Objective at the start point followed by one entry per accepted step.
  std::vector<double> objective_history;
};

struct RankingModel {
  std::string emotion;
  double c = 1.0;
  Eigen::VectorXd weights;
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_std;
  double attr_min = 0.0;
  double attr_max = 0.0;
  SolverReport solver_report;

  Eigen::Index dim() const { return weights.size(); }

  // w . ((x - mean) / std). Throws kDimensionMismatch.
  double RawScore(std::span<const double> x) const;
};

// Throws kNoOrderedPairs, kNonFinite, kInvalidParams (c <= 0).
RankingModel TrainRanker(const PairSets& pairs, double c,
                         const SolverConfig& config = {},
                         std::string emotion = {});

// Intensity in [0, 1]; 0.5 when the training range collapsed.
double Score(const RankingModel& model, std::span<const double> x);

// JSON with fields {version, emotion, C, weights, feature_mean, feature_std,
// attr_min, attr_max, solver_report}. Doubles are written with round-trip
// precision.
inline constexpr int kModelSchemaVersion = 1;
std::string ModelToJson(const RankingModel& model);
RankingModel ModelFromJson(std::string_view json);
void SaveModel(const RankingModel& model, const std::filesystem::path& path);
RankingModel LoadModel(const std::filesystem::path& path);

// Named presets used when labelling scores: weak 0.1, medium 0.5, strong 0.9.
std::string_view NearestIntensityLevel(double intensity);

}  // namespace emoint

#endif  // EMOINT_RANKER_H_
