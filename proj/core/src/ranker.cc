#include "emoint/ranker.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "emoint/error.h"

namespace emoint {
namespace {

// Unbiased draw from [0, n) using raw engine output, so sampled pairs do not
// depend on the standard library's distribution implementation.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

void SampleWithinClass(const std::vector<std::size_t>& members, std::size_t count,
                       std::mt19937_64& rng, std::vector<IndexPair>& out) {
  const std::uint64_t n = members.size();
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t i = UniformBelow(rng, n);
    std::uint64_t j = UniformBelow(rng, n - 1);
    if (j >= i) ++j;
    out.push_back({members[i], members[j]});
  }
}

// Per-sample accumulation of pair coefficients: the gradient and Hessian
// terms of a pair (a, b) are coef * (x_a - x_b), so sum_p coef_p d_p equals
// Z^T u with u_a += coef, u_b -= coef.
struct Problem {
  const Eigen::MatrixXd& z;
  const std::vector<IndexPair>& ordered;
  const std::vector<IndexPair>& similar;
  double c;

  double Objective(const Eigen::VectorXd& w) const {
    const Eigen::VectorXd s = z * w;
    double loss = 0.0;
    for (const auto& p : ordered) {
      const double slack = std::max(0.0, 1.0 - (s[p.a] - s[p.b]));
      loss += slack * slack;
    }
    for (const auto& p : similar) {
      const double m = s[p.a] - s[p.b];
      loss += m * m;
    }
    return 0.5 * w.squaredNorm() + c * loss;
  }

  // Gradient at w; records which ordered pairs are inside the margin.
  Eigen::VectorXd Gradient(const Eigen::VectorXd& w,
                           std::vector<char>& active) const {
    const Eigen::VectorXd s = z * w;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(z.rows());
    active.assign(ordered.size(), 0);
    for (std::size_t k = 0; k < ordered.size(); ++k) {
      const auto& p = ordered[k];
      const double m = s[p.a] - s[p.b];
      if (m < 1.0) {
        active[k] = 1;
        u[p.a] -= 2.0 * (1.0 - m);
        u[p.b] += 2.0 * (1.0 - m);
      }
    }
    for (const auto& p : similar) {
      const double m = s[p.a] - s[p.b];
      u[p.a] += 2.0 * m;
      u[p.b] -= 2.0 * m;
    }
    return w + c * (z.transpose() * u);
  }

  // Generalized Hessian-vector product for the active set.
  Eigen::VectorXd HessianTimes(const Eigen::VectorXd& v,
                               const std::vector<char>& active) const {
    const Eigen::VectorXd s = z * v;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(z.rows());
    for (std::size_t k = 0; k < ordered.size(); ++k) {
      if (!active[k]) continue;
      const auto& p = ordered[k];
      const double m = 2.0 * (s[p.a] - s[p.b]);
      u[p.a] += m;
      u[p.b] -= m;
    }
    for (const auto& p : similar) {
      const double m = 2.0 * (s[p.a] - s[p.b]);
      u[p.a] += m;
      u[p.b] -= m;
    }
    return v + c * (z.transpose() * u);
  }
};

// Conjugate gradient on H x = rhs. H = I + PSD term, so it is positive
// definite and CG terminates in at most dim steps in exact arithmetic.
Eigen::VectorXd SolveNewtonSystem(const Problem& problem,
                                  const std::vector<char>& active,
                                  const Eigen::VectorXd& rhs) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  const double tol = 1e-24 * std::max(rr, 1e-300);
  const Eigen::Index max_iter = 2 * rhs.size() + 10;
  for (Eigen::Index it = 0; it < max_iter && rr > tol; ++it) {
    const Eigen::VectorXd hp = problem.HessianTimes(p, active);
    const double alpha = rr / p.dot(hp);
    x += alpha * p;
    r -= alpha * hp;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return x;
}

}  // namespace

PairSets BuildPairs(Eigen::MatrixXd features,
                    std::span<const SampleClass> labels,
                    std::optional<std::size_t> n_similar, std::uint64_t seed) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature rows (" + std::to_string(features.rows()) +
                    ") != labels (" + std::to_string(labels.size()) + ")");
  }
  std::vector<std::size_t> neutral, emotional;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == SampleClass::kNeutral ? neutral : emotional).push_back(i);
  }
  if (neutral.empty() || emotional.empty()) {
    throw Error(ErrorCode::kEmptyClass,
                neutral.empty() ? "no neutral samples" : "no emotional samples");
  }

  std::mt19937_64 rng(seed);
  PairSets out;
  out.features = std::move(features);

  const std::uint64_t product =
      static_cast<std::uint64_t>(emotional.size()) * neutral.size();
  if (product <= kMaxOrderedPairs) {
    out.ordered.reserve(product);
    for (std::size_t e : emotional) {
      for (std::size_t n : neutral) out.ordered.push_back({e, n});
    }
  } else {
    // Floyd's sampling of kMaxOrderedPairs distinct cells of E x N.
    std::set<std::uint64_t> chosen;
    for (std::uint64_t j = product - kMaxOrderedPairs; j < product; ++j) {
      const std::uint64_t t = UniformBelow(rng, j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    out.ordered.reserve(kMaxOrderedPairs);
    for (std::uint64_t cell : chosen) {
      out.ordered.push_back({emotional[cell / neutral.size()],
                             neutral[cell % neutral.size()]});
    }
  }

  const std::size_t total = n_similar.value_or(out.ordered.size() / 2);
  std::size_t for_neutral = total / 2;
  std::size_t for_emotional = total - for_neutral;
  if (neutral.size() < 2) {
    for_emotional += for_neutral;
    for_neutral = 0;
  }
  if (emotional.size() < 2) {
    for_neutral = neutral.size() < 2 ? 0 : for_neutral + for_emotional;
    for_emotional = 0;
  }
  SampleWithinClass(neutral, for_neutral, rng, out.similar);
  SampleWithinClass(emotional, for_emotional, rng, out.similar);
  return out;
}

void ValidatePairs(const PairSets& pairs) {
  const auto rows = static_cast<std::size_t>(pairs.features.rows());
  const auto check = [rows](const std::vector<IndexPair>& list,
                            std::string_view what) {
    for (const auto& p : list) {
      if (p.a >= rows || p.b >= rows) {
        throw Error(ErrorCode::kInvalidParams,
                    std::string(what) + " pair index out of range");
      }
      if (p.a == p.b) {
        throw Error(ErrorCode::kInvalidParams,
                    std::string(what) + " pair (" + std::to_string(p.a) + ", " +
                        std::to_string(p.a) + ") compares a sample with itself");
      }
    }
  };
  check(pairs.ordered, "ordered");
  check(pairs.similar, "similar");
}

double RankingObjective(const Eigen::VectorXd& weights, const PairSets& pairs,
                        double c) {
  if (weights.size() != pairs.features.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights have dimension " + std::to_string(weights.size()) +
                    ", features " + std::to_string(pairs.features.cols()));
  }
  ValidatePairs(pairs);
  return Problem{pairs.features, pairs.ordered, pairs.similar, c}.Objective(weights);
}

double RankingModel::RawScore(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has dimension " + std::to_string(x.size()) +
                    ", model " + std::to_string(weights.size()));
  }
  double raw = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    raw += weights[i] * ((x[i] - feature_mean[i]) / feature_std[i]);
  }
  return raw;
}

RankingModel TrainRanker(const PairSets& pairs, double c,
                         const SolverConfig& config, std::string emotion) {
  if (pairs.ordered.empty()) {
    throw Error(ErrorCode::kNoOrderedPairs, "training needs at least one ordered pair");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::kInvalidParams, "C must be positive and finite");
  }
  if (!pairs.features.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "training features contain NaN or Inf");
  }
  ValidatePairs(pairs);

  const Eigen::Index d = pairs.features.cols();
  const auto t = static_cast<double>(pairs.features.rows());
  RankingModel model;
  model.emotion = std::move(emotion);
  model.c = c;
  if (config.standardize) {
    model.feature_mean = pairs.features.colwise().mean().transpose();
    model.feature_std =
        ((pairs.features.rowwise() - model.feature_mean.transpose())
             .colwise()
             .squaredNorm() /
         t)
            .cwiseSqrt()
            .transpose()
            .cwiseMax(config.std_floor);
  } else {
    model.feature_mean = Eigen::VectorXd::Zero(d);
    model.feature_std = Eigen::VectorXd::Ones(d);
  }
  const Eigen::MatrixXd z =
      ((pairs.features.rowwise() - model.feature_mean.transpose()).array().rowwise() /
       model.feature_std.transpose().array())
          .matrix();

  const Problem problem{z, pairs.ordered, pairs.similar, c};
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double f = problem.Objective(w);
  SolverReport& report = model.solver_report;
  report.objective_history.push_back(f);
  std::vector<char> active;
  Eigen::VectorXd grad = problem.Gradient(w, active);

  while (true) {
    report.gradient_norm = grad.norm();
    if (report.gradient_norm <= config.gradient_tolerance) {
      report.converged = true;
      break;
    }
    if (report.iterations >= config.max_iterations) break;

    const Eigen::VectorXd step = SolveNewtonSystem(problem, active, -grad);
    const double slope = grad.dot(step);
    double alpha = 1.0;
    double f_next = f;
    bool accepted = false;
    Eigen::VectorXd w_next;
    for (int k = 0; k < config.max_backtracks; ++k, alpha *= 0.5) {
      w_next = w + alpha * step;
      f_next = problem.Objective(w_next);
      if (f_next <= f + config.armijo * alpha * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // step too small to make progress

    w = std::move(w_next);
    f = f_next;
    ++report.iterations;
    report.objective_history.push_back(f);
    grad = problem.Gradient(w, active);
  }
  report.final_objective = f;
  model.weights = std::move(w);

  model.attr_min = std::numeric_limits<double>::infinity();
  model.attr_max = -std::numeric_limits<double>::infinity();
  std::vector<double> row(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < pairs.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) row[j] = pairs.features(i, j);
    const double raw = model.RawScore(row);
    model.attr_min = std::min(model.attr_min, raw);
    model.attr_max = std::max(model.attr_max, raw);
  }
  return model;
}

double Score(const RankingModel& model, std::span<const double> x) {
  const double raw = model.RawScore(x);
  const double span = model.attr_max - model.attr_min;
  if (!(span > 0.0)) return 0.5;
  return std::clamp((raw - model.attr_min) / span, 0.0, 1.0);
}

std::string_view NearestIntensityLevel(double intensity) {
  if (intensity < 0.3) return "weak";
  if (intensity < 0.7) return "medium";
  return "strong";
}

}  // namespace emoint
