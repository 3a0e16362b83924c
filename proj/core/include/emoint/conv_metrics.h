#ifndef EMOINT_CONV_METRICS_H_
#define EMOINT_CONV_METRICS_H_

// Objective comparison of a converted utterance against its reference:
// mel-cepstra, DTW alignment, mel-cepstral distortion, voiced-duration
// difference, and aligned pitch/energy contours.

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "emoint/features.h"
#include "emoint/signal.h"

namespace emoint {

struct McepConfig {
  int order = 24;
  int n_bands = 40;
  double frame_len_ms = 25.0;
  double frame_shift_ms = 5.0;
  double log_floor = 1e-10;
};

struct McepSequence {
  Eigen::MatrixXd coeffs;  // n_frames x (order + 1); column 0 is the energy term
  double frame_shift_ms = 5.0;

  int order() const { return static_cast<int>(coeffs.cols()) - 1; }
};

// DCT-II of the log mel-band power spectrum, coefficients 0..order. These are
// not SPTK/WORLD mel-generalized cepstra; compare only with each other.
McepSequence Mcep(const Waveform& wave, const McepConfig& config = {});

struct AlignedPair {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct AlignmentPath {
  std::vector<AlignedPair> pairs;
  double total_cost = 0.0;

  std::size_t size() const { return pairs.size(); }
};

// Minimum-cost monotone alignment of the rows of `a` and `b` under
// Euclidean frame distance with steps (1,0), (0,1), (1,1). On ties the
// backtrace prefers the diagonal, then advancing `a` alone.
// Throws kEmptyInput, kDimensionMismatch.
AlignmentPath DtwAlign(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
AlignmentPath DtwAlign(std::span<const double> a, std::span<const double> b);

// 10 sqrt(2) / ln 10.
inline constexpr double kMcdScale = 10.0 * std::numbers::sqrt2 / std::numbers::ln10;

// (10 sqrt(2) / ln 10) * (1 / M) * sqrt(sum_m (y_m - yhat_m)^2), M = y.size().
double McdFrame(std::span<const double> y, std::span<const double> y_hat);

struct McdConfig {
  bool include_c0 = false;
};

// DTW-aligns the two sequences on the compared coefficients and averages the
// per-pair distortion over the path. Throws kOrderMismatch.
double Mcd(const McepSequence& a, const McepSequence& b,
           const McdConfig& config = {});

enum class DdurMode {
  kTotal,  // number of voiced frames times the frame shift
  kSpan,   // first to last voiced frame inclusive
};

// Voiced duration in seconds.
double VoicedDuration(const F0Contour& contour, DdurMode mode = DdurMode::kTotal);

struct EvalConfig {
  McepConfig mcep;
  McdConfig mcd;
  PitchConfig pitch;
  DdurMode ddur_mode = DdurMode::kTotal;
};

// |Z - Z_hat| in seconds.
double Ddur(const Waveform& converted, const Waveform& reference,
            const EvalConfig& config = {});

struct ContourRow {
  std::size_t i = 0;  // converted frame
  std::size_t j = 0;  // reference frame
  double converted = 0.0;
  double reference = 0.0;
};

struct EvaluationReport {
  double mcd_db = 0.0;
  double ddur_s = 0.0;
  std::size_t n_aligned_frames = 0;  // length of the F0 alignment path
  std::vector<ContourRow> aligned_f0;
  std::vector<ContourRow> aligned_energy;
  // Energy looked up at the F0 path's frame pairs, for the joint table.
  std::vector<ContourRow> energy_on_f0_path;
};

// F0 (unvoiced = 0) and 26-band energy contours share the pitch framing and
// are each DTW-aligned; MCD and DDUR are included.
EvaluationReport ContourReport(const Waveform& converted,
                               const Waveform& reference,
                               const EvalConfig& config = {});

// Header `path_idx,i,j,f0_conv,f0_ref,energy_conv,energy_ref`, rows along
// the F0 alignment path.
std::string ContourCsv(const EvaluationReport& report);

std::string_view DdurModeName(DdurMode mode);
DdurMode ParseDdurMode(std::string_view name);

}  // namespace emoint

#endif  // EMOINT_CONV_METRICS_H_
