#ifndef EMOINT_FEATURES_H_
#define EMOINT_FEATURES_H_

// Frame-level descriptors (LLDs), delta regression, statistical functionals
// and the prosodic contours used for intensity analysis.
//
// The utterance vector has 384 entries: 16 LLDs plus their 16 deltas give
// 32 trajectories, each summarised by 12 functionals. The entry for
// trajectory `c` and functional `f` lives at index c * 12 + f. This map is
// part of the public contract; see DescribeFeature().

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "emoint/signal.h"

namespace emoint {

inline constexpr int kNumLlds = 16;
inline constexpr int kNumMfcc = 12;
inline constexpr int kNumFunctionals = 12;
inline constexpr int kFeatureDim = 2 * kNumLlds * kNumFunctionals;  // 384

enum LldColumn : int {
  kLldZcr = 0,
  kLldRms = 1,
  kLldF0 = 2,
  kLldHnr = 3,
  kLldMfcc1 = 4,  // MFCC k is at kLldMfcc1 + k - 1
};

enum Functional : int {
  kFnMean = 0,
  kFnStd,
  kFnSkewness,
  kFnKurtosis,
  kFnMin,
  kFnMinPos,
  kFnMax,
  kFnMaxPos,
  kFnRange,
  kFnOffset,
  kFnSlope,
  kFnMse,
};

struct LldMatrix {
  Eigen::MatrixXd values;  // n_frames x 16
  double frame_shift_ms = 10.0;

  Eigen::Index n_frames() const { return values.rows(); }
};

struct FeatureVector {
  std::string id;
  std::vector<double> values;  // kFeatureDim entries
};

struct PitchConfig {
  double frame_len_ms = 40.0;
  double frame_shift_ms = 10.0;
  double f0_min_hz = 60.0;
  double f0_max_hz = 400.0;
  double voicing_threshold = 0.45;
  double silence_rms = 1e-3;
};

struct LldConfig {
  double frame_len_ms = 25.0;
  double frame_shift_ms = 10.0;
  int n_mfcc_filters = 26;
  double log_floor = 1e-10;
  PitchConfig pitch;  // only range and thresholds are used; window is pitch.frame_len_ms
};

struct EnergyConfig {
  double frame_len_ms = 25.0;
  double frame_shift_ms = 10.0;
};

inline constexpr int kEnergyFilters = 26;

struct F0Contour {
  std::vector<double> f0_hz;  // 0 when unvoiced
  std::vector<bool> voiced;
  double frame_shift_ms = 10.0;

  std::size_t size() const { return f0_hz.size(); }
  std::size_t voiced_count() const;
};

struct EnergyContour {
  std::vector<double> energy;
  double frame_shift_ms = 10.0;
};

// Per-frame pitch analysis result.
struct PitchFrame {
  double f0_hz = 0.0;
  double peak = 0.0;  // normalized autocorrelation at the chosen lag
  bool voiced = false;
};

double ZeroCrossingRate(std::span<const double> frame);
double FrameRms(std::span<const double> frame);

// Normalized-autocorrelation pitch estimate for one analysis window.
PitchFrame AnalyzePitchFrame(std::span<const double> frame, int sample_rate,
                             const PitchConfig& config);

// 10 log10(r / (1 - r)) clamped to [-60, 60] dB.
double HarmonicsToNoiseDb(double autocorr_peak);

LldMatrix ComputeLlds(const Waveform& wave, const LldConfig& config = {});

// Regression deltas over a +/-2 frame window with edge frames replicated.
LldMatrix Delta(const LldMatrix& lld);

// Twelve functionals of a single trajectory, in Functional order.
std::array<double, kNumFunctionals> ComputeFunctionals(
    std::span<const double> series);

FeatureVector Functionals(const LldMatrix& lld, const LldMatrix& deltas);

// Full recipe: LLDs, deltas, functionals.
FeatureVector ExtractFeatureVector(const Waveform& wave, std::string id = {},
                                   const LldConfig& config = {});

F0Contour PitchContour(const Waveform& wave, const PitchConfig& config = {});
EnergyContour ComputeEnergyContour(const Waveform& wave,
                                   const EnergyConfig& config = {});

struct FeatureDescription {
  int index = 0;
  std::string lld;
  bool delta = false;
  std::string functional;
  std::string name;  // e.g. "mfcc3_de_slope"
};

std::string_view LldName(int column);
std::string_view FunctionalName(int functional);
FeatureDescription DescribeFeature(int index);
std::vector<FeatureDescription> DescribeFeatures();

}  // namespace emoint

#endif  // EMOINT_FEATURES_H_
