#include "emoint/features.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "emoint/error.h"

namespace emoint {

std::size_t F0Contour::voiced_count() const {
  return static_cast<std::size_t>(std::count(voiced.begin(), voiced.end(), true));
}

double ZeroCrossingRate(std::span<const double> frame) {
  if (frame.size() < 2) return 0.0;
  int crossings = 0;
  for (std::size_t i = 1; i < frame.size(); ++i) {
    if ((frame[i - 1] >= 0.0) != (frame[i] >= 0.0)) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
}

double FrameRms(std::span<const double> frame) {
  if (frame.empty()) return 0.0;
  double acc = 0.0;
  for (double s : frame) acc += s * s;
  return std::sqrt(acc / static_cast<double>(frame.size()));
}

double HarmonicsToNoiseDb(double autocorr_peak) {
  constexpr double kLimit = 60.0;
  if (autocorr_peak <= 0.0) return -kLimit;
  if (autocorr_peak >= 1.0) return kLimit;
  const double db = 10.0 * std::log10(autocorr_peak / (1.0 - autocorr_peak));
  return std::clamp(db, -kLimit, kLimit);
}

PitchFrame AnalyzePitchFrame(std::span<const double> frame, int sample_rate,
                             const PitchConfig& config) {
  PitchFrame out;
  const auto n = static_cast<int>(frame.size());
  const double rms = FrameRms(frame);

  const int lag_min = std::max(2, static_cast<int>(std::floor(sample_rate / config.f0_max_hz)));
  const int lag_max = std::min(n - 2, static_cast<int>(std::ceil(sample_rate / config.f0_min_hz)));
  if (lag_max <= lag_min) return out;

  double mean = 0.0;
  for (double s : frame) mean += s;
  mean /= n;
  std::vector<double> x(frame.begin(), frame.end());
  for (double& s : x) s -= mean;

  // r[lag - lag_min + 1] for lag in [lag_min - 1, lag_max + 1]
  std::vector<double> r(static_cast<std::size_t>(lag_max - lag_min + 3), 0.0);
  for (int lag = lag_min - 1; lag <= std::min(lag_max + 1, n - 1); ++lag) {
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (int i = 0; i + lag < n; ++i) {
      xy += x[i] * x[i + lag];
      xx += x[i] * x[i];
      yy += x[i + lag] * x[i + lag];
    }
    const double denom = std::sqrt(xx * yy);
    r[lag - lag_min + 1] = denom > 0.0 ? xy / denom : 0.0;
  }
  const auto at = [&](int lag) { return r[lag - lag_min + 1]; };

  int best = lag_min;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    if (at(lag) > at(best)) best = lag;
  }
  // Prefer the shortest lag that is a local peak close to the global one;
  // multiples of the period correlate almost as well and cause octave errors.
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    if (at(lag) >= at(lag - 1) && at(lag) >= at(lag + 1) &&
        at(lag) >= 0.95 * at(best)) {
      best = lag;
      break;
    }
  }

  double lag = best;
  double peak = at(best);
  const double a = at(best - 1), b = at(best), c = at(best + 1);
  const double curvature = a - 2.0 * b + c;
  if (curvature < 0.0) {
    const double delta = std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
    lag += delta;
    peak = b - 0.25 * (a - c) * delta;
  }
  out.peak = std::min(peak, 1.0);
  out.voiced = out.peak >= config.voicing_threshold && rms >= config.silence_rms;
  out.f0_hz = out.voiced ? sample_rate / lag : 0.0;
  return out;
}

namespace {

// Pitch window of `window_len` samples centred at `center`, zero-padded
// where it runs past either end of the signal.
std::vector<double> CenteredWindow(std::span<const double> samples,
                                   long center, int window_len) {
  std::vector<double> out(static_cast<std::size_t>(window_len), 0.0);
  const long start = center - window_len / 2;
  for (int i = 0; i < window_len; ++i) {
    const long src = start + i;
    if (src >= 0 && src < static_cast<long>(samples.size())) out[i] = samples[src];
  }
  return out;
}

}  // namespace

LldMatrix ComputeLlds(const Waveform& wave, const LldConfig& config) {
  const int sr = wave.sample_rate();
  const int frame_len = MsToSamples(config.frame_len_ms, sr);
  const int hop = MsToSamples(config.frame_shift_ms, sr);
  const int pitch_len = MsToSamples(config.pitch.frame_len_ms, sr);
  const int n_fft = NextPowerOfTwo(frame_len);

  const FrameSequence frames = Frame(wave, frame_len, hop);
  const FilterBank bank =
      MelFilterbank(config.n_mfcc_filters, n_fft, sr, 0.0, sr / 2.0);
  const Eigen::MatrixXd mel = MelEnergies(frames, bank);

  LldMatrix out;
  out.frame_shift_ms = config.frame_shift_ms;
  out.values.resize(frames.n_frames(), kNumLlds);
  std::vector<double> frame(static_cast<std::size_t>(frame_len));
  std::vector<double> log_mel(static_cast<std::size_t>(config.n_mfcc_filters));
  for (Eigen::Index f = 0; f < frames.n_frames(); ++f) {
    for (int i = 0; i < frame_len; ++i) frame[i] = frames.frames(f, i);
    out.values(f, kLldZcr) = ZeroCrossingRate(frame);
    out.values(f, kLldRms) = FrameRms(frame);

    const long center = static_cast<long>(f) * hop + frame_len / 2;
    const PitchFrame pitch = AnalyzePitchFrame(
        CenteredWindow(wave.samples(), center, pitch_len), sr, config.pitch);
    out.values(f, kLldF0) = pitch.voiced ? pitch.f0_hz : 0.0;
    out.values(f, kLldHnr) = HarmonicsToNoiseDb(pitch.peak);

    for (int m = 0; m < config.n_mfcc_filters; ++m) {
      log_mel[m] = std::log(std::max(mel(f, m), config.log_floor));
    }
    const std::vector<double> cep = DctII(log_mel, kNumMfcc + 1);
    for (int k = 1; k <= kNumMfcc; ++k) {
      out.values(f, kLldMfcc1 + k - 1) = cep[k];
    }
  }
  return out;
}

LldMatrix Delta(const LldMatrix& lld) {
  constexpr int kRadius = 2;
  constexpr double kNorm = 2.0 * (1 * 1 + 2 * 2);
  const Eigen::Index n = lld.n_frames();
  LldMatrix out;
  out.frame_shift_ms = lld.frame_shift_ms;
  out.values = Eigen::MatrixXd::Zero(n, lld.values.cols());
  const auto clamp = [n](Eigen::Index t) { return std::clamp<Eigen::Index>(t, 0, n - 1); };
  for (Eigen::Index t = 0; t < n; ++t) {
    for (int k = 1; k <= kRadius; ++k) {
      out.values.row(t) +=
          k * (lld.values.row(clamp(t + k)) - lld.values.row(clamp(t - k)));
    }
  }
  out.values /= kNorm;
  return out;
}

std::array<double, kNumFunctionals> ComputeFunctionals(
    std::span<const double> series) {
  std::array<double, kNumFunctionals> out{};
  const auto n = series.size();
  if (n == 0) return out;
  const double dn = static_cast<double>(n);

  const auto [min_it, max_it] = std::minmax_element(series.begin(), series.end());
  // minmax_element returns the last maximum; positions use the first.
  const auto first_max = std::max_element(series.begin(), series.end());
  const double lo = *min_it;
  const double hi = *max_it;
  const double pos_scale = n > 1 ? 1.0 / (dn - 1.0) : 0.0;
  out[kFnMin] = lo;
  out[kFnMinPos] = static_cast<double>(min_it - series.begin()) * pos_scale;
  out[kFnMax] = hi;
  out[kFnMaxPos] = static_cast<double>(first_max - series.begin()) * pos_scale;
  out[kFnRange] = hi - lo;

  if (lo == hi) {
    out[kFnMean] = lo;
    out[kFnOffset] = lo;
    return out;
  }

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : series) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  out[kFnMean] = mean;
  out[kFnStd] = std::sqrt(m2);
  if (m2 > 1e-24 * mean * mean) {
    out[kFnSkewness] = m3 / std::pow(m2, 1.5);
    out[kFnKurtosis] = m4 / (m2 * m2) - 3.0;
  }

  const double t_mean = (dn - 1.0) / 2.0;
  double stt = 0.0, stx = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double dt = static_cast<double>(t) - t_mean;
    stt += dt * dt;
    stx += dt * (series[t] - mean);
  }
  const double slope = stt > 0.0 ? stx / stt : 0.0;
  const double offset = mean - slope * t_mean;
  double sse = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double e = series[t] - (offset + slope * static_cast<double>(t));
    sse += e * e;
  }
  out[kFnOffset] = offset;
  out[kFnSlope] = slope;
  out[kFnMse] = sse / dn;
  return out;
}

FeatureVector Functionals(const LldMatrix& lld, const LldMatrix& deltas) {
  if (lld.n_frames() != deltas.n_frames() || lld.values.cols() != kNumLlds ||
      deltas.values.cols() != kNumLlds) {
    throw Error(ErrorCode::kDimensionMismatch,
                "functionals need matching 16-column LLD and delta matrices");
  }
  FeatureVector out;
  out.values.reserve(kFeatureDim);
  std::vector<double> column(static_cast<std::size_t>(lld.n_frames()));
  for (int c = 0; c < 2 * kNumLlds; ++c) {
    const Eigen::MatrixXd& src = c < kNumLlds ? lld.values : deltas.values;
    const int col = c % kNumLlds;
    for (Eigen::Index t = 0; t < lld.n_frames(); ++t) column[t] = src(t, col);
    const auto stats = ComputeFunctionals(column);
    out.values.insert(out.values.end(), stats.begin(), stats.end());
  }
  return out;
}

FeatureVector ExtractFeatureVector(const Waveform& wave, std::string id,
                                   const LldConfig& config) {
  const LldMatrix lld = ComputeLlds(wave, config);
  FeatureVector out = Functionals(lld, Delta(lld));
  out.id = std::move(id);
  return out;
}

F0Contour PitchContour(const Waveform& wave, const PitchConfig& config) {
  const int sr = wave.sample_rate();
  const FrameSequence frames =
      Frame(wave, MsToSamples(config.frame_len_ms, sr),
            MsToSamples(config.frame_shift_ms, sr));
  F0Contour out;
  out.frame_shift_ms = config.frame_shift_ms;
  out.f0_hz.reserve(static_cast<std::size_t>(frames.n_frames()));
  out.voiced.reserve(static_cast<std::size_t>(frames.n_frames()));
  std::vector<double> frame(static_cast<std::size_t>(frames.frame_len));
  for (Eigen::Index f = 0; f < frames.n_frames(); ++f) {
    for (int i = 0; i < frames.frame_len; ++i) frame[i] = frames.frames(f, i);
    const PitchFrame p = AnalyzePitchFrame(frame, sr, config);
    out.f0_hz.push_back(p.voiced ? p.f0_hz : 0.0);
    out.voiced.push_back(p.voiced);
  }
  return out;
}

EnergyContour ComputeEnergyContour(const Waveform& wave,
                                   const EnergyConfig& config) {
  const int sr = wave.sample_rate();
  const int frame_len = MsToSamples(config.frame_len_ms, sr);
  const FrameSequence frames =
      Frame(wave, frame_len, MsToSamples(config.frame_shift_ms, sr));
  const FilterBank bank = MelFilterbank(kEnergyFilters, NextPowerOfTwo(frame_len),
                                        sr, 0.0, sr / 2.0);
  const Eigen::VectorXd sums = MelEnergies(frames, bank).rowwise().sum();
  EnergyContour out;
  out.frame_shift_ms = config.frame_shift_ms;
  out.energy.assign(sums.data(), sums.data() + sums.size());
  return out;
}

std::string_view LldName(int column) {
  static const std::array<std::string, kNumLlds> kNames = [] {
    std::array<std::string, kNumLlds> names;
    names[kLldZcr] = "zcr";
    names[kLldRms] = "rms";
    names[kLldF0] = "f0";
    names[kLldHnr] = "hnr";
    for (int k = 1; k <= kNumMfcc; ++k) {
      names[kLldMfcc1 + k - 1] = "mfcc" + std::to_string(k);
    }
    return names;
  }();
  if (column < 0 || column >= kNumLlds) {
    throw Error(ErrorCode::kInvalidParams, "LLD column out of range");
  }
  return kNames[column];
}

std::string_view FunctionalName(int functional) {
  static constexpr std::array<std::string_view, kNumFunctionals> kNames = {
      "mean", "std",    "skewness", "kurtosis", "min",   "minpos",
      "max",  "maxpos", "range",    "offset",   "slope", "mse"};
  if (functional < 0 || functional >= kNumFunctionals) {
    throw Error(ErrorCode::kInvalidParams, "functional index out of range");
  }
  return kNames[functional];
}

FeatureDescription DescribeFeature(int index) {
  if (index < 0 || index >= kFeatureDim) {
    throw Error(ErrorCode::kInvalidParams,
                "feature index " + std::to_string(index) + " out of range");
  }
  const int trajectory = index / kNumFunctionals;
  const int functional = index % kNumFunctionals;
  FeatureDescription d;
  d.index = index;
  d.lld = std::string(LldName(trajectory % kNumLlds));
  d.delta = trajectory >= kNumLlds;
  d.functional = std::string(FunctionalName(functional));
  d.name = d.lld + (d.delta ? "_de_" : "_") + d.functional;
  return d;
}

std::vector<FeatureDescription> DescribeFeatures() {
  std::vector<FeatureDescription> out;
  out.reserve(kFeatureDim);
  for (int i = 0; i < kFeatureDim; ++i) out.push_back(DescribeFeature(i));
  return out;
}

}  // namespace emoint
