#include "emoint/signal.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "emoint/error.h"

namespace emoint {

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "waveform has no samples");
  }
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kInvalidParams,
                "sample rate must be positive, got " +
                    std::to_string(sample_rate_));
  }
  for (double s : samples_) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFinite, "waveform contains non-finite samples");
    }
  }
}

FrameSequence Frame(std::span<const double> samples, int frame_len, int hop) {
  if (frame_len < 1 || hop < 1) {
    throw Error(ErrorCode::kInvalidParams,
                "frame length and hop must be >= 1 (got " +
                    std::to_string(frame_len) + ", " + std::to_string(hop) +
                    ")");
  }
  const auto len = static_cast<Eigen::Index>(samples.size());
  FrameSequence out;
  out.frame_len = frame_len;
  out.hop_len = hop;
  if (len < frame_len) {
    out.frames = Eigen::MatrixXd::Zero(1, frame_len);
    for (Eigen::Index i = 0; i < len; ++i) out.frames(0, i) = samples[i];
    return out;
  }
  const Eigen::Index n = (len - frame_len) / hop + 1;
  out.frames.resize(n, frame_len);
  for (Eigen::Index f = 0; f < n; ++f) {
    const double* src = samples.data() + f * hop;
    for (int i = 0; i < frame_len; ++i) out.frames(f, i) = src[i];
  }
  return out;
}

std::vector<double> HannWindow(int n) {
  std::vector<double> w(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

Eigen::MatrixXd PowerSpectrogram(const FrameSequence& frames, int n_fft) {
  if (n_fft < frames.frame_len) {
    throw Error(ErrorCode::kInvalidParams,
                "n_fft " + std::to_string(n_fft) + " < frame length " +
                    std::to_string(frames.frame_len));
  }
  const int n_bins = n_fft / 2 + 1;
  const std::vector<double> window = HannWindow(frames.frame_len);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buf(static_cast<std::size_t>(n_fft), 0.0);
  std::vector<std::complex<double>> spec;

  Eigen::MatrixXd power(frames.n_frames(), n_bins);
  for (Eigen::Index f = 0; f < frames.n_frames(); ++f) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < frames.frame_len; ++i) {
      buf[i] = frames.frames(f, i) * window[i];
    }
    fft.fwd(spec, buf);
    for (int k = 0; k < n_bins; ++k) power(f, k) = std::norm(spec[k]);
  }
  return power;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

FilterBank MelFilterbank(int n_mels, int n_fft, int sample_rate, double fmin,
                         double fmax) {
  if (n_mels < 1 || n_fft < 2 || sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidParams,
                "mel filterbank needs n_mels >= 1, n_fft >= 2, sample_rate > 0");
  }
  const double nyquist = sample_rate / 2.0;
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= nyquist)) {
    throw Error(ErrorCode::kInvalidParams,
                "mel filterbank range must satisfy 0 <= fmin < fmax <= " +
                    std::to_string(nyquist));
  }
  const int n_bins = n_fft / 2 + 1;
  const double mel_lo = HzToMel(fmin);
  const double mel_hi = HzToMel(fmax);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    (n_mels + 1));
  }

  FilterBank bank;
  bank.weights = Eigen::MatrixXd::Zero(n_mels, n_bins);
  bank.center_hz.assign(edges.begin() + 1, edges.end() - 1);
  bank.n_fft = n_fft;
  bank.sample_rate = sample_rate;
  bank.fmin = fmin;
  bank.fmax = fmax;
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m];
    const double mid = edges[m + 1];
    const double hi = edges[m + 2];
    bool any = false;
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      const double w = std::min((f - lo) / (mid - lo), (hi - f) / (hi - mid));
      if (w > 0.0) {
        bank.weights(m, k) = w;
        any = true;
      }
    }
    if (!any) {
      throw Error(ErrorCode::kInvalidParams,
                  "mel filter " + std::to_string(m) +
                      " covers no FFT bin; increase n_fft or lower n_mels");
    }
  }
  return bank;
}

Eigen::MatrixXd MelEnergies(const FrameSequence& frames,
                            const FilterBank& bank) {
  const Eigen::MatrixXd power = PowerSpectrogram(frames, bank.n_fft);
  return power * bank.weights.transpose();
}

MelSpectrogram MelLogSpectrogram(const Waveform& wave,
                                 const MelConfig& config) {
  const int sr = wave.sample_rate();
  const int frame_len = MsToSamples(config.frame_len_ms, sr);
  const int hop = MsToSamples(config.frame_shift_ms, sr);
  const int n_fft = NextPowerOfTwo(frame_len);
  const double fmax = config.fmax > 0.0 ? config.fmax : sr / 2.0;
  const FilterBank bank =
      MelFilterbank(config.n_mels, n_fft, sr, config.fmin, fmax);

  MelSpectrogram out;
  out.values = MelEnergies(Frame(wave, frame_len, hop), bank)
                   .unaryExpr([floor = config.log_floor](double e) {
                     return std::log(std::max(e, floor));
                   });
  out.n_mels = config.n_mels;
  out.frame_shift_ms = config.frame_shift_ms;
  out.frame_len_ms = config.frame_len_ms;
  return out;
}

std::vector<double> DctII(std::span<const double> x, int n_out) {
  const auto n = static_cast<int>(x.size());
  if (n_out < 0 || n_out > n) {
    throw Error(ErrorCode::kInvalidParams,
                "DCT output size " + std::to_string(n_out) +
                    " exceeds input size " + std::to_string(n));
  }
  std::vector<double> out(static_cast<std::size_t>(n_out));
  for (int k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
    }
    out[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
  }
  return out;
}

int MsToSamples(double ms, int sample_rate) {
  const long n = std::lround(ms * sample_rate / 1000.0);
  if (n < 1) {
    throw Error(ErrorCode::kInvalidParams,
                std::to_string(ms) + " ms is shorter than one sample");
  }
  return static_cast<int>(n);
}

int NextPowerOfTwo(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace emoint
