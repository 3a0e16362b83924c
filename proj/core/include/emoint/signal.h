#ifndef EMOINT_SIGNAL_H_
#define EMOINT_SIGNAL_H_

// Audio ingestion and short-time spectral analysis shared by the feature,
// ranking and evaluation pipelines. Every function here is a pure function
// of its inputs.

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace emoint {

// Mono audio. Construction validates: non-empty, finite, sample_rate > 0.
class Waveform {
 public:
  Waveform(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double duration_s() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

// Reads a RIFF/WAVE file holding 16-bit mono PCM. Samples are divided by
// 32768. Throws kNotFound or kUnsupportedFormat.
Waveform LoadWav(const std::filesystem::path& path);

// Writes 16-bit mono PCM; samples are clipped to [-1, 1).
void SaveWav(const Waveform& wave, const std::filesystem::path& path);

struct FrameSequence {
  Eigen::MatrixXd frames;  // n_frames x frame_len
  int frame_len = 0;
  int hop_len = 0;

  Eigen::Index n_frames() const { return frames.rows(); }
};

// Slides a frame_len window by hop samples, dropping the trailing partial
// region. Inputs shorter than one frame produce a single zero-padded frame.
FrameSequence Frame(std::span<const double> samples, int frame_len, int hop);
inline FrameSequence Frame(const Waveform& wave, int frame_len, int hop) {
  return Frame(wave.samples(), frame_len, hop);
}

// Periodic Hann window of length n.
std::vector<double> HannWindow(int n);

// Squared DFT magnitudes of Hann-windowed, zero-padded frames:
// n_frames x (n_fft / 2 + 1). Requires n_fft >= frame_len.
Eigen::MatrixXd PowerSpectrogram(const FrameSequence& frames, int n_fft);

double HzToMel(double hz);
double MelToHz(double mel);

struct FilterBank {
  Eigen::MatrixXd weights;  // n_mels x (n_fft / 2 + 1)
  std::vector<double> center_hz;
  int n_fft = 0;
  int sample_rate = 0;
  double fmin = 0.0;
  double fmax = 0.0;

  Eigen::Index n_mels() const { return weights.rows(); }
};

// Triangular filters with unit peak whose edges and centres are equally
// spaced on the mel scale between fmin and fmax. Throws kInvalidParams when
// the range is invalid or some filter covers no FFT bin.
FilterBank MelFilterbank(int n_mels, int n_fft, int sample_rate, double fmin,
                         double fmax);

struct MelConfig {
  double frame_len_ms = 50.0;
  double frame_shift_ms = 12.5;
  int n_mels = 80;
  double log_floor = 1e-10;
  double fmin = 0.0;
  double fmax = 0.0;  // <= 0 selects Nyquist
};

struct MelSpectrogram {
  Eigen::MatrixXd values;  // n_frames x n_mels, natural-log power
  int n_mels = 0;
  double frame_shift_ms = 0.0;
  double frame_len_ms = 0.0;
};

MelSpectrogram MelLogSpectrogram(const Waveform& wave,
                                 const MelConfig& config = {});

// Filterbank energies (not logged) for every frame: n_frames x n_mels.
Eigen::MatrixXd MelEnergies(const FrameSequence& frames,
                            const FilterBank& bank);

// Orthonormal DCT-II; returns the first n_out coefficients.
std::vector<double> DctII(std::span<const double> x, int n_out);

int MsToSamples(double ms, int sample_rate);
int NextPowerOfTwo(int n);

}  // namespace emoint

#endif  // EMOINT_SIGNAL_H_
