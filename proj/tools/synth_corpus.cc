#include "synth_corpus.h"

#include <cmath>
#include <numbers>
#include <random>

#include "emoint/error.h"

namespace emoint::synth {
namespace fs = std::filesystem;

Waveform Synthesize(const UtteranceSpec& spec, int sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);

  const double lead_s = 0.1;
  const double total_s =
      2 * lead_s + spec.n_syllables * spec.syllable_s + (spec.n_syllables - 1) * spec.gap_s;
  const auto n = static_cast<std::size_t>(total_s * sample_rate);
  std::vector<double> out(n, 0.0);

  std::vector<double> accents(static_cast<std::size_t>(spec.n_syllables));
  for (double& a : accents) a = jitter(rng);

  const int max_harmonic = 30;
  double phase = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double time = static_cast<double>(t) / sample_rate;
    const double progress = time / total_s;
    const double local = time - lead_s;
    const double period = spec.syllable_s + spec.gap_s;
    double envelope = 0.0;
    double f0 = spec.f0_hz * (1.0 - spec.f0_declination * progress);
    if (local >= 0.0) {
      const auto syl = static_cast<int>(local / period);
      const double within = local - syl * period;
      if (syl < spec.n_syllables && within < spec.syllable_s) {
        envelope = std::sin(std::numbers::pi * within / spec.syllable_s);
        f0 *= 1.0 + spec.f0_excursion * accents[syl] *
                        std::sin(std::numbers::pi * within / spec.syllable_s);
      }
    }
    phase += 2.0 * std::numbers::pi * f0 / sample_rate;
    double voiced = 0.0;
    for (int k = 1; k <= max_harmonic && k * f0 < sample_rate / 2.0; ++k) {
      voiced += std::sin(k * phase) / std::pow(k, spec.rolloff);
    }
    out[t] = spec.amplitude * envelope * voiced + spec.noise * gauss(rng);
  }
  return Waveform(std::move(out), sample_rate);
}

UtteranceSpec EmotionalVariant(const UtteranceSpec& neutral) {
  UtteranceSpec e = neutral;
  e.f0_hz = neutral.f0_hz * 1.45;
  e.f0_declination = 0.05;
  e.f0_excursion = neutral.f0_excursion * 4.0;
  e.amplitude = std::min(0.28, neutral.amplitude * 2.0);
  e.rolloff = neutral.rolloff * 0.7;
  e.syllable_s = neutral.syllable_s * 0.85;
  e.gap_s = neutral.gap_s * 0.7;
  return e;
}

std::vector<CorpusFile> WriteCorpus(const fs::path& root, int n_base, std::uint64_t seed,
                                    const std::string& emotion, int sample_rate) {
  if (n_base < 1) throw Error(ErrorCode::kInvalidParams, "n_base must be >= 1");
  constexpr int kSpeakers = 3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CorpusFile> files;
  for (int u = 0; u < n_base; ++u) {
    const int speaker = u % kSpeakers;
    UtteranceSpec base;
    base.f0_hz = 100.0 + 25.0 * speaker + 10.0 * unit(rng);
    base.amplitude = 0.12 + 0.06 * unit(rng);
    base.n_syllables = 4 + static_cast<int>(4 * unit(rng));
    base.syllable_s = 0.15 + 0.06 * unit(rng);
    const std::uint64_t wave_seed = seed * 1000003ULL + static_cast<std::uint64_t>(u);

    const std::string spk = "spk" + std::to_string(speaker + 1);
    char num[16];
    std::snprintf(num, sizeof(num), "%03d", u);
    for (bool emotional : {false, true}) {
      const std::string label = emotional ? emotion : "neutral";
      const fs::path dir = root / spk / label;
      fs::create_directories(dir);
      CorpusFile f;
      f.utt_id = spk + "_" + label + "_" + num;
      f.path = dir / (f.utt_id + ".wav");
      f.emotional = emotional;
      const UtteranceSpec spec = emotional ? EmotionalVariant(base) : base;
      SaveWav(Synthesize(spec, sample_rate, wave_seed), f.path);
      files.push_back(std::move(f));
    }
  }
  return files;
}

}  // namespace emoint::synth
