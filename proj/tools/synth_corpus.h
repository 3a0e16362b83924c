#ifndef EMOINT_TOOLS_SYNTH_CORPUS_H_
#define EMOINT_TOOLS_SYNTH_CORPUS_H_

// Synthetic speech-like corpus: harmonic "syllables" on an F0 contour with
// a noise floor. Emotional variants of each neutral utterance raise and
// widen the pitch, boost energy and brightness, and speed up delivery.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "emoint/signal.h"

namespace emoint::synth {

struct UtteranceSpec {
  double f0_hz = 120.0;           // contour centre
  double f0_declination = 0.15;   // relative fall over the utterance
  double f0_excursion = 0.05;     // relative per-syllable pitch accent
  double amplitude = 0.15;
  double rolloff = 1.6;           // harmonic k has amplitude 1 / k^rolloff
  double syllable_s = 0.18;
  double gap_s = 0.06;
  int n_syllables = 6;
  double noise = 0.002;
};

Waveform Synthesize(const UtteranceSpec& spec, int sample_rate, std::uint64_t seed);

// Emotional rendition of a neutral specification.
UtteranceSpec EmotionalVariant(const UtteranceSpec& neutral);

struct CorpusFile {
  std::string utt_id;
  std::filesystem::path path;
  bool emotional = false;
};

// Writes root/<speaker>/{neutral,<emotion>}/<id>.wav for n_base neutral
// utterances and their emotional variants (2 * n_base files).
std::vector<CorpusFile> WriteCorpus(const std::filesystem::path& root, int n_base,
                                    std::uint64_t seed,
                                    const std::string& emotion = "angry",
                                    int sample_rate = 16000);

}  // namespace emoint::synth

#endif  // EMOINT_TOOLS_SYNTH_CORPUS_H_
