// Writes the synthetic neutral/emotional mini-corpus used by the examples
// and acceptance tests.

#include <iostream>

#include <CLI11.hpp>

#include "emoint/error.h"
#include "synth_corpus.h"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic neutral/emotional speech corpus"};
  std::string out;
  int n_base = 15;
  std::uint64_t seed = 7;
  std::string emotion = "angry";
  app.add_option("--out", out, "Corpus root directory")->required();
  app.add_option("--n-base", n_base, "Neutral utterances (each gets an emotional twin)");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--emotion", emotion, "Emotion directory name for the variants");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto files = emoint::synth::WriteCorpus(out, n_base, seed, emotion);
    std::cout << "wrote " << files.size() << " files under " << out << "\n";
  } catch (const emoint::Error& e) {
    std::cerr << e.what() << "\n";
    return emoint::IsIoError(e.code()) ? 2 : 1;
  }
  return 0;
}
