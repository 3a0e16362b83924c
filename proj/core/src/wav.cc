#include <cstdint>
#include <fstream>
#include <string>
#include <vector>
#include <algorithm>
#include <cmath>

#include "emoint/error.h"
#include "emoint/signal.h"

namespace emoint {
namespace {

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace

Waveform LoadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const auto bad = [&](const std::string& why) {
    return Error(ErrorCode::kUnsupportedFormat, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF" ||
      std::string(bytes.begin() + 8, bytes.begin() + 12) != "WAVE") {
    throw bad("not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  int sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(bytes.begin() + pos, bytes.begin() + pos + 4);
    const std::size_t size = ReadU32(&bytes[pos + 4]);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size() && id != "data") throw bad("truncated chunk " + id);
    if (id == "fmt ") {
      if (size < 16) throw bad("short fmt chunk");
      const int format = ReadU16(&bytes[body]);
      const int channels = ReadU16(&bytes[body + 2]);
      sample_rate = static_cast<int>(ReadU32(&bytes[body + 4]));
      const int bits = ReadU16(&bytes[body + 14]);
      if (format != 1) throw bad("compressed or non-PCM codec " + std::to_string(format));
      if (channels != 1) throw bad(std::to_string(channels) + " channels; only mono is accepted");
      if (bits != 16) throw bad(std::to_string(bits) + "-bit samples; only 16-bit is accepted");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw bad("data chunk precedes fmt chunk");
      const std::size_t avail = std::min(size, bytes.size() - body);
      std::vector<double> samples(avail / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(ReadU16(&bytes[body + 2 * i]));
        samples[i] = v / 32768.0;
      }
      return Waveform(std::move(samples), sample_rate);
    }
    pos = body + size + (size & 1);
  }
  throw bad("no data chunk");
}

void SaveWav(const Waveform& wave, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(wave.size());
  std::vector<unsigned char> out;
  out.reserve(44 + 2 * n);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(wave.sample_rate()));
  PutU32(out, static_cast<std::uint32_t>(wave.sample_rate()) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(out, 2 * n);
  for (double s : wave.samples()) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace emoint
