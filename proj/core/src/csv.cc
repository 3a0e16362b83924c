#include "emoint/csv.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "emoint/error.h"

namespace emoint {

std::vector<std::string> SplitLine(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(delimiter, start);
    fields.emplace_back(line.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

CsvTable ReadCsv(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitLine(line, delimiter);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) {
    throw Error(ErrorCode::kParseError, path.string() + ": empty file");
  }
  return table;
}

double ParseDouble(const std::string& text, const std::filesystem::path& path,
                   std::size_t line) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::kParseError, path.string() + ":" + std::to_string(line) +
                                            ": bad number '" + text + "'");
  }
  return value;
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void WriteFeatureCsv(const std::vector<FeatureVector>& features,
                     const std::filesystem::path& path) {
  std::string out = "id";
  char name[8];
  for (int i = 0; i < kFeatureDim; ++i) {
    std::snprintf(name, sizeof(name), ",f%03d", i);
    out += name;
  }
  out += '\n';
  for (const auto& fv : features) {
    out += fv.id;
    for (double v : fv.values) {
      out += ',';
      out += FormatDouble(v);
    }
    out += '\n';
  }
  WriteTextFile(path, out);
}

std::vector<FeatureVector> ReadFeatureCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path);
  if (table.header.size() != static_cast<std::size_t>(kFeatureDim) + 1 ||
      table.header[0] != "id") {
    throw Error(ErrorCode::kParseError,
                path.string() + ": expected header id,f000..f383");
  }
  std::vector<FeatureVector> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    FeatureVector fv;
    fv.id = table.rows[r][0];
    fv.values.reserve(kFeatureDim);
    for (int i = 1; i <= kFeatureDim; ++i) {
      fv.values.push_back(ParseDouble(table.rows[r][i], path, r + 2));
    }
    out.push_back(std::move(fv));
  }
  return out;
}

void WriteTextFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace emoint
