#ifndef EMOINT_CSV_H_
#define EMOINT_CSV_H_

// Minimal delimited-text I/O for the toolkit's own files (no quoting; ids
// and paths must not contain the delimiter) plus feature-table helpers.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emoint/features.h"

namespace emoint {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Blank lines are skipped; every row must have header.size() fields.
// Throws kIoError or kParseError (with 1-based line number).
CsvTable ReadCsv(const std::filesystem::path& path, char delimiter = ',');

std::vector<std::string> SplitLine(std::string_view line, char delimiter);

// Throws kParseError naming file and line.
double ParseDouble(const std::string& text, const std::filesystem::path& path,
                   std::size_t line);

// Shortest representation that parses back to the same double.
std::string FormatDouble(double value);

// Header `id,f000,...,f383`; one utterance per row.
void WriteFeatureCsv(const std::vector<FeatureVector>& features,
                     const std::filesystem::path& path);
std::vector<FeatureVector> ReadFeatureCsv(const std::filesystem::path& path);

// Writes `contents` or throws kIoError.
void WriteTextFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace emoint

#endif  // EMOINT_CSV_H_
