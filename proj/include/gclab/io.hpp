#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gclab/experiments.hpp"
#include "gclab/types.hpp"

namespace gclab {

/// Shortest round-trip-exact decimal form of a double (17 significant digits).
std::string format_double(double v);

struct CsvCell {
  enum class Kind { Number, Text } kind;
  double number = 0.0;
  std::string text;
  CsvCell(double v) : kind(Kind::Number), number(v) {}
  CsvCell(std::string s) : kind(Kind::Text), text(std::move(s)) {}
  CsvCell(const char* s) : kind(Kind::Text), text(s) {}
};

/// Writes a header row plus data rows; numbers are serialized with
/// format_double so rereads are bit-exact.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows);

/// FNV-1a 64-bit digest of a file's bytes, as "fnv1a:<hex>".
std::string file_checksum(const std::filesystem::path& path);

struct RunManifest {
  std::string subcommand;
  std::string config_text;  // resolved key=value snapshot
  std::uint64_t master_seed = 0;
  std::string version;
  double duration_seconds = 0.0;
  std::map<std::string, std::string> file_checksums;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

/// Strict "a+bi" / "a-bi" / "a" parser (also accepts "bi").
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

// Result writers; each returns the list of files written.
std::vector<std::filesystem::path> write_spectrum_outputs(
    const std::filesystem::path& dir, const SpectrumResult& result);
std::vector<std::filesystem::path> write_alignment_outputs(
    const std::filesystem::path& dir, const SweepResult& result);
std::vector<std::filesystem::path> write_gram_outputs(
    const std::filesystem::path& dir, const SweepResult& result);
std::vector<std::filesystem::path> write_noise_outputs(
    const std::filesystem::path& dir, const SweepResult& result);

}  // namespace gclab
