#include "gclab/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gclab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i].kind == CsvCell::Kind::Number)
        out << format_double(row[i].number);
      else
        out << row[i].text;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["subcommand"] = manifest.subcommand;
  j["config"] = manifest.config_text;
  j["master_seed"] = manifest.master_seed;
  j["version"] = manifest.version;
  j["duration_seconds"] = manifest.duration_seconds;
  nlohmann::ordered_json files;
  for (const auto& [name, checksum] : manifest.file_checksums) files[name] = checksum;
  j["files"] = files;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

Complex parse_complex(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("complex: empty string");
  // Forms: "a", "bi", "a+bi", "a-bi". Whitespace is not accepted.
  std::size_t pos = 0;
  auto parse_number = [&](bool allow_empty_one) -> double {
    const std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    std::size_t digits = 0;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == 'e' || text[pos] == 'E' ||
            ((text[pos] == '+' || text[pos] == '-') &&
             (text[pos - 1] == 'e' || text[pos - 1] == 'E')))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) {
      if (allow_empty_one && pos > start)  // bare sign before 'i'
        return text[start] == '-' ? -1.0 : 1.0;
      if (allow_empty_one && pos == start) return 1.0;
      throw std::invalid_argument("complex: malformed number in '" + text + "'");
    }
    std::size_t used = 0;
    const double v = std::stod(text.substr(start, pos - start), &used);
    if (used != pos - start)
      throw std::invalid_argument("complex: malformed number in '" + text + "'");
    return v;
  };

  const double first = parse_number(false);
  if (pos == text.size()) return Complex(first, 0.0);
  if (text[pos] == 'i') {
    ++pos;
    if (pos != text.size()) throw std::invalid_argument("complex: trailing characters in '" + text + "'");
    return Complex(0.0, first);
  }
  if (text[pos] != '+' && text[pos] != '-')
    throw std::invalid_argument("complex: expected sign before imaginary part in '" + text + "'");
  const double second = parse_number(true);
  if (pos == text.size() || text[pos] != 'i')
    throw std::invalid_argument("complex: expected 'i' suffix in '" + text + "'");
  ++pos;
  if (pos != text.size())
    throw std::invalid_argument("complex: trailing characters in '" + text + "'");
  return Complex(first, second);
}

std::string format_complex(Complex z) {
  std::string out = format_double(z.real());
  if (z.imag() >= 0.0 || std::isnan(z.imag())) out += "+";
  out += format_double(z.imag());
  out += "i";
  return out;
}

std::vector<std::filesystem::path> write_spectrum_outputs(
    const std::filesystem::path& dir, const SpectrumResult& result) {
  std::vector<std::filesystem::path> files;
  {
    std::vector<std::vector<CsvCell>> rows;
    for (Index i = 0; i < result.density_x.size(); ++i)
      rows.push_back({result.density_x[i], result.density_f[i]});
    const auto path = dir / "density.csv";
    write_csv(path, {"x", "f_theory"}, rows);
    files.push_back(path);
  }
  {
    std::vector<std::vector<CsvCell>> rows;
    const Histogram& h = result.pooled_histogram;
    for (Index b = 0; b < h.bins(); ++b)
      rows.push_back({h.edges[b], h.edges[b + 1], h.mass[b]});
    const auto path = dir / "histogram.csv";
    write_csv(path, {"bin_left", "bin_right", "mass"}, rows);
    files.push_back(path);
  }
  {
    nlohmann::ordered_json j;
    j["alignments"] = result.alignments;
    j["tv_distances"] = result.tv_distances;
    j["mean_alignment"] = result.mean_alignment;
    j["mean_tv"] = result.mean_tv;
    j["master_seed"] = result.master_seed;
    const auto path = dir / "report.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    files.push_back(path);
  }
  return files;
}

std::vector<std::filesystem::path> write_alignment_outputs(
    const std::filesystem::path& dir, const SweepResult& result) {
  std::vector<std::vector<CsvCell>> rows;
  for (const auto& r : result.rows)
    rows.push_back({r.grid_value, r.strategy, r.mean, r.stddev,
                    static_cast<double>(r.trials)});
  const auto path = dir / "alignment_sweep.csv";
  write_csv(path, {"eta", "strategy", "mean_alignment", "std_alignment", "trials"}, rows);
  return {path};
}

std::vector<std::filesystem::path> write_gram_outputs(
    const std::filesystem::path& dir, const SweepResult& result) {
  std::vector<std::vector<CsvCell>> rows;
  for (const auto& r : result.rows)
    rows.push_back({r.grid_value, r.mean, r.stddev, static_cast<double>(r.trials)});
  const auto path = dir / "gram_convergence.csv";
  write_csv(path, {"d", "mean_error", "std_error", "trials"}, rows);
  return {path};
}

std::vector<std::filesystem::path> write_noise_outputs(
    const std::filesystem::path& dir, const SweepResult& result) {
  std::vector<std::vector<CsvCell>> rows;
  for (const auto& r : result.rows)
    rows.push_back({r.grid_value, r.second_value, r.strategy, r.mean, r.stddev,
                    static_cast<double>(r.trials)});
  const auto path = dir / "noise_sweep.csv";
  write_csv(path, {"grid_value", "beta_or_alpha", "model", "mean_accuracy",
                   "std_accuracy", "trials"}, rows);
  return {path};
}

}  // namespace gclab
