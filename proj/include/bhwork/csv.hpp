#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bhwork/fock.hpp"

namespace bhwork {

/// Shortest round-trip decimal form of a double (17 significant digits), so
/// repeated runs produce byte-identical bodies and readers recover the exact
/// value.
std::string format_full(double value);

/// Occupation vector as a single CSV-safe field, e.g. "50|50".
std::string occupations_label(const FockState& occupations);

/// Line-oriented CSV accumulator; the body is a plain string so callers can
/// compare outputs byte for byte.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::string& header) { body_ = header + "\n"; }

  void raw_row(const std::string& row) { body_ += row + "\n"; }

  template <typename... Fields>
  void row(const Fields&... fields) {
    std::string line;
    append_fields(line, fields...);
    body_ += line + "\n";
  }

  const std::string& body() const { return body_; }

 private:
  static void append_one(std::string& line, double v) { line += format_full(v); }
  static void append_one(std::string& line, int v) { line += std::to_string(v); }
  static void append_one(std::string& line, long v) { line += std::to_string(v); }
  static void append_one(std::string& line, long long v) { line += std::to_string(v); }
  static void append_one(std::string& line, std::size_t v) { line += std::to_string(v); }
  static void append_one(std::string& line, const std::string& v) { line += v; }
  static void append_one(std::string& line, const char* v) { line += v; }

  template <typename First, typename... Rest>
  static void append_fields(std::string& line, const First& first, const Rest&... rest) {
    append_one(line, first);
    if constexpr (sizeof...(rest) > 0) {
      line += ',';
      append_fields(line, rest...);
    }
  }

  std::string body_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a hash of a string, used to fingerprint configurations in sidecars.
std::uint64_t fingerprint(const std::string& text);

}  // namespace bhwork
