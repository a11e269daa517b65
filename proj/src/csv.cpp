#include "bhwork/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bhwork {

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string occupations_label(const FockState& occupations) {
  std::string s;
  for (std::size_t j = 0; j < occupations.size(); ++j) {
    if (j) s += '|';
    s += std::to_string(occupations[j]);
  }
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::uint64_t fingerprint(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace bhwork
