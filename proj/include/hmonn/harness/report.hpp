#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hmonn/error.hpp"

namespace hmonn::harness {

inline constexpr const char* kToolVersion = "1.0.0";

// Shortest decimal form that parses back to the same double.
inline std::string exact_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

inline std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Fixed notation for table cells, switching to scientific below 1e-4.
inline std::string p_value_text(double p) {
  if (p >= 1e-4 || p == 0.0) return fixed(p, 4);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", p);
  return buf;
}

// Ordered key/value pairs written as `# key: value` header lines.
class Metadata {
 public:
  Metadata& add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Metadata& add(std::string key, double value) { return add(std::move(key), exact_number(value)); }
  Metadata& add(std::string key, std::size_t value) { return add(std::move(key), std::to_string(value)); }
  Metadata& add(std::string key, int value) { return add(std::move(key), std::to_string(value)); }
  Metadata& add(std::string key, unsigned long long value) { return add(std::move(key), std::to_string(value)); }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << "# " << k << ": " << v << '\n';
  }

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + '\n';
}

// Left-aligned first column, right-aligned others, two spaces between columns.
inline std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      const std::string pad(width[i] - r[i].size(), ' ');
      line += i == 0 ? r[i] + pad : pad + r[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace hmonn::harness
