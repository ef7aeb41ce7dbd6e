#pragma once

/*
 Dataset ingestion and serialization.

 CSV + sidecar schema:
   data:    comma separated, first non-comment row is the header, `?` is Missing.
            Leading lines starting with `#` are comments; `# provenance: <text>`
            sets the dataset provenance.
   sidecar: one line per column, `name,kind` with kind `real` or
            `nominal:v1|v2|...`. Blank lines and `#` comments are ignored.

 ARFF: `@attribute name {a,b,...}` declares a nominal column, `numeric`,
 `real` and `integer` declare real columns. Rows follow `@data`; `?` is
 Missing; `%` starts a comment. Sparse rows, string and date attributes are
 rejected.
*/

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hmonn/dataset.hpp"
#include "hmonn/error.hpp"

namespace hmonn {

enum class DataFormat { CsvWithSchema, Arff };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return std::string(s);
}

// Splits on `sep` outside single or double quotes. Fields are trimmed and unquoted.
inline std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  for (char ch : line) {
    if (quote) {
      cur.push_back(ch);
      if (ch == quote) quote = 0;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      cur.push_back(ch);
    } else if (ch == sep) {
      out.push_back(unquote(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quote) throw ParseError("unterminated quote in line: " + std::string(line));
  out.push_back(unquote(cur));
  return out;
}

inline double parse_real(std::string_view s, std::string_view column) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("cannot parse '" + std::string(s) + "' as a real value in column '" +
                     std::string(column) + "'");
  return v;
}

inline std::int32_t parse_nominal(const NominalKind& kind, std::string_view s, std::string_view column) {
  for (std::size_t i = 0; i < kind.values.size(); ++i)
    if (kind.values[i] == s) return static_cast<std::int32_t>(i);
  throw ParseError("value '" + std::string(s) + "' is not declared for nominal column '" +
                   std::string(column) + "'");
}

inline Cell parse_cell(const Column& col, std::string_view raw) {
  if (raw == "?") return Missing{};
  if (const auto* n = std::get_if<NominalKind>(&col.kind)) return parse_nominal(*n, raw, col.name);
  return parse_real(raw, col.name);
}

// Builds a Dataset from flat columns + rows, moving the named columns to the outputs.
inline Dataset assemble(const std::vector<Column>& columns, const std::vector<std::vector<Cell>>& rows,
                        std::span<const std::string> output_names, std::string provenance) {
  if (output_names.empty()) throw SchemaError("at least one output column must be named");
  std::vector<std::size_t> out_pos;
  for (const auto& name : output_names) {
    auto it = std::find_if(columns.begin(), columns.end(), [&](const Column& c) { return c.name == name; });
    if (it == columns.end()) throw SchemaError("output column '" + name + "' does not exist");
    if (!it->nominal()) throw SchemaError("output column '" + name + "' is real-valued");
    auto pos = static_cast<std::size_t>(it - columns.begin());
    if (std::find(out_pos.begin(), out_pos.end(), pos) != out_pos.end())
      throw SchemaError("output column '" + name + "' named twice");
    out_pos.push_back(pos);
  }
  std::vector<Column> in_cols, out_cols;
  std::vector<std::size_t> in_pos;
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (std::find(out_pos.begin(), out_pos.end(), i) == out_pos.end()) {
      in_cols.push_back(columns[i]);
      in_pos.push_back(i);
    }
  for (auto p : out_pos) out_cols.push_back(columns[p]);
  Schema schema(std::move(in_cols), std::move(out_cols));

  std::vector<Instance> instances;
  instances.reserve(rows.size());
  for (const auto& row : rows) {
    Instance inst;
    inst.inputs.reserve(in_pos.size());
    for (auto p : in_pos) inst.inputs.push_back(row[p]);
    for (auto p : out_pos) {
      const Cell& c = row[p];
      inst.outputs.push_back(is_missing(c) ? kMissingLabel : std::get<std::int32_t>(c));
    }
    instances.push_back(std::move(inst));
  }
  return Dataset(std::move(schema), std::move(instances), std::move(provenance));
}

inline bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  return true;
}

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Parses a sidecar schema into an ordered column list (name -> kind).
inline std::vector<Column> parse_schema_sidecar(std::istream& in) {
  std::vector<Column> cols;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto comma = t.find(',');
    if (comma == std::string_view::npos)
      throw ParseError("schema line " + std::to_string(lineno) + ": expected 'name,kind'");
    std::string name(detail::trim(t.substr(0, comma)));
    auto kind = detail::trim(t.substr(comma + 1));
    if (name.empty()) throw ParseError("schema line " + std::to_string(lineno) + ": empty column name");
    if (kind == "real") {
      cols.push_back({name, RealKind{}});
    } else if (kind.substr(0, 8) == "nominal:") {
      std::vector<std::string> values;
      for (auto& v : detail::split_fields(kind.substr(8), '|')) values.push_back(v);
      Column c{name, NominalKind{std::move(values)}};
      validate_kind(c);
      cols.push_back(std::move(c));
    } else {
      throw ParseError("schema line " + std::to_string(lineno) + ": unknown kind '" + std::string(kind) + "'");
    }
  }
  return cols;
}

inline Dataset load_csv(std::istream& data, std::istream& sidecar, std::span<const std::string> output_names,
                        std::string provenance = {}) {
  auto declared = parse_schema_sidecar(sidecar);
  std::unordered_map<std::string, const Column*> by_name;
  for (const auto& c : declared)
    if (!by_name.emplace(c.name, &c).second) throw SchemaError("schema declares '" + c.name + "' twice");

  std::string line;
  std::vector<Column> columns;
  bool have_header = false;
  std::vector<std::vector<Cell>> rows;
  std::size_t lineno = 0;
  while (std::getline(data, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = detail::trim(line);
    if (t.empty()) continue;
    if (!have_header && t.front() == '#') {
      constexpr std::string_view tag = "# provenance:";
      if (t.substr(0, tag.size()) == tag) provenance = std::string(detail::trim(t.substr(tag.size())));
      continue;
    }
    auto fields = detail::split_fields(t, ',');
    if (!have_header) {
      for (const auto& name : fields) {
        auto it = by_name.find(name);
        if (it == by_name.end()) throw SchemaError("column '" + name + "' missing from schema sidecar");
        columns.push_back(*it->second);
      }
      if (columns.size() != declared.size())
        throw SchemaError("schema sidecar declares columns absent from the CSV header");
      have_header = true;
      continue;
    }
    if (fields.size() != columns.size())
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(columns.size()) +
                       " fields, found " + std::to_string(fields.size()));
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(detail::parse_cell(columns[i], fields[i]));
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("CSV stream has no header row");
  return detail::assemble(columns, rows, output_names, std::move(provenance));
}

inline Dataset load_arff(std::istream& in, std::span<const std::string> output_names, std::string provenance = {}) {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  bool in_data = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '%') continue;
    if (!in_data) {
      if (detail::starts_with_ci(t, "@relation")) continue;
      if (detail::starts_with_ci(t, "@data")) {
        if (columns.empty()) throw ParseError("ARFF @data before any @attribute");
        in_data = true;
        continue;
      }
      if (!detail::starts_with_ci(t, "@attribute"))
        throw ParseError("ARFF line " + std::to_string(lineno) + ": unexpected header line");
      auto rest = detail::trim(t.substr(10));
      std::string name;
      if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
        auto close = rest.find(rest.front(), 1);
        if (close == std::string_view::npos) throw ParseError("ARFF line " + std::to_string(lineno) + ": bad name");
        name = std::string(rest.substr(1, close - 1));
        rest = detail::trim(rest.substr(close + 1));
      } else {
        auto sp = rest.find_first_of(" \t{");
        if (sp == std::string_view::npos) throw ParseError("ARFF line " + std::to_string(lineno) + ": missing type");
        name = std::string(rest.substr(0, sp));
        rest = detail::trim(rest.substr(sp));
      }
      if (!rest.empty() && rest.front() == '{') {
        auto close = rest.rfind('}');
        if (close == std::string_view::npos) throw ParseError("ARFF line " + std::to_string(lineno) + ": unclosed {");
        Column c{name, NominalKind{detail::split_fields(rest.substr(1, close - 1), ',')}};
        validate_kind(c);
        columns.push_back(std::move(c));
      } else if (detail::starts_with_ci(rest, "numeric") || detail::starts_with_ci(rest, "real") ||
                 detail::starts_with_ci(rest, "integer")) {
        columns.push_back({name, RealKind{}});
      } else {
        throw ParseError("ARFF attribute '" + name + "' has unsupported type '" + std::string(rest) + "'");
      }
      continue;
    }
    if (t.front() == '{') throw ParseError("sparse ARFF rows are not supported");
    auto fields = detail::split_fields(t, ',');
    if (fields.size() != columns.size())
      throw ParseError("ARFF line " + std::to_string(lineno) + ": expected " + std::to_string(columns.size()) +
                       " values, found " + std::to_string(fields.size()));
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(detail::parse_cell(columns[i], fields[i]));
    rows.push_back(std::move(row));
  }
  if (!in_data) throw ParseError("ARFF stream has no @data section");
  return detail::assemble(columns, rows, output_names, std::move(provenance));
}

// Format from the file extension: `.arff` is ARFF, anything else CSV.
inline DataFormat format_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".arff" ? DataFormat::Arff : DataFormat::CsvWithSchema;
}

inline std::filesystem::path default_sidecar(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".schema");
  return p;
}

// Loads a file. CSV files read their schema from `schema_path`, or from the
// sibling `<stem>.schema` when none is given. Provenance defaults to the path.
inline Dataset load_dataset(const std::filesystem::path& path, std::span<const std::string> output_names,
                            const std::filesystem::path& schema_path = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Dataset d;
  if (format_for(path) == DataFormat::Arff) {
    d = load_arff(in, output_names);
  } else {
    auto sp = schema_path.empty() ? default_sidecar(path) : schema_path;
    std::ifstream sc(sp);
    if (!sc) throw IoError("cannot open schema sidecar '" + sp.string() + "'");
    d = load_csv(in, sc, output_names);
  }
  if (d.provenance().empty()) d.set_provenance(path.string());
  return d;
}

// Column names of a file in declaration order, used to default the output column.
inline std::vector<std::string> column_names(const std::filesystem::path& path) {
  std::vector<std::string> names;
  if (format_for(path) == DataFormat::Arff) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
      auto t = detail::trim(line);
      if (detail::starts_with_ci(t, "@data")) break;
      if (!detail::starts_with_ci(t, "@attribute")) continue;
      auto rest = detail::trim(t.substr(10));
      if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
        auto close = rest.find(rest.front(), 1);
        names.emplace_back(rest.substr(1, close - 1));
      } else {
        names.emplace_back(rest.substr(0, rest.find_first_of(" \t{")));
      }
    }
    return names;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    return detail::split_fields(t, ',');
  }
  throw ParseError("'" + path.string() + "' has no header row");
}

namespace detail {
inline void check_writable_name(const std::string& s) {
  if (s.empty() || s.find_first_of(",|\n\r'\"") != std::string::npos || s == "?" || s.front() == '#')
    throw SchemaError("name '" + s + "' cannot be written to CSV/schema files");
}
}  // namespace detail

// Sidecar for `write_csv`: inputs first, then outputs.
inline void write_schema(std::ostream& out, const Schema& schema) {
  auto emit = [&](const Column& c) {
    detail::check_writable_name(c.name);
    out << c.name << ',';
    if (const auto* n = std::get_if<NominalKind>(&c.kind)) {
      out << "nominal:";
      for (std::size_t i = 0; i < n->values.size(); ++i) {
        detail::check_writable_name(n->values[i]);
        out << (i ? "|" : "") << n->values[i];
      }
    } else {
      out << "real";
    }
    out << '\n';
  };
  for (const auto& c : schema.inputs()) emit(c);
  for (const auto& c : schema.outputs()) emit(c);
}

inline void write_csv(std::ostream& out, const Dataset& d) {
  if (!d.provenance().empty()) {
    if (d.provenance().find('\n') != std::string::npos) throw SchemaError("provenance must be a single line");
    out << "# provenance: " << d.provenance() << '\n';
  }
  const auto& s = d.schema();
  bool first = true;
  for (const auto& c : s.inputs()) out << (std::exchange(first, false) ? "" : ",") << c.name;
  for (const auto& c : s.outputs()) out << ',' << c.name;
  out << '\n';
  for (const auto& inst : d.instances()) {
    for (std::size_t i = 0; i < inst.inputs.size(); ++i) {
      if (i) out << ',';
      const Cell& cell = inst.inputs[i];
      if (is_missing(cell)) {
        out << '?';
      } else if (const auto* n = std::get_if<std::int32_t>(&cell)) {
        out << std::get<NominalKind>(s.inputs()[i].kind).values[static_cast<std::size_t>(*n)];
      } else {
        out << detail::format_real(std::get<double>(cell));
      }
    }
    for (std::size_t j = 0; j < inst.outputs.size(); ++j) {
      out << ',';
      auto v = inst.outputs[j];
      if (v == kMissingLabel)
        out << '?';
      else
        out << std::get<NominalKind>(s.outputs()[j].kind).values[static_cast<std::size_t>(v)];
    }
    out << '\n';
  }
}

// Writes `<path>` and its sibling `<stem>.schema`.
inline void save_dataset(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream data(path);
  std::ofstream schema(default_sidecar(path));
  if (!data || !schema) throw IoError("cannot write '" + path.string() + "'");
  write_csv(data, d);
  write_schema(schema, d.schema());
}

inline std::vector<std::string> output_names(const Schema& s) {
  std::vector<std::string> names;
  for (const auto& c : s.outputs()) names.push_back(c.name);
  return names;
}

}  // namespace hmonn
