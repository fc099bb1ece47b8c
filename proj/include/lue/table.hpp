#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lue/common.hpp"

namespace lue {

/// Numeric result rows plus named columns and run metadata. Serialization is
/// locale-independent and byte-stable for a fixed (config, seed, version).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }

  bool all_finite() const {
    for (const auto& r : rows)
      for (double v : r)
        if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Shortest 17-significant-digit decimal form; round-trips exactly.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

inline void write_csv(const ResultTable& t, std::ostream& os) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << csv_quote(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << "\n";
  }
}

inline void write_json(const ResultTable& t, std::ostream& os) {
  os << "{\n  \"metadata\": {";
  for (std::size_t i = 0; i < t.metadata.size(); ++i) {
    os << (i ? ", " : "") << "\"" << t.metadata[i].first << "\": \"" << t.metadata[i].second
       << "\"";
  }
  os << "},\n  \"columns\": [";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? ", " : "") << "\"" << t.columns[i] << "\"";
  os << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n    " : "\n    ") << "[";
    for (std::size_t i = 0; i < t.rows[r].size(); ++i)
      os << (i ? ", " : "") << format_double(t.rows[r][i]);
    os << "]";
  }
  os << "\n  ]\n}\n";
}

/// Reads back what write_csv produced ('#' metadata lines, header, rows).
inline ResultTable read_csv(std::istream& is) {
  ResultTable t;
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(2, eq - 2);
        t.meta(key, line.substr(eq + 1));
      }
      continue;
    }
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"')
          quoted = false;
        else
          cur += c;
      } else if (c == '"')
        quoted = true;
      else if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else
        cur += c;
    }
    cells.push_back(cur);
    if (!header_done) {
      t.columns = cells;
      header_done = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) {
      double v = 0.0;
      auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc()) throw std::invalid_argument("read_csv: bad numeric cell: " + c);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace lue
