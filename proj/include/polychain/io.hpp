#ifndef POLYCHAIN_IO_HPP
#define POLYCHAIN_IO_HPP

// Text formats: flat key = value files, numeric CSV, and round-trip float
// formatting.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Dense>

namespace polychain {

/// Malformed input, as opposed to a failure while computing.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

/// Numbers separated by commas and/or whitespace.
inline std::vector<double> parse_number_list(std::string_view s) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(parse_double(token));
    token.clear();
  };
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

/// `key = value` lines; `#` starts a comment; keys are unique.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in) {
    KeyValueFile kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view v = line;
      if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
      v = trim(v);
      if (v.empty()) continue;
      const auto eq = v.find('=');
      if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
      const std::string key(trim(v.substr(0, eq)));
      if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
      if (!kv.values_.emplace(key, std::string(trim(v.substr(eq + 1)))).second) {
        throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      }
    }
    return kv;
  }

  static KeyValueFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ParseError("missing key '" + key + "'");
    return it->second;
  }

  double get_double(const std::string& key) const { return parse_double(get(key)); }
  std::vector<double> get_list(const std::string& key) const { return parse_number_list(get(key)); }

  bool get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError("not a boolean: '" + v + "'");
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Rows of comma-separated cells; blank lines and `#` lines are skipped.
inline std::vector<std::vector<std::string>> read_csv_cells(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    std::vector<std::string> cells;
    std::string_view rest = v;
    for (;;) {
      const auto comma = rest.find(',');
      cells.emplace_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

/// Numeric CSV as a matrix; every row must have the same number of cells.
inline Eigen::MatrixXd read_csv_matrix(std::istream& in) {
  const auto rows = read_csv_cells(in);
  if (rows.empty()) throw ParseError("empty matrix");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ParseError("row " + std::to_string(i + 1) + " has the wrong number of cells");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(rows[i][j]);
    }
  }
  return m;
}

inline Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_csv_matrix(in);
}

}  // namespace polychain

#endif  // POLYCHAIN_IO_HPP
