#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/errors.hpp"

namespace ergolab::cli {

/// Scalar or flat array value of the TOML subset used for run configs.
struct TomlValue {
  std::variant<bool, std::int64_t, double, std::string, std::vector<TomlValue>> v;

  bool is_array() const { return std::holds_alternative<std::vector<TomlValue>>(v); }
  const std::vector<TomlValue>& array() const { return std::get<std::vector<TomlValue>>(v); }

  std::string as_string() const {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) return std::to_string(*d);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    throw ConfigError("toml: array where a scalar was expected");
  }
  std::int64_t as_int() const {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw ConfigError("toml: integer expected");
  }
  double as_double() const {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw ConfigError("toml: number expected");
  }
  bool as_bool() const {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    throw ConfigError("toml: boolean expected");
  }
};

using TomlTable = std::map<std::string, TomlValue>;

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline TomlValue parse_scalar(const std::string& raw, int line) {
  std::string t = raw;
  while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
  if (t.empty()) throw ConfigError("toml line " + std::to_string(line) + ": empty value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"')
      throw ConfigError("toml line " + std::to_string(line) + ": unterminated string");
    return TomlValue{t.substr(1, t.size() - 2)};
  }
  if (t == "true") return TomlValue{true};
  if (t == "false") return TomlValue{false};
  bool is_float = t.find_first_of(".eE") != std::string::npos;
  try {
    std::size_t used = 0;
    if (is_float) {
      double d = std::stod(t, &used);
      if (used == t.size()) return TomlValue{d};
    } else {
      std::int64_t i = std::stoll(t, &used, 10);
      if (used == t.size()) return TomlValue{i};
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("toml line " + std::to_string(line) + ": cannot parse value '" + t + "'");
}

}  // namespace detail

/// Parses the TOML subset accepted in run-config files: `key = value` lines,
/// `[section]` headers flattened to "section.key", `#` comments, and values
/// that are strings, integers, floats, booleans, or flat arrays of those.
inline TomlTable parse_toml(const std::string& text) {
  TomlTable out;
  std::string section;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    // strip comment outside strings
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '#' && !in_str) {
        line = line.substr(0, i);
        break;
      }
    }
    std::size_t i = 0;
    detail::skip_ws(line, i);
    if (i >= line.size() || line[i] == '\r') continue;
    if (line[i] == '[') {
      std::size_t close = line.find(']', i);
      if (close == std::string::npos)
        throw ConfigError("toml line " + std::to_string(line_no) + ": unterminated section");
      section = line.substr(i + 1, close - i - 1);
      continue;
    }
    std::size_t eq = line.find('=', i);
    if (eq == std::string::npos)
      throw ConfigError("toml line " + std::to_string(line_no) + ": expected key = value");
    std::string key = line.substr(i, eq - i);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (key.empty()) throw ConfigError("toml line " + std::to_string(line_no) + ": empty key");
    std::size_t vi = eq + 1;
    detail::skip_ws(line, vi);
    std::string vraw = line.substr(vi);
    while (!vraw.empty() && (vraw.back() == '\r' || vraw.back() == ' ' || vraw.back() == '\t'))
      vraw.pop_back();
    TomlValue val;
    if (!vraw.empty() && vraw.front() == '[') {
      if (vraw.back() != ']')
        throw ConfigError("toml line " + std::to_string(line_no) + ": unterminated array");
      std::vector<TomlValue> items;
      std::string body = vraw.substr(1, vraw.size() - 2);
      std::string cur;
      bool str = false;
      for (char ch : body) {
        if (ch == '"') str = !str;
        if (ch == ',' && !str) {
          std::size_t a = 0;
          detail::skip_ws(cur, a);
          if (a < cur.size()) items.push_back(detail::parse_scalar(cur.substr(a), line_no));
          cur.clear();
        } else {
          cur += ch;
        }
      }
      std::size_t a = 0;
      detail::skip_ws(cur, a);
      if (a < cur.size()) items.push_back(detail::parse_scalar(cur.substr(a), line_no));
      val = TomlValue{std::move(items)};
    } else {
      val = detail::parse_scalar(vraw, line_no);
    }
    out[section.empty() ? key : section + "." + key] = std::move(val);
  }
  return out;
}

}  // namespace ergolab::cli
