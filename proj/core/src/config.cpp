#include "railmap/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace railmap::cfg {

namespace {

[[noreturn]] void syntax_error(const std::string& source, int line, const std::string& msg) {
  fail(ErrorCategory::syntax, source + ":" + std::to_string(line) + ": " + msg);
}

struct Parser {
  std::string_view text;
  std::string source;
  std::size_t pos = 0;
  int line = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  char get() {
    const char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }

  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos;
  }

  // whitespace, newlines and comments
  void skip_void() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos;
      } else if (c == '\n') {
        get();
      } else if (c == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  void expect_line_end() {
    skip_inline_ws();
    if (eof()) return;
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos;
    }
    if (eof()) return;
    if (peek() != '\n') syntax_error(source, line, "unexpected trailing characters");
    get();
  }

  static bool is_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }

  std::string parse_key() {
    skip_inline_ws();
    std::size_t start = pos;
    while (!eof() && is_key_char(peek())) ++pos;
    if (pos == start) syntax_error(source, line, "expected a key");
    return std::string(text.substr(start, pos - start));
  }

  std::string parse_string() {
    const int start_line = line;
    get();  // opening quote
    std::string out;
    while (true) {
      if (eof()) syntax_error(source, start_line, "unterminated string");
      char c = get();
      if (c == '"') break;
      if (c == '\n') syntax_error(source, start_line, "newline in string");
      if (c == '\\') {
        if (eof()) syntax_error(source, start_line, "unterminated escape");
        const char e = get();
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: syntax_error(source, line, std::string("unknown escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  Value parse_number() {
    std::size_t start = pos;
    if (peek() == '+' || peek() == '-') ++pos;
    bool is_float = false;
    while (!eof()) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        ++pos;
        if (!eof() && (peek() == '+' || peek() == '-')) ++pos;
      } else {
        break;
      }
    }
    const std::string_view tok = text.substr(start, pos - start);
    if (!is_float) {
      std::int64_t iv = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
      if (ec == std::errc() && p == tok.data() + tok.size()) return Value(iv);
    }
    double dv = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), dv);
    if (ec != std::errc() || p != tok.data() + tok.size())
      syntax_error(source, line, "malformed number '" + std::string(tok) + "'");
    return Value(dv);
  }

  Value parse_value() {
    skip_void();
    if (eof()) syntax_error(source, line, "expected a value");
    const char c = peek();
    if (c == '"') return Value(parse_string());
    if (c == '[') {
      get();
      Array arr;
      while (true) {
        skip_void();
        if (eof()) syntax_error(source, line, "unterminated array");
        if (peek() == ']') {
          get();
          break;
        }
        arr.push_back(parse_value());
        skip_void();
        if (!eof() && peek() == ',') {
          get();
          continue;
        }
        skip_void();
        if (eof() || peek() != ']') syntax_error(source, line, "expected ',' or ']' in array");
        get();
        break;
      }
      return Value(std::move(arr));
    }
    if (text.compare(pos, 4, "true") == 0 && (pos + 4 >= text.size() || !is_key_char(text[pos + 4]))) {
      pos += 4;
      return Value(true);
    }
    if (text.compare(pos, 5, "false") == 0 && (pos + 5 >= text.size() || !is_key_char(text[pos + 5]))) {
      pos += 5;
      return Value(false);
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    syntax_error(source, line, "unrecognized value");
  }
};

void append_scalar(std::string& out, const Value& v);

void append_array(std::string& out, const Array& arr) {
  out += '[';
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i) out += ", ";
    append_scalar(out, arr[i]);
  }
  out += ']';
}

std::string format_double(double d) {
  if (d == std::floor(d) && std::abs(d) < 1e15) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.1f", d);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

void append_scalar(std::string& out, const Value& v) {
  if (v.is_bool()) {
    out += v.as_bool("") ? "true" : "false";
  } else if (v.is_int()) {
    out += std::to_string(v.as_int(""));
  } else if (v.is_number()) {
    out += format_double(v.as_double(""));
  } else if (v.is_string()) {
    out += '"';
    for (char c : v.as_string("")) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
  } else if (v.is_array()) {
    append_array(out, v.as_array(""));
  } else {
    fail(ErrorCategory::config, "cannot serialize nested table as scalar");
  }
}

}  // namespace

bool Table::contains(const std::string& key) const noexcept { return find(key) != nullptr; }

const Value* Table::find(const std::string& key) const noexcept {
  for (const auto& [k, v] : items_)
    if (k == key) return &v;
  return nullptr;
}

const Value& Table::at(const std::string& key) const {
  const Value* v = find(key);
  if (!v) fail(ErrorCategory::config, "missing key '" + key + "'");
  return *v;
}

Value& Table::set(const std::string& key) {
  for (auto& [k, v] : items_)
    if (k == key) return v;
  items_.emplace_back(key, Value{});
  return items_.back().second;
}

#define RAILMAP_CFG_ACCESSOR(type, name, variant_type, kind)                              \
  type Value::name(const std::string& what) const {                                       \
    if (const auto* p = std::get_if<variant_type>(&data_)) return *p;                     \
    fail(ErrorCategory::config, "expected " kind " for '" + what + "'");                  \
  }

RAILMAP_CFG_ACCESSOR(bool, as_bool, bool, "a boolean")
RAILMAP_CFG_ACCESSOR(std::int64_t, as_int, std::int64_t, "an integer")
RAILMAP_CFG_ACCESSOR(const std::string&, as_string, std::string, "a string")
RAILMAP_CFG_ACCESSOR(const Array&, as_array, Array, "an array")
#undef RAILMAP_CFG_ACCESSOR

double Value::as_double(const std::string& what) const {
  if (const auto* d = std::get_if<double>(&data_)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&data_)) return static_cast<double>(*i);
  fail(ErrorCategory::config, "expected a number for '" + what + "'");
}

Array& Value::as_array(const std::string& what) {
  if (auto* a = std::get_if<Array>(&data_)) return *a;
  fail(ErrorCategory::config, "expected an array for '" + what + "'");
}

const Table& Value::as_table(const std::string& what) const {
  if (const auto* t = std::get_if<Table>(&data_)) return *t;
  fail(ErrorCategory::config, "expected a table for '" + what + "'");
}

Table& Value::as_table(const std::string& what) {
  if (auto* t = std::get_if<Table>(&data_)) return *t;
  fail(ErrorCategory::config, "expected a table for '" + what + "'");
}

Table parse(std::string_view text, const std::string& source_name) {
  Parser p{text, source_name};
  Table root;
  Table* current = &root;

  p.skip_void();
  while (!p.eof()) {
    if (p.peek() == '[') {
      p.get();
      const bool array_of_tables = !p.eof() && p.peek() == '[';
      if (array_of_tables) p.get();
      const std::string name = p.parse_key();
      p.skip_inline_ws();
      if (p.eof() || p.peek() != ']') syntax_error(source_name, p.line, "expected ']' after table name");
      p.get();
      if (array_of_tables) {
        if (p.eof() || p.peek() != ']') syntax_error(source_name, p.line, "expected ']]' after table array name");
        p.get();
      }
      p.expect_line_end();
      if (array_of_tables) {
        Value& slot = root.set(name);
        if (!slot.is_array()) slot = Value(Array{});
        Array& arr = slot.as_array(name);
        arr.emplace_back(Table{});
        current = &arr.back().as_table(name);
      } else {
        Value& slot = root.set(name);
        if (!slot.is_table()) slot = Value(Table{});
        current = &slot.as_table(name);
      }
    } else {
      const std::string key = p.parse_key();
      p.skip_inline_ws();
      if (p.eof() || p.peek() != '=') syntax_error(source_name, p.line, "expected '=' after key '" + key + "'");
      p.get();
      Value v = p.parse_value();
      p.expect_line_end();
      if (current->contains(key))
        syntax_error(source_name, p.line, "duplicate key '" + key + "'");
      current->set(key) = std::move(v);
    }
    p.skip_void();
  }
  return root;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string serialize(const Table& root) {
  std::string out;
  // scalars and arrays first, then [tables], then [[table arrays]]
  for (const auto& [k, v] : root.items()) {
    if (v.is_table() || (v.is_array() && !v.as_array(k).empty() && v.as_array(k).front().is_table()))
      continue;
    out += k;
    out += " = ";
    append_scalar(out, v);
    out += '\n';
  }
  for (const auto& [k, v] : root.items()) {
    if (!v.is_table()) continue;
    out += "\n[" + k + "]\n";
    for (const auto& [ik, iv] : v.as_table(k).items()) {
      out += ik;
      out += " = ";
      append_scalar(out, iv);
      out += '\n';
    }
  }
  for (const auto& [k, v] : root.items()) {
    if (!v.is_array()) continue;
    const Array& arr = v.as_array(k);
    if (arr.empty() || !arr.front().is_table()) continue;
    for (const auto& elem : arr) {
      out += "\n[[" + k + "]]\n";
      for (const auto& [ik, iv] : elem.as_table(k).items()) {
        out += ik;
        out += " = ";
        append_scalar(out, iv);
        out += '\n';
      }
    }
  }
  return out;
}

double req_double(const Table& t, const std::string& key, const std::string& where) {
  const Value* v = t.find(key);
  if (!v) fail(ErrorCategory::config, where + ": missing key '" + key + "'");
  return v->as_double(where + "." + key);
}

std::int64_t req_int(const Table& t, const std::string& key, const std::string& where) {
  const Value* v = t.find(key);
  if (!v) fail(ErrorCategory::config, where + ": missing key '" + key + "'");
  return v->as_int(where + "." + key);
}

const std::string& req_string(const Table& t, const std::string& key, const std::string& where) {
  const Value* v = t.find(key);
  if (!v) fail(ErrorCategory::config, where + ": missing key '" + key + "'");
  return v->as_string(where + "." + key);
}

double opt_double(const Table& t, const std::string& key, double fallback, const std::string& where) {
  const Value* v = t.find(key);
  return v ? v->as_double(where + "." + key) : fallback;
}

std::int64_t opt_int(const Table& t, const std::string& key, std::int64_t fallback, const std::string& where) {
  const Value* v = t.find(key);
  return v ? v->as_int(where + "." + key) : fallback;
}

std::string opt_string(const Table& t, const std::string& key, std::string fallback, const std::string& where) {
  const Value* v = t.find(key);
  return v ? v->as_string(where + "." + key) : fallback;
}

bool opt_bool(const Table& t, const std::string& key, bool fallback, const std::string& where) {
  const Value* v = t.find(key);
  return v ? v->as_bool(where + "." + key) : fallback;
}

}  // namespace railmap::cfg
