#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "railmap/errors.hpp"

namespace railmap::cfg {

// Minimal structured-config document: key/value pairs grouped into
// [tables] and [[arrays of tables]], scalar/array values, '#' comments.
// Enough for floorplans and pipeline configs; errors carry line numbers.

class Value;
using Array = std::vector<Value>;

class Table {
 public:
  bool contains(const std::string& key) const noexcept;
  const Value* find(const std::string& key) const noexcept;
  const Value& at(const std::string& key) const;  // throws config error naming the key
  Value& set(const std::string& key);             // inserts or overwrites
  const std::vector<std::pair<std::string, Value>>& items() const noexcept { return items_; }
  std::vector<std::pair<std::string, Value>>& items() noexcept { return items_; }

 private:
  std::vector<std::pair<std::string, Value>> items_;
};

class Value {
 public:
  Value() = default;
  explicit Value(bool v) : data_(v) {}
  explicit Value(std::int64_t v) : data_(v) {}
  explicit Value(double v) : data_(v) {}
  explicit Value(std::string v) : data_(std::move(v)) {}
  explicit Value(Array v) : data_(std::move(v)) {}
  explicit Value(Table v) : data_(std::move(v)) {}

  bool is_bool() const noexcept { return std::holds_alternative<bool>(data_); }
  bool is_int() const noexcept { return std::holds_alternative<std::int64_t>(data_); }
  bool is_number() const noexcept { return is_int() || std::holds_alternative<double>(data_); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(data_); }
  bool is_array() const noexcept { return std::holds_alternative<Array>(data_); }
  bool is_table() const noexcept { return std::holds_alternative<Table>(data_); }

  bool as_bool(const std::string& what) const;
  std::int64_t as_int(const std::string& what) const;
  double as_double(const std::string& what) const;  // ints promote
  const std::string& as_string(const std::string& what) const;
  const Array& as_array(const std::string& what) const;
  Array& as_array(const std::string& what);
  const Table& as_table(const std::string& what) const;
  Table& as_table(const std::string& what);

 private:
  std::variant<std::monostate, bool, std::int64_t, double, std::string, Array, Table> data_;
};

Table parse(std::string_view text, const std::string& source_name = "<config>");
Table parse_file(const std::string& path);

std::string serialize(const Table& root);

// Lookup helpers used by the module loaders; `where` prefixes error messages.
double req_double(const Table& t, const std::string& key, const std::string& where);
std::int64_t req_int(const Table& t, const std::string& key, const std::string& where);
const std::string& req_string(const Table& t, const std::string& key, const std::string& where);
double opt_double(const Table& t, const std::string& key, double fallback, const std::string& where);
std::int64_t opt_int(const Table& t, const std::string& key, std::int64_t fallback, const std::string& where);
std::string opt_string(const Table& t, const std::string& key, std::string fallback, const std::string& where);
bool opt_bool(const Table& t, const std::string& key, bool fallback, const std::string& where);

}  // namespace railmap::cfg
