// Copyright 2026 The taskdv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TASKDV_TABULAR_H_
#define TASKDV_TABULAR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace taskdv {

enum class ValueKind { kNull, kBoolean, kInteger, kReal, kText };

std::string_view KindName(ValueKind kind);

// A single cell. Null is represented by std::monostate.
class Value {
 public:
  Value() = default;
  static Value Null() { return Value(); }
  static Value Boolean(bool b) { return Value(Repr(b)); }
  static Value Integer(int64_t i) { return Value(Repr(i)); }
  static Value Real(double d) { return Value(Repr(d)); }
  static Value Text(std::string s) { return Value(Repr(std::move(s))); }

  ValueKind kind() const;
  bool is_null() const { return std::holds_alternative<std::monostate>(repr_); }
  bool is_numeric() const {
    return std::holds_alternative<int64_t>(repr_) ||
           std::holds_alternative<double>(repr_);
  }

  bool as_bool() const { return std::get<bool>(repr_); }
  int64_t as_int() const { return std::get<int64_t>(repr_); }
  double as_real() const { return std::get<double>(repr_); }
  const std::string& as_text() const { return std::get<std::string>(repr_); }
  // Integer or real widened to double.
  double as_number() const;

  // Canonical text form; also the CSV cell encoding. Null renders as "".
  std::string ToString() const;

  friend bool operator==(const Value&, const Value&) = default;
  // Total order used for histograms and sorting: null < bool < number < text,
  // with integers and reals compared numerically.
  friend bool operator<(const Value& a, const Value& b);

 private:
  using Repr = std::variant<std::monostate, bool, int64_t, double, std::string>;
  explicit Value(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

class ColumnVector {
 public:
  ColumnVector() = default;
  // Throws SchemaError if a non-null value does not match `type` or the
  // lengths disagree.
  ColumnVector(std::string name, ValueKind type, std::vector<Value> values);

  const std::string& name() const { return name_; }
  ValueKind type() const { return type_; }
  size_t size() const { return values_.size(); }
  const Value& operator[](size_t row) const { return values_[row]; }
  const std::vector<Value>& values() const { return values_; }
  const std::vector<bool>& null_mask() const { return null_mask_; }
  bool is_null(size_t row) const { return null_mask_[row]; }
  size_t null_count() const;
  bool is_numeric() const {
    return type_ == ValueKind::kInteger || type_ == ValueKind::kReal;
  }

  ColumnVector Renamed(std::string name) const;

  friend bool operator==(const ColumnVector&, const ColumnVector&) = default;

 private:
  std::string name_;
  ValueKind type_ = ValueKind::kText;
  std::vector<Value> values_;
  std::vector<bool> null_mask_;
};

// Immutable columnar table.
class Dataset {
 public:
  Dataset() = default;
  // All columns must have `row_count` values and unique names.
  Dataset(std::vector<ColumnVector> columns, size_t row_count);
  // Convenience for non-empty column lists; row count taken from the columns.
  explicit Dataset(std::vector<ColumnVector> columns);

  size_t row_count() const { return row_count_; }
  size_t column_count() const { return columns_.size(); }
  const std::vector<ColumnVector>& columns() const { return columns_; }
  const ColumnVector& column(size_t i) const { return columns_[i]; }
  // Throws SchemaError for an unknown name.
  const ColumnVector& column(std::string_view name) const;
  const ColumnVector* find(std::string_view name) const;
  bool has_column(std::string_view name) const { return find(name) != nullptr; }
  std::vector<std::string> column_names() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<ColumnVector> columns_;
  size_t row_count_ = 0;
};

struct Batch {
  std::string id;
  Dataset data;
  std::string provenance;
};

// Type inference over raw cells: integer iff every non-empty cell parses as a
// 64-bit integer, else real iff every non-empty cell parses as a number (the
// token "NaN" counts as a real null), else boolean iff every non-empty cell is
// true/false in any case, else text.
std::vector<ValueKind> InferTypes(
    const std::vector<std::vector<std::string>>& raw_columns);
ValueKind InferType(std::span<const std::string> cells);

// Converts one raw cell under a previously inferred kind.
Value ParseCell(std::string_view cell, ValueKind kind);

// Builds a typed Dataset from a header and row-major raw cells.
Dataset FromRawRows(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

// RFC-4180 CSV with a mandatory header row.
Dataset ParseCsv(std::string_view text);
Dataset LoadTable(const std::filesystem::path& path);
std::string WriteCsv(const Dataset& d);
void SaveTable(const Dataset& d, const std::filesystem::path& path);

Dataset SelectColumns(const Dataset& d, const std::vector<std::string>& names);
// Keeps rows whose mask entry is true, preserving order.
Dataset FilterRows(const Dataset& d, const std::vector<bool>& keep);
// Throws SchemaError unless both datasets have the same set of column names.
void RequireSameHeader(const Dataset& expected, const Dataset& actual);

// Registry layout: <dir>/<id>.csv plus <dir>/<id>.meta.json {id, provenance}.
void WriteBatch(const Batch& batch, const std::filesystem::path& dir);
Batch ReadBatch(const std::filesystem::path& dir, const std::string& id);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace taskdv

#endif  // TASKDV_TABULAR_H_
