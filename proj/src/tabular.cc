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

#include "taskdv/tabular.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "taskdv/text.h"

namespace taskdv {

std::string_view KindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kNull:
      return "null";
    case ValueKind::kBoolean:
      return "boolean";
    case ValueKind::kInteger:
      return "integer";
    case ValueKind::kReal:
      return "real";
    case ValueKind::kText:
      return "text";
  }
  return "unknown";
}

ValueKind Value::kind() const {
  switch (repr_.index()) {
    case 0:
      return ValueKind::kNull;
    case 1:
      return ValueKind::kBoolean;
    case 2:
      return ValueKind::kInteger;
    case 3:
      return ValueKind::kReal;
    default:
      return ValueKind::kText;
  }
}

double Value::as_number() const {
  if (auto* i = std::get_if<int64_t>(&repr_)) return static_cast<double>(*i);
  return std::get<double>(repr_);
}

std::string Value::ToString() const {
  switch (kind()) {
    case ValueKind::kNull:
      return "";
    case ValueKind::kBoolean:
      return as_bool() ? "true" : "false";
    case ValueKind::kInteger:
      return std::to_string(as_int());
    case ValueKind::kReal:
      return FormatReal(as_real());
    case ValueKind::kText:
      return as_text();
  }
  return "";
}

namespace {

int KindRank(ValueKind k) {
  switch (k) {
    case ValueKind::kNull:
      return 0;
    case ValueKind::kBoolean:
      return 1;
    case ValueKind::kInteger:
    case ValueKind::kReal:
      return 2;
    case ValueKind::kText:
      return 3;
  }
  return 4;
}

}  // namespace

bool operator<(const Value& a, const Value& b) {
  int ra = KindRank(a.kind()), rb = KindRank(b.kind());
  if (ra != rb) return ra < rb;
  switch (a.kind()) {
    case ValueKind::kNull:
      return false;
    case ValueKind::kBoolean:
      return a.as_bool() < b.as_bool();
    case ValueKind::kInteger:
    case ValueKind::kReal:
      if (a.kind() == ValueKind::kInteger && b.kind() == ValueKind::kInteger) {
        return a.as_int() < b.as_int();
      }
      return a.as_number() < b.as_number();
    case ValueKind::kText:
      return a.as_text() < b.as_text();
  }
  return false;
}

ColumnVector::ColumnVector(std::string name, ValueKind type,
                           std::vector<Value> values)
    : name_(std::move(name)), type_(type), values_(std::move(values)) {
  null_mask_.reserve(values_.size());
  for (const Value& v : values_) {
    if (!v.is_null() && v.kind() != type_) {
      throw SchemaError("column '" + name_ + "' of type " +
                        std::string(KindName(type_)) + " holds a " +
                        std::string(KindName(v.kind())) + " value");
    }
    null_mask_.push_back(v.is_null());
  }
}

size_t ColumnVector::null_count() const {
  return static_cast<size_t>(
      std::count(null_mask_.begin(), null_mask_.end(), true));
}

ColumnVector ColumnVector::Renamed(std::string name) const {
  ColumnVector c = *this;
  c.name_ = std::move(name);
  return c;
}

Dataset::Dataset(std::vector<ColumnVector> columns, size_t row_count)
    : columns_(std::move(columns)), row_count_(row_count) {
  std::set<std::string> seen;
  for (const ColumnVector& c : columns_) {
    if (c.size() != row_count_) {
      throw SchemaError("column '" + c.name() + "' has " +
                        std::to_string(c.size()) + " values, expected " +
                        std::to_string(row_count_));
    }
    if (!seen.insert(c.name()).second) {
      throw SchemaError("duplicate column name '" + c.name() + "'");
    }
  }
}

Dataset::Dataset(std::vector<ColumnVector> columns)
    : Dataset(columns, columns.empty() ? 0 : columns.front().size()) {}

const ColumnVector* Dataset::find(std::string_view name) const {
  for (const ColumnVector& c : columns_) {
    if (c.name() == name) return &c;
  }
  return nullptr;
}

const ColumnVector& Dataset::column(std::string_view name) const {
  const ColumnVector* c = find(name);
  if (c == nullptr) {
    throw SchemaError("unknown column '" + std::string(name) + "'");
  }
  return *c;
}

std::vector<std::string> Dataset::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const ColumnVector& c : columns_) names.push_back(c.name());
  return names;
}

// ---------------------------------------------------------------------------
// Type inference

namespace {

bool IsNanToken(std::string_view s) { return s == "NaN"; }

bool ParsesAsInteger(std::string_view s, int64_t* out = nullptr) {
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  }
  if (s.empty()) return false;
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return false;
  if (out != nullptr) *out = v;
  return true;
}

bool ParsesAsReal(std::string_view s, double* out = nullptr) {
  if (s.empty()) return false;
  // from_chars accepts inf/nan spellings; only plain decimal numbers count.
  for (char ch : s) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' ||
          ch == '-' || ch == '+' || ch == 'e' || ch == 'E')) {
      return false;
    }
  }
  std::string_view body = s;
  if (body.front() == '+') {
    body.remove_prefix(1);
    if (body.empty() || body.front() == '-' || body.front() == '+') return false;
  }
  double v = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size()) return false;
  if (out != nullptr) *out = v;
  return true;
}

bool ParsesAsBoolean(std::string_view s, bool* out = nullptr) {
  std::string lower = AsciiLower(s);
  if (lower == "true") {
    if (out != nullptr) *out = true;
    return true;
  }
  if (lower == "false") {
    if (out != nullptr) *out = false;
    return true;
  }
  return false;
}

}  // namespace

ValueKind InferType(std::span<const std::string> cells) {
  bool all_int = true, all_real = true, all_bool = true;
  for (const std::string& cell : cells) {
    if (cell.empty()) continue;
    if (IsNanToken(cell)) {
      all_int = false;
      all_bool = false;
      continue;
    }
    if (all_int && !ParsesAsInteger(cell)) all_int = false;
    if (all_real && !ParsesAsReal(cell)) all_real = false;
    if (all_bool && !ParsesAsBoolean(cell)) all_bool = false;
    if (!all_int && !all_real && !all_bool) break;
  }
  if (all_int) return ValueKind::kInteger;
  if (all_real) return ValueKind::kReal;
  if (all_bool) return ValueKind::kBoolean;
  return ValueKind::kText;
}

std::vector<ValueKind> InferTypes(
    const std::vector<std::vector<std::string>>& raw_columns) {
  std::vector<ValueKind> kinds;
  kinds.reserve(raw_columns.size());
  for (const auto& col : raw_columns) kinds.push_back(InferType(col));
  return kinds;
}

Value ParseCell(std::string_view cell, ValueKind kind) {
  if (cell.empty()) return Value::Null();
  switch (kind) {
    case ValueKind::kInteger: {
      int64_t v;
      if (ParsesAsInteger(cell, &v)) return Value::Integer(v);
      break;
    }
    case ValueKind::kReal: {
      if (IsNanToken(cell)) return Value::Null();
      double v;
      if (ParsesAsReal(cell, &v)) return Value::Real(v);
      break;
    }
    case ValueKind::kBoolean: {
      bool v;
      if (ParsesAsBoolean(cell, &v)) return Value::Boolean(v);
      break;
    }
    case ValueKind::kText:
      return Value::Text(std::string(cell));
    case ValueKind::kNull:
      return Value::Null();
  }
  throw SchemaError("cell '" + std::string(cell) + "' is not a valid " +
                    std::string(KindName(kind)));
}

Dataset FromRawRows(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<std::string>> raw(header.size());
  for (auto& col : raw) col.reserve(rows.size());
  for (const auto& row : rows) {
    for (size_t c = 0; c < header.size(); ++c) raw[c].push_back(row[c]);
  }
  std::vector<ColumnVector> columns;
  columns.reserve(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    ValueKind kind = InferType(raw[c]);
    std::vector<Value> values;
    values.reserve(rows.size());
    for (const std::string& cell : raw[c]) values.push_back(ParseCell(cell, kind));
    columns.emplace_back(header[c], kind, std::move(values));
  }
  return Dataset(std::move(columns), rows.size());
}

// ---------------------------------------------------------------------------
// CSV

namespace {

class CsvReader {
 public:
  explicit CsvReader(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  bool done() const { return pos_ >= text_.size(); }
  size_t line() const { return line_; }

  // Reads one record; returns false at end of input.
  bool Next(std::vector<std::string>* fields) {
    fields->clear();
    if (done()) return false;
    record_line_ = line_;
    std::string field;
    while (true) {
      if (pos_ < text_.size() && text_[pos_] == '"') {
        ++pos_;
        while (true) {
          if (pos_ >= text_.size()) {
            throw ParseError("unterminated quoted field", record_line_);
          }
          char ch = text_[pos_++];
          if (ch == '"') {
            if (pos_ < text_.size() && text_[pos_] == '"') {
              field.push_back('"');
              ++pos_;
            } else {
              break;
            }
          } else {
            if (ch == '\n') ++line_;
            field.push_back(ch);
          }
        }
        if (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '\n' &&
            text_[pos_] != '\r') {
          throw ParseError("unexpected character after closing quote", line_);
        }
      } else {
        while (pos_ < text_.size() && text_[pos_] != ',' &&
               text_[pos_] != '\n' && text_[pos_] != '\r') {
          if (text_[pos_] == '"') {
            throw ParseError("quote inside unquoted field", line_);
          }
          field.push_back(text_[pos_++]);
        }
      }
      fields->push_back(std::move(field));
      field.clear();
      if (pos_ >= text_.size()) return true;
      char sep = text_[pos_++];
      if (sep == ',') continue;
      if (sep == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
      ++line_;
      return true;
    }
  }

  size_t record_line() const { return record_line_; }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  size_t line_ = 1;
  size_t record_line_ = 1;
};

bool NeedsQuoting(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

}  // namespace

Dataset ParseCsv(std::string_view text) {
  CsvReader reader(text);
  std::vector<std::string> header;
  if (!reader.Next(&header)) throw ParseError("missing header row", 1);
  std::set<std::string> seen;
  for (const std::string& h : header) {
    if (!seen.insert(h).second) {
      throw SchemaError("duplicate header name '" + h + "'");
    }
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  while (reader.Next(&fields)) {
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       reader.record_line());
    }
    rows.push_back(fields);
  }
  return FromRawRows(header, rows);
}

Dataset LoadTable(const std::filesystem::path& path) {
  return ParseCsv(ReadFile(path));
}

std::string WriteCsv(const Dataset& d) {
  std::string out;
  auto emit = [&out](std::string_view cell) {
    if (NeedsQuoting(cell)) {
      out.push_back('"');
      for (char ch : cell) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
      }
      out.push_back('"');
    } else {
      out.append(cell);
    }
  };
  for (size_t c = 0; c < d.column_count(); ++c) {
    if (c > 0) out.push_back(',');
    emit(d.column(c).name());
  }
  out.push_back('\n');
  for (size_t r = 0; r < d.row_count(); ++r) {
    for (size_t c = 0; c < d.column_count(); ++c) {
      if (c > 0) out.push_back(',');
      emit(d.column(c)[r].ToString());
    }
    out.push_back('\n');
  }
  return out;
}

void SaveTable(const Dataset& d, const std::filesystem::path& path) {
  WriteFile(path, WriteCsv(d));
}

Dataset SelectColumns(const Dataset& d, const std::vector<std::string>& names) {
  std::vector<ColumnVector> columns;
  columns.reserve(names.size());
  for (const std::string& n : names) columns.push_back(d.column(n));
  return Dataset(std::move(columns), d.row_count());
}

Dataset FilterRows(const Dataset& d, const std::vector<bool>& keep) {
  if (keep.size() != d.row_count()) {
    throw SchemaError("row mask length does not match row count");
  }
  size_t kept = static_cast<size_t>(std::count(keep.begin(), keep.end(), true));
  std::vector<ColumnVector> columns;
  columns.reserve(d.column_count());
  for (const ColumnVector& c : d.columns()) {
    std::vector<Value> values;
    values.reserve(kept);
    for (size_t r = 0; r < d.row_count(); ++r) {
      if (keep[r]) values.push_back(c[r]);
    }
    columns.emplace_back(c.name(), c.type(), std::move(values));
  }
  return Dataset(std::move(columns), kept);
}

void RequireSameHeader(const Dataset& expected, const Dataset& actual) {
  auto a = expected.column_names();
  auto b = actual.column_names();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) {
    throw SchemaError("header mismatch: expected [" + Join(a, ",") +
                      "], found [" + Join(b, ",") + "]");
  }
}

void WriteBatch(const Batch& batch, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SaveTable(batch.data, dir / (batch.id + ".csv"));
  nlohmann::ordered_json meta = {{"id", batch.id},
                                 {"provenance", batch.provenance}};
  WriteFile(dir / (batch.id + ".meta.json"), meta.dump(2) + "\n");
}

Batch ReadBatch(const std::filesystem::path& dir, const std::string& id) {
  Batch b;
  b.id = id;
  b.data = LoadTable(dir / (id + ".csv"));
  auto meta_path = dir / (id + ".meta.json");
  if (std::filesystem::exists(meta_path)) {
    auto meta = nlohmann::json::parse(ReadFile(meta_path));
    b.provenance = meta.value("provenance", "");
  }
  return b;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace taskdv
