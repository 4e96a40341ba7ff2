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

#include "taskdv/errorgen.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <regex>
#include <set>

#include "taskdv/dsl.h"
#include "taskdv/evaluate.h"
#include "taskdv/prng.h"
#include "taskdv/profile.h"
#include "taskdv/text.h"

namespace taskdv {

namespace {

using Family = ErrorFamily;

enum class Need { kAny, kNumeric, kText, kBoolOrText, kNotBool };

struct Spec {
  std::string_view kind;
  Family family;
  int min_targets;
  int max_targets;  // -1 = unbounded
  Need need;
  std::vector<std::string_view> params;
};

const std::vector<Spec>& Specs() {
  static const std::vector<Spec> specs = {
      {"drop_column", Family::kStructural, 1, -1, Need::kAny, {}},
      {"rename_column", Family::kStructural, 1, 1, Need::kAny, {"new_name"}},
      {"duplicate_rows", Family::kStructural, 0, 0, Need::kAny, {}},
      {"shuffle_column_order", Family::kStructural, 0, 0, Need::kAny, {}},
      {"inject_nulls", Family::kIntegrity, 1, -1, Need::kAny, {}},
      {"duplicate_key_values", Family::kIntegrity, 1, 1, Need::kAny, {}},
      {"break_conditional_dependency", Family::kIntegrity, 1, 1, Need::kAny,
       {"condition", "value"}},
      {"out_of_domain_category", Family::kIntegrity, 1, -1, Need::kNotBool, {"values"}},
      {"scale_values", Family::kNumerical, 1, -1, Need::kNumeric, {"factor"}},
      {"inject_outliers", Family::kNumerical, 1, -1, Need::kNumeric, {"magnitude"}},
      {"negate_values", Family::kNumerical, 1, -1, Need::kNumeric, {}},
      {"constant_collapse", Family::kNumerical, 1, -1, Need::kNumeric, {}},
      {"case_flip", Family::kTextual, 1, -1, Need::kText, {}},
      {"whitespace_padding", Family::kTextual, 1, -1, Need::kText, {"width"}},
      {"truncate_strings", Family::kTextual, 1, -1, Need::kText, {"length"}},
      {"unicode_confusables", Family::kTextual, 1, -1, Need::kText, {}},
      {"numeric_to_string_locale", Family::kFormat, 1, -1, Need::kNumeric, {}},
      {"date_format_shift", Family::kFormat, 1, -1, Need::kText, {}},
      {"boolean_encoding_shift", Family::kFormat, 1, -1, Need::kBoolOrText,
       {"true_token", "false_token"}},
  };
  return specs;
}

const Spec* FindSpec(std::string_view kind) {
  for (const Spec& s : Specs()) {
    if (s.kind == kind) return &s;
  }
  return nullptr;
}

bool KindSatisfies(Need need, ValueKind k) {
  switch (need) {
    case Need::kAny: return true;
    case Need::kNumeric: return k == ValueKind::kInteger || k == ValueKind::kReal;
    case Need::kText: return k == ValueKind::kText;
    case Need::kBoolOrText: return k == ValueKind::kBoolean || k == ValueKind::kText;
    case Need::kNotBool: return k != ValueKind::kBoolean;
  }
  return false;
}

Value JsonToValue(const nlohmann::json& j) {
  if (j.is_null()) return Value::Null();
  if (j.is_boolean()) return Value::Boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::Integer(j.get<int64_t>());
  if (j.is_number()) return Value::Real(j.get<double>());
  if (j.is_string()) return Value::Text(j.get<std::string>());
  throw ConfigError("unsupported literal " + j.dump());
}

bool LiteralFits(const Value& v, ValueKind k) {
  switch (v.kind()) {
    case ValueKind::kNull: return true;
    case ValueKind::kInteger: return k == ValueKind::kInteger || k == ValueKind::kReal;
    case ValueKind::kReal: return k == ValueKind::kReal;
    default: return v.kind() == k;
  }
}

// Coerces a fitting literal to the column kind.
Value Coerce(const Value& v, ValueKind k) {
  if (k == ValueKind::kReal && v.kind() == ValueKind::kInteger) {
    return Value::Real(static_cast<double>(v.as_int()));
  }
  return v;
}

double NumberParam(const ErrorOperator& op, const char* key, double dflt) {
  if (!op.params.contains(key)) return dflt;
  const auto& j = op.params[key];
  if (!j.is_number()) throw ConfigError(op.kind + "." + key + " must be a number");
  return j.get<double>();
}

std::string TextParam(const ErrorOperator& op, const char* key, std::string dflt) {
  if (!op.params.contains(key)) return dflt;
  const auto& j = op.params[key];
  if (!j.is_string()) throw ConfigError(op.kind + "." + key + " must be a string");
  return j.get<std::string>();
}

struct Table {
  std::vector<std::string> names;
  std::vector<ValueKind> kinds;
  std::vector<std::vector<Value>> cols;
  size_t rows = 0;

  explicit Table(const Dataset& d) : rows(d.row_count()) {
    for (const ColumnVector& c : d.columns()) {
      names.push_back(c.name());
      kinds.push_back(c.type());
      cols.push_back(c.values());
    }
  }

  size_t Index(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw SchemaError("unknown column '" + name + "'");
    return static_cast<size_t>(it - names.begin());
  }

  Dataset ToDataset() const {
    std::vector<ColumnVector> out;
    for (size_t i = 0; i < names.size(); ++i) out.emplace_back(names[i], kinds[i], cols[i]);
    return Dataset(std::move(out), rows);
  }
};

std::string FlipCase(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') {
      c = static_cast<char>(c - 'a' + 'A');
    } else if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    }
  }
  return out;
}

std::string TruncateCodepoints(const std::string& s, size_t n) {
  size_t i = 0, count = 0;
  while (i < s.size() && count < n) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : 4;
    i = std::min(s.size(), i + len);
    ++count;
  }
  return s.substr(0, i);
}

std::string Confusables(const std::string& s) {
  static const std::map<char, std::string_view> kMap = {
      {'a', "\xD0\xB0"}, {'c', "\xD1\x81"}, {'e', "\xD0\xB5"}, {'i', "\xD1\x96"},
      {'o', "\xD0\xBE"}, {'p', "\xD1\x80"}, {'x', "\xD1\x85"}, {'y', "\xD1\x83"},
      {'A', "\xD0\x90"}, {'B', "\xD0\x92"}, {'C', "\xD0\xA1"}, {'E', "\xD0\x95"},
      {'H', "\xD0\x9D"}, {'K', "\xD0\x9A"}, {'M', "\xD0\x9C"}, {'O', "\xD0\x9E"},
      {'P', "\xD0\xA0"}, {'T', "\xD0\xA2"}, {'X', "\xD0\xA5"},
  };
  std::string out;
  for (char c : s) {
    auto it = kMap.find(c);
    if (it != kMap.end()) {
      out += it->second;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string GroupThousands(std::string digits) {
  std::string out;
  int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out.push_back('.');
    out.push_back(digits[i]);
  }
  return out;
}

std::string LocaleNumber(const Value& v) {
  std::string s = v.kind() == ValueKind::kInteger ? std::to_string(v.as_int())
                                                  : FormatReal(v.as_real());
  if (s.find_first_of("eEn") != std::string::npos) {
    std::replace(s.begin(), s.end(), '.', ',');
    return s;
  }
  std::string sign;
  if (!s.empty() && s[0] == '-') {
    sign = "-";
    s = s.substr(1);
  }
  size_t dot = s.find('.');
  std::string int_part = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : "," + s.substr(dot + 1);
  return sign + GroupThousands(int_part) + frac;
}

struct SimColumn {
  std::string name;
  ValueKind kind;
  std::string origin;
};

}  // namespace

const std::vector<OperatorInfo>& ErrorCatalog() {
  static const std::vector<OperatorInfo> catalog = [] {
    std::vector<OperatorInfo> out;
    for (const Spec& s : Specs()) out.push_back({s.kind, s.family});
    return out;
  }();
  return catalog;
}

std::string_view FamilyName(ErrorFamily f) {
  switch (f) {
    case Family::kStructural: return "structural";
    case Family::kIntegrity: return "integrity";
    case Family::kNumerical: return "numerical";
    case Family::kTextual: return "textual";
    case Family::kFormat: return "format";
  }
  return "";
}

std::vector<ColumnSchema> SchemaOf(const Dataset& d) {
  std::vector<ColumnSchema> out;
  for (const ColumnVector& c : d.columns()) out.push_back({c.name(), c.type()});
  return out;
}

size_t SelectedRowCount(double fraction, size_t n) {
  return std::min(n, static_cast<size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9)));
}

std::vector<std::string> ValidateConfig(const ErrorConfig& cfg,
                                        const std::vector<ColumnSchema>& schema) {
  std::vector<std::string> problems;
  std::vector<SimColumn> cols;
  for (const ColumnSchema& c : schema) cols.push_back({c.name, c.kind, c.name});
  auto find = [&cols](const std::string& name) -> SimColumn* {
    for (SimColumn& c : cols) {
      if (c.name == name) return &c;
    }
    return nullptr;
  };
  std::set<std::string> touched;

  if (cfg.id.empty()) problems.push_back("config id is empty");
  if (!(cfg.max_column_fraction > 0 && cfg.max_column_fraction <= 1)) {
    problems.push_back("max_column_fraction must be in (0, 1]");
  }
  for (size_t i = 0; i < cfg.operators.size(); ++i) {
    const ErrorOperator& op = cfg.operators[i];
    std::string where = "operator " + std::to_string(i) + " (" + op.kind + "): ";
    const Spec* spec = FindSpec(op.kind);
    if (spec == nullptr) {
      problems.push_back(where + "unknown kind");
      continue;
    }
    if (!(op.row_fraction > 0 && op.row_fraction <= 1)) {
      problems.push_back(where + "row_fraction must be in (0, 1]");
    }
    int n = static_cast<int>(op.columns.size());
    if (n < spec->min_targets || (spec->max_targets >= 0 && n > spec->max_targets)) {
      problems.push_back(where + "wrong number of target columns");
    }
    if (!op.params.is_object()) {
      problems.push_back(where + "params must be an object");
      continue;
    }
    for (const auto& [key, _] : op.params.items()) {
      if (std::find(spec->params.begin(), spec->params.end(), key) == spec->params.end()) {
        problems.push_back(where + "unknown parameter '" + key + "'");
      }
    }
    if (op.kind == "break_conditional_dependency") {
      if (!op.params.contains("condition") || !op.params["condition"].is_string()) {
        problems.push_back(where + "condition must be a string");
      } else {
        try {
          dsl::Expr cond = dsl::ParseExpr(op.params["condition"].get<std::string>());
          for (const std::string& c : cond.Columns()) {
            if (!find(c)) problems.push_back(where + "condition column '" + c + "' missing");
          }
        } catch (const dsl::DslError& e) {
          problems.push_back(where + "bad condition: " + e.what());
        }
      }
    }
    for (const char* key : {"factor", "magnitude", "width", "length"}) {
      if (op.params.contains(key) && !op.params[key].is_number()) {
        problems.push_back(where + key + " must be a number");
      }
    }
    for (const char* key : {"width", "length"}) {
      if (op.params.contains(key) && op.params[key].is_number() &&
          !(op.params[key].is_number_integer() && op.params[key].get<int64_t>() >= 0)) {
        problems.push_back(where + key + " must be a non-negative integer");
      }
    }
    for (const char* key : {"new_name", "true_token", "false_token"}) {
      if (op.params.contains(key) && !op.params[key].is_string()) {
        problems.push_back(where + key + " must be a string");
      }
    }
    std::set<std::string> seen_targets;
    for (const std::string& name : op.columns) {
      if (!seen_targets.insert(name).second) {
        problems.push_back(where + "column '" + name + "' listed twice");
      }
      SimColumn* col = find(name);
      if (col == nullptr) {
        problems.push_back(where + "unknown column '" + name + "'");
        continue;
      }
      touched.insert(col->origin);
      if (!KindSatisfies(spec->need, col->kind)) {
        problems.push_back(where + "column '" + name + "' has unsuitable kind " +
                           std::string(KindName(col->kind)));
      }
      if (op.kind == "break_conditional_dependency" && op.params.contains("value")) {
        try {
          if (!LiteralFits(JsonToValue(op.params["value"]), col->kind)) {
            problems.push_back(where + "value does not fit column kind");
          }
        } catch (const ConfigError& e) {
          problems.push_back(where + e.what());
        }
      }
      if (op.kind == "out_of_domain_category" && op.params.contains("values")) {
        const auto& vals = op.params["values"];
        if (!vals.is_array() || vals.empty()) {
          problems.push_back(where + "values must be a non-empty array");
        } else {
          for (const auto& v : vals) {
            try {
              Value lit = JsonToValue(v);
              if (lit.is_null() || !LiteralFits(lit, col->kind)) {
                problems.push_back(where + "value " + v.dump() + " does not fit column kind");
              }
            } catch (const ConfigError& e) {
              problems.push_back(where + e.what());
            }
          }
        }
      }
    }
    // Apply the schema effect for later operators.
    if (op.kind == "drop_column") {
      std::erase_if(cols, [&op](const SimColumn& c) {
        return std::find(op.columns.begin(), op.columns.end(), c.name) != op.columns.end();
      });
    } else if (op.kind == "rename_column" && n == 1) {
      if (SimColumn* col = find(op.columns[0])) {
        std::string to = op.params.value("new_name", op.columns[0] + "_renamed");
        if (to.empty() || (to != col->name && find(to))) {
          problems.push_back(where + "rename target '" + to + "' is empty or taken");
        } else {
          col->name = to;
        }
      }
    } else if (op.kind == "numeric_to_string_locale" ||
               op.kind == "boolean_encoding_shift") {
      for (const std::string& name : op.columns) {
        if (SimColumn* col = find(name)) col->kind = ValueKind::kText;
      }
    }
  }
  if (!schema.empty() &&
      static_cast<double>(touched.size()) >
          cfg.max_column_fraction * static_cast<double>(schema.size()) + 1e-9) {
    problems.push_back("config touches " + std::to_string(touched.size()) + " of " +
                       std::to_string(schema.size()) +
                       " columns, above max_column_fraction");
  }
  return problems;
}

Dataset ApplyConfig(const Dataset& d, const ErrorConfig& cfg) {
  std::vector<std::string> problems = ValidateConfig(cfg, SchemaOf(d));
  if (!problems.empty()) throw ConfigError(cfg.id + ": " + Join(problems, "; "));

  Table t(d);
  SplitMix64 base(cfg.seed);
  for (size_t oi = 0; oi < cfg.operators.size(); ++oi) {
    const ErrorOperator& op = cfg.operators[oi];
    SplitMix64 rng(base.At(oi));
    const size_t n = t.rows;
    const size_t k = SelectedRowCount(op.row_fraction, n);
    const std::string& kind = op.kind;

    if (kind == "drop_column") {
      for (const std::string& name : op.columns) {
        size_t i = t.Index(name);
        t.names.erase(t.names.begin() + i);
        t.kinds.erase(t.kinds.begin() + i);
        t.cols.erase(t.cols.begin() + i);
      }
      continue;
    }
    if (kind == "rename_column") {
      t.names[t.Index(op.columns[0])] = TextParam(op, "new_name", op.columns[0] + "_renamed");
      continue;
    }
    if (kind == "duplicate_rows") {
      std::vector<size_t> rows = rng.SampleIndices(n, k);
      for (auto& col : t.cols) {
        for (size_t r : rows) col.push_back(col[r]);
      }
      t.rows += rows.size();
      continue;
    }
    if (kind == "shuffle_column_order") {
      std::vector<size_t> order(t.names.size());
      std::iota(order.begin(), order.end(), size_t{0});
      rng.Shuffle(order);
      if (order.size() >= 2 && std::is_sorted(order.begin(), order.end())) {
        std::swap(order[0], order[1]);
      }
      Table shuffled = t;
      for (size_t i = 0; i < order.size(); ++i) {
        shuffled.names[i] = t.names[order[i]];
        shuffled.kinds[i] = t.kinds[order[i]];
        shuffled.cols[i] = t.cols[order[i]];
      }
      t = std::move(shuffled);
      continue;
    }
    if (kind == "break_conditional_dependency") {
      dsl::Expr cond = dsl::ParseExpr(op.params["condition"].get<std::string>());
      std::vector<bool> mask = dsl::FilterMask(cond, t.ToDataset());
      std::vector<size_t> eligible;
      for (size_t r = 0; r < n; ++r) {
        if (mask[r]) eligible.push_back(r);
      }
      size_t ci = t.Index(op.columns[0]);
      Value v = op.params.contains("value")
                    ? Coerce(JsonToValue(op.params["value"]), t.kinds[ci])
                    : Value::Null();
      for (size_t j : rng.SampleIndices(eligible.size(),
                                        SelectedRowCount(op.row_fraction, eligible.size()))) {
        t.cols[ci][eligible[j]] = v;
      }
      continue;
    }

    for (const std::string& name : op.columns) {
      size_t ci = t.Index(name);
      std::vector<Value>& col = t.cols[ci];
      const ValueKind ck = t.kinds[ci];

      if (kind == "constant_collapse") {
        Moments m;
        for (const Value& v : col) {
          if (!v.is_null()) m.Add(v.as_number());
        }
        Value c = ck == ValueKind::kInteger
                      ? Value::Integer(static_cast<int64_t>(std::llround(m.mean())))
                      : Value::Real(m.mean());
        for (Value& v : col) {
          if (!v.is_null()) v = c;
        }
        continue;
      }
      if (kind == "numeric_to_string_locale" || kind == "boolean_encoding_shift") {
        std::vector<size_t> rows = rng.SampleIndices(n, k);
        std::vector<bool> selected(n);
        for (size_t r : rows) selected[r] = true;
        std::string yes = TextParam(op, "true_token", "yes");
        std::string no = TextParam(op, "false_token", "no");
        for (size_t r = 0; r < n; ++r) {
          Value& v = col[r];
          if (v.is_null()) continue;
          if (kind == "numeric_to_string_locale") {
            v = Value::Text(selected[r] ? LocaleNumber(v) : v.ToString());
          } else if (v.kind() == ValueKind::kBoolean) {
            v = Value::Text(selected[r] ? (v.as_bool() ? yes : no) : v.ToString());
          } else if (selected[r]) {
            std::string low = AsciiLower(v.as_text());
            if (low == "true") v = Value::Text(yes);
            if (low == "false") v = Value::Text(no);
          }
        }
        t.kinds[ci] = ValueKind::kText;
        continue;
      }

      std::optional<Moments> stats;
      if (kind == "inject_outliers" || kind == "out_of_domain_category") {
        stats.emplace();
        for (const Value& v : col) {
          if (!v.is_null() && v.is_numeric()) stats->Add(v.as_number());
        }
      }
      std::vector<Value> snapshot;
      if (kind == "duplicate_key_values") snapshot = col;

      for (size_t r : rng.SampleIndices(n, k)) {
        Value& v = col[r];
        if (kind == "inject_nulls") {
          v = Value::Null();
        } else if (kind == "duplicate_key_values") {
          if (n >= 2) v = snapshot[(r + 1 + rng.Below(n - 1)) % n];
        } else if (kind == "out_of_domain_category") {
          if (op.params.contains("values")) {
            const auto& vals = op.params["values"];
            v = Coerce(JsonToValue(vals[rng.Below(vals.size())]), ck);
          } else if (ck == ValueKind::kText) {
            v = Value::Text("OUT_OF_DOMAIN");
          } else {
            double top = stats->count() > 0 ? stats->max() : 0;
            v = ck == ValueKind::kInteger
                    ? Value::Integer(static_cast<int64_t>(top) + 1000)
                    : Value::Real(top + 1000.0);
          }
        } else if (v.is_null()) {
          continue;
        } else if (kind == "scale_values") {
          double f = NumberParam(op, "factor", 100);
          v = ck == ValueKind::kInteger
                  ? Value::Integer(static_cast<int64_t>(
                        std::llround(static_cast<double>(v.as_int()) * f)))
                  : Value::Real(v.as_real() * f);
        } else if (kind == "inject_outliers") {
          double mag = NumberParam(op, "magnitude", 10);
          double sign = (rng.Next() & 1) ? 1.0 : -1.0;
          double x = stats->mean() + sign * mag * std::max(stats->stddev(), 1.0);
          v = ck == ValueKind::kInteger
                  ? Value::Integer(static_cast<int64_t>(std::llround(x)))
                  : Value::Real(x);
        } else if (kind == "negate_values") {
          v = ck == ValueKind::kInteger ? Value::Integer(-v.as_int())
                                        : Value::Real(-v.as_real());
        } else if (kind == "case_flip") {
          v = Value::Text(FlipCase(v.as_text()));
        } else if (kind == "whitespace_padding") {
          std::string pad(static_cast<size_t>(NumberParam(op, "width", 2)), ' ');
          v = Value::Text(pad + v.as_text() + pad);
        } else if (kind == "truncate_strings") {
          v = Value::Text(TruncateCodepoints(
              v.as_text(), static_cast<size_t>(NumberParam(op, "length", 3))));
        } else if (kind == "unicode_confusables") {
          v = Value::Text(Confusables(v.as_text()));
        } else if (kind == "date_format_shift") {
          static const std::regex iso(R"((\d{4})-(\d{2})-(\d{2})(.*))");
          std::smatch m;
          const std::string& s = v.as_text();
          if (std::regex_match(s, m, iso)) {
            v = Value::Text(m[3].str() + "/" + m[2].str() + "/" + m[1].str() + m[4].str());
          }
        }
      }
    }
  }
  return t.ToDataset();
}

nlohmann::ordered_json ErrorConfigToJson(const ErrorConfig& cfg) {
  nlohmann::ordered_json j;
  j["id"] = cfg.id;
  j["seed"] = cfg.seed;
  j["max_column_fraction"] = cfg.max_column_fraction;
  auto ops = nlohmann::ordered_json::array();
  for (const ErrorOperator& op : cfg.operators) {
    nlohmann::ordered_json o;
    o["kind"] = op.kind;
    o["columns"] = op.columns;
    o["row_fraction"] = op.row_fraction;
    o["params"] = nlohmann::ordered_json::parse(op.params.dump());
    ops.push_back(o);
  }
  j["operators"] = ops;
  return j;
}

ErrorConfig ErrorConfigFromJson(const nlohmann::json& j) {
  ErrorConfig cfg;
  try {
    cfg.id = j.at("id").get<std::string>();
    cfg.seed = j.value("seed", uint64_t{0});
    cfg.max_column_fraction = j.value("max_column_fraction", 0.5);
    for (const auto& o : j.at("operators")) {
      ErrorOperator op;
      op.kind = o.at("kind").get<std::string>();
      op.columns = o.value("columns", std::vector<std::string>{});
      op.row_fraction = o.value("row_fraction", 1.0);
      op.params = o.value("params", nlohmann::json::object());
      cfg.operators.push_back(std::move(op));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed error config: ") + e.what());
  }
  return cfg;
}

}  // namespace taskdv
