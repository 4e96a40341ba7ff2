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

#include "taskdv/dsl.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>

#include "taskdv/text.h"

namespace taskdv::dsl {

bool Predicate::Holds(double measured) const {
  switch (op) {
    case Comparator::kGe:
      return measured >= value;
    case Comparator::kLe:
      return measured <= value;
    case Comparator::kEq:
      return measured == value;
    case Comparator::kGt:
      return measured > value;
    case Comparator::kLt:
      return measured < value;
    case Comparator::kNe:
      return measured != value;
    case Comparator::kBetween:
      return measured >= value && measured <= upper;
    case Comparator::kIn:
      return std::find(set.begin(), set.end(), measured) != set.end();
  }
  return false;
}

Expr Expr::Compare(std::string column, CmpOp op, Value literal) {
  Expr e;
  e.kind = Kind::kCompare;
  e.column = std::move(column);
  e.op = op;
  e.literal = std::move(literal);
  return e;
}

Expr Expr::IsNull(std::string column, bool negated) {
  Expr e;
  e.kind = Kind::kIsNull;
  e.column = std::move(column);
  e.negated = negated;
  return e;
}

Expr Expr::Not(Expr inner) {
  Expr e;
  e.kind = Kind::kNot;
  e.children.push_back(std::move(inner));
  return e;
}

Expr Expr::And(Expr a, Expr b) {
  Expr e;
  e.kind = Kind::kAnd;
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}

Expr Expr::Or(Expr a, Expr b) {
  Expr e = And(std::move(a), std::move(b));
  e.kind = Kind::kOr;
  return e;
}

namespace {

void CollectColumns(const Expr& e, std::set<std::string>* out) {
  if (e.kind == Expr::Kind::kCompare || e.kind == Expr::Kind::kIsNull) {
    out->insert(e.column);
  }
  for (const Expr& c : e.children) CollectColumns(c, out);
}

constexpr std::array<std::pair<Verb, std::string_view>, 13> kVerbNames = {{
    {Verb::kHasCompleteness, "hasCompleteness"},
    {Verb::kIsComplete, "isComplete"},
    {Verb::kIsUnique, "isUnique"},
    {Verb::kHasMin, "hasMin"},
    {Verb::kHasMax, "hasMax"},
    {Verb::kHasMean, "hasMean"},
    {Verb::kHasStandardDeviation, "hasStandardDeviation"},
    {Verb::kHasApproxCountDistinct, "hasApproxCountDistinct"},
    {Verb::kHasApproxQuantile, "hasApproxQuantile"},
    {Verb::kIsContainedIn, "isContainedIn"},
    {Verb::kHasPattern, "hasPattern"},
    {Verb::kHasSize, "hasSize"},
    {Verb::kSatisfies, "satisfies"},
}};

}  // namespace

std::vector<std::string> Expr::Columns() const {
  std::set<std::string> cols;
  CollectColumns(*this, &cols);
  return {cols.begin(), cols.end()};
}

std::string_view VerbName(Verb v) {
  for (const auto& [verb, name] : kVerbNames) {
    if (verb == v) return name;
  }
  return "unknown";
}

std::optional<Verb> VerbFromName(std::string_view name) {
  for (const auto& [verb, n] : kVerbNames) {
    if (n == name) return verb;
  }
  return std::nullopt;
}

Predicate Constraint::EffectivePredicate() const {
  if (predicate) return *predicate;
  return Predicate::Make(Comparator::kEq, 1.0);
}

std::vector<std::string> Constraint::ReferencedColumns() const {
  std::set<std::string> cols(columns.begin(), columns.end());
  if (where) CollectColumns(*where, &cols);
  if (row_expr) CollectColumns(*row_expr, &cols);
  return {cols.begin(), cols.end()};
}

bool SameAst(const Constraint& a, const Constraint& b) {
  Constraint x = a, y = b;
  x.id.clear();
  y.id.clear();
  x.assumption_ids.clear();
  y.assumption_ids.clear();
  return x == y;
}

const Constraint* DataUnitTest::find(std::string_view constraint_id) const {
  for (const Constraint& c : constraints) {
    if (c.id == constraint_id) return &c;
  }
  return nullptr;
}

void DataUnitTest::Validate() const {
  std::set<std::string> ids;
  for (const Constraint& c : constraints) {
    if (!ids.insert(c.id).second) {
      throw std::invalid_argument("duplicate constraint id '" + c.id + "'");
    }
  }
}

DslError::DslError(Kind kind, size_t offset, const std::string& message)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      kind_(kind),
      offset_(offset) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  kIdent,
  kQuotedIdent,
  kString,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kDot,
  kOp,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;  // decoded for strings and quoted identifiers
  size_t offset;
};

bool IsIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool IsIdentChar(char c) { return IsIdentStart(c) || (c >= '0' && c <= '9'); }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> Lex(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  while (true) {
    while (i < src.size() && (src[i] == ' ' || src[i] == '\t' ||
                              src[i] == '\n' || src[i] == '\r')) {
      ++i;
    }
    if (i >= src.size()) {
      out.push_back({Tok::kEnd, "", i});
      return out;
    }
    size_t start = i;
    char c = src[i];
    if (IsIdentStart(c)) {
      while (i < src.size() && IsIdentChar(src[i])) ++i;
      out.push_back({Tok::kIdent, std::string(src.substr(start, i - start)), start});
    } else if (c == '"') {
      std::string s;
      ++i;
      while (true) {
        if (i >= src.size()) {
          throw DslError(DslError::Kind::kSyntax, start, "unterminated string");
        }
        char ch = src[i++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (i >= src.size()) {
            throw DslError(DslError::Kind::kSyntax, i, "dangling escape");
          }
          char esc = src[i++];
          switch (esc) {
            case '"': s.push_back('"'); break;
            case '\\': s.push_back('\\'); break;
            case 'n': s.push_back('\n'); break;
            case 't': s.push_back('\t'); break;
            case 'r': s.push_back('\r'); break;
            default:
              throw DslError(DslError::Kind::kSyntax, i - 2,
                             std::string("unknown escape \\") + esc);
          }
        } else {
          s.push_back(ch);
        }
      }
      out.push_back({Tok::kString, std::move(s), start});
    } else if (c == '`') {
      std::string s;
      ++i;
      while (true) {
        if (i >= src.size()) {
          throw DslError(DslError::Kind::kSyntax, start, "unterminated identifier");
        }
        char ch = src[i++];
        if (ch == '`') {
          if (i < src.size() && src[i] == '`') {
            s.push_back('`');
            ++i;
            continue;
          }
          break;
        }
        s.push_back(ch);
      }
      if (s.empty()) {
        throw DslError(DslError::Kind::kSyntax, start, "empty identifier");
      }
      out.push_back({Tok::kQuotedIdent, std::move(s), start});
    } else if (IsDigit(c) || ((c == '-' || c == '.') && i + 1 < src.size() &&
                              (IsDigit(src[i + 1]) || src[i + 1] == '.'))) {
      if (c == '-') ++i;
      while (i < src.size() && (IsDigit(src[i]) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        ++i;
        if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
        while (i < src.size() && IsDigit(src[i])) ++i;
      }
      out.push_back({Tok::kNumber, std::string(src.substr(start, i - start)), start});
    } else {
      auto two = src.substr(i, 2);
      if (two == ">=" || two == "<=" || two == "==" || two == "!=") {
        out.push_back({Tok::kOp, std::string(two), start});
        i += 2;
        continue;
      }
      ++i;
      switch (c) {
        case '(': out.push_back({Tok::kLParen, "(", start}); break;
        case ')': out.push_back({Tok::kRParen, ")", start}); break;
        case '[': out.push_back({Tok::kLBracket, "[", start}); break;
        case ']': out.push_back({Tok::kRBracket, "]", start}); break;
        case ',': out.push_back({Tok::kComma, ",", start}); break;
        case '.': out.push_back({Tok::kDot, ".", start}); break;
        case '>': out.push_back({Tok::kOp, ">", start}); break;
        case '<': out.push_back({Tok::kOp, "<", start}); break;
        default:
          throw DslError(DslError::Kind::kSyntax, start,
                         std::string("unexpected character '") + c + "'");
      }
    }
  }
}

bool IsKeyword(std::string_view s) {
  return s == "and" || s == "or" || s == "not" || s == "is" || s == "null" ||
         s == "true" || s == "false";
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(Lex(src)) {}

  Constraint ParseConstraintText() {
    const Token& verb_tok = Peek();
    if (verb_tok.kind != Tok::kIdent) Fail("expected constraint verb");
    auto verb = VerbFromName(verb_tok.text);
    if (!verb) {
      throw DslError(DslError::Kind::kUnknownVerb, verb_tok.offset,
                     "unknown verb '" + verb_tok.text + "'");
    }
    Advance();
    Expect(Tok::kLParen, "'('");
    Constraint c;
    c.verb = *verb;
    switch (c.verb) {
      case Verb::kHasCompleteness:
      case Verb::kHasMin:
      case Verb::kHasMax:
      case Verb::kHasMean:
      case Verb::kHasStandardDeviation:
      case Verb::kHasApproxCountDistinct:
        c.columns.push_back(ColumnArg());
        ArgSeparator();
        c.predicate = ParsePredicate();
        break;
      case Verb::kIsComplete:
      case Verb::kIsUnique:
        c.columns.push_back(ColumnArg());
        break;
      case Verb::kHasApproxQuantile: {
        c.columns.push_back(ColumnArg());
        ArgSeparator();
        size_t at = Peek().offset;
        c.quantile = ParseNumber();
        if (!(c.quantile >= 0.0 && c.quantile <= 1.0)) {
          throw DslError(DslError::Kind::kInvalid, at, "quantile must be in [0, 1]");
        }
        ArgSeparator();
        c.predicate = ParsePredicate();
        break;
      }
      case Verb::kIsContainedIn:
        c.columns.push_back(ColumnArg());
        ArgSeparator();
        c.allowed = ParseLiteralList();
        if (OptionalArgSeparator()) c.predicate = ParsePredicate();
        break;
      case Verb::kHasPattern:
        c.columns.push_back(ColumnArg());
        ArgSeparator();
        if (Peek().kind != Tok::kString) Fail("expected pattern string");
        c.pattern = Advance().text;
        if (OptionalArgSeparator()) c.predicate = ParsePredicate();
        break;
      case Verb::kHasSize:
        c.predicate = ParsePredicate();
        break;
      case Verb::kSatisfies: {
        size_t at = Peek().offset;
        c.row_expr = ParseOr();
        c.columns = c.row_expr->Columns();
        if (c.columns.empty()) {
          throw DslError(DslError::Kind::kArity, at,
                         "satisfies needs at least one column");
        }
        ArgSeparator();
        if (Peek().kind != Tok::kString) Fail("expected constraint name string");
        c.name = Advance().text;
        if (OptionalArgSeparator()) c.predicate = ParsePredicate();
        break;
      }
    }
    CloseArgs();
    if (Peek().kind == Tok::kDot) {
      Advance();
      if (Peek().kind != Tok::kIdent || Peek().text != "where") {
        Fail("expected 'where'");
      }
      Advance();
      Expect(Tok::kLParen, "'('");
      c.where = ParseOr();
      Expect(Tok::kRParen, "')'");
    }
    if (Peek().kind != Tok::kEnd) Fail("unexpected trailing input");
    return c;
  }

  Expr ParseExprText() {
    Expr e = ParseOr();
    if (Peek().kind != Tok::kEnd) Fail("unexpected trailing input");
    return e;
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Advance() { return tokens_[pos_++]; }

  [[noreturn]] void Fail(const std::string& what) const {
    const Token& t = Peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw DslError(DslError::Kind::kSyntax, t.offset, what + ", found " + found);
  }

  void Expect(Tok kind, const char* what) {
    if (Peek().kind != kind) Fail(std::string("expected ") + what);
    Advance();
  }

  bool IsWord(std::string_view w) const {
    return Peek().kind == Tok::kIdent && Peek().text == w;
  }

  void ArgSeparator() {
    if (Peek().kind == Tok::kRParen) {
      throw DslError(DslError::Kind::kArity, Peek().offset, "too few arguments");
    }
    Expect(Tok::kComma, "','");
  }

  bool OptionalArgSeparator() {
    if (Peek().kind != Tok::kComma) return false;
    Advance();
    return true;
  }

  void CloseArgs() {
    if (Peek().kind == Tok::kComma) {
      throw DslError(DslError::Kind::kArity, Peek().offset, "too many arguments");
    }
    Expect(Tok::kRParen, "')'");
  }

  std::string ColumnArg() {
    if (Peek().kind == Tok::kRParen) {
      throw DslError(DslError::Kind::kArity, Peek().offset, "too few arguments");
    }
    if (Peek().kind != Tok::kString) Fail("expected column name string");
    std::string name = Advance().text;
    if (name.empty()) {
      throw DslError(DslError::Kind::kInvalid, tokens_[pos_ - 1].offset,
                     "empty column name");
    }
    return name;
  }

  double ParseNumber() {
    if (Peek().kind != Tok::kNumber) Fail("expected number");
    const Token& t = Advance();
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() ||
        !std::isfinite(v)) {
      throw DslError(DslError::Kind::kSyntax, t.offset, "malformed number '" + t.text + "'");
    }
    return v;
  }

  Value ParseLiteral() {
    const Token& t = Peek();
    if (t.kind == Tok::kString) return Value::Text(Advance().text);
    if (t.kind == Tok::kIdent && (t.text == "true" || t.text == "false")) {
      return Value::Boolean(Advance().text == "true");
    }
    if (t.kind == Tok::kNumber) {
      bool integral = t.text.find_first_of(".eE") == std::string::npos;
      if (integral) {
        int64_t i = 0;
        auto [ptr, ec] =
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), i);
        if (ec == std::errc() && ptr == t.text.data() + t.text.size()) {
          Advance();
          return Value::Integer(i);
        }
      }
      return Value::Real(ParseNumber());
    }
    Fail("expected literal");
  }

  std::vector<Value> ParseLiteralList() {
    Expect(Tok::kLBracket, "'['");
    std::vector<Value> values;
    if (Peek().kind == Tok::kRBracket) {
      throw DslError(DslError::Kind::kInvalid, Peek().offset, "empty value set");
    }
    while (true) {
      values.push_back(ParseLiteral());
      if (Peek().kind == Tok::kComma) {
        Advance();
        continue;
      }
      Expect(Tok::kRBracket, "']'");
      return values;
    }
  }

  Predicate ParsePredicate() {
    const Token& t = Peek();
    if (t.kind == Tok::kOp) {
      std::string op = Advance().text;
      double v = ParseNumber();
      if (op == ">=") return Predicate::Make(Comparator::kGe, v);
      if (op == "<=") return Predicate::Make(Comparator::kLe, v);
      if (op == "==") return Predicate::Make(Comparator::kEq, v);
      if (op == "!=") return Predicate::Make(Comparator::kNe, v);
      if (op == ">") return Predicate::Make(Comparator::kGt, v);
      return Predicate::Make(Comparator::kLt, v);
    }
    if (IsWord("between")) {
      size_t at = Advance().offset;
      Expect(Tok::kLParen, "'('");
      double lo = ParseNumber();
      Expect(Tok::kComma, "','");
      double hi = ParseNumber();
      Expect(Tok::kRParen, "')'");
      if (lo > hi) {
        throw DslError(DslError::Kind::kInvalid, at, "between requires lo <= hi");
      }
      return Predicate::Between(lo, hi);
    }
    if (IsWord("in")) {
      size_t at = Advance().offset;
      Expect(Tok::kLParen, "'('");
      std::vector<double> set;
      if (Peek().kind == Tok::kRParen) {
        throw DslError(DslError::Kind::kInvalid, at, "empty predicate set");
      }
      while (true) {
        set.push_back(ParseNumber());
        if (Peek().kind == Tok::kComma) {
          Advance();
          continue;
        }
        Expect(Tok::kRParen, "')'");
        return Predicate::In(std::move(set));
      }
    }
    if (t.kind == Tok::kRParen) {
      throw DslError(DslError::Kind::kArity, t.offset, "too few arguments");
    }
    Fail("expected predicate");
  }

  Expr ParseOr() {
    Expr left = ParseAnd();
    while (IsWord("or")) {
      Advance();
      left = Expr::Or(std::move(left), ParseAnd());
    }
    return left;
  }

  Expr ParseAnd() {
    Expr left = ParseNot();
    while (IsWord("and")) {
      Advance();
      left = Expr::And(std::move(left), ParseNot());
    }
    return left;
  }

  Expr ParseNot() {
    if (IsWord("not")) {
      Advance();
      return Expr::Not(ParseNot());
    }
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    if (Peek().kind == Tok::kLParen) {
      Advance();
      Expr e = ParseOr();
      Expect(Tok::kRParen, "')'");
      return e;
    }
    std::string column;
    if (Peek().kind == Tok::kQuotedIdent) {
      column = Advance().text;
    } else if (Peek().kind == Tok::kIdent && !IsKeyword(Peek().text)) {
      column = Advance().text;
    } else {
      Fail("expected column reference");
    }
    if (IsWord("is")) {
      Advance();
      bool negated = false;
      if (IsWord("not")) {
        Advance();
        negated = true;
      }
      if (!IsWord("null")) Fail("expected 'null'");
      Advance();
      return Expr::IsNull(std::move(column), negated);
    }
    if (Peek().kind != Tok::kOp) Fail("expected comparison operator");
    std::string op = Advance().text;
    if (IsWord("null")) Fail("use 'is null' to test for nulls");
    Value lit = ParseLiteral();
    CmpOp cmp = op == "==" ? CmpOp::kEq
                : op == "!=" ? CmpOp::kNe
                : op == "<"  ? CmpOp::kLt
                : op == "<=" ? CmpOp::kLe
                : op == ">"  ? CmpOp::kGt
                             : CmpOp::kGe;
    return Expr::Compare(std::move(column), cmp, std::move(lit));
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

std::string QuoteString(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(ch);
    }
  }
  out.push_back('"');
  return out;
}

std::string RenderColumnRef(const std::string& name) {
  bool bare = !name.empty() && IsIdentStart(name[0]) && !IsKeyword(name) &&
              std::all_of(name.begin(), name.end(), IsIdentChar);
  if (bare) return name;
  std::string out = "`";
  for (char ch : name) {
    if (ch == '`') out.push_back('`');
    out.push_back(ch);
  }
  out.push_back('`');
  return out;
}

std::string_view CmpText(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "==";
    case CmpOp::kNe: return "!=";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
  }
  return "==";
}

int Precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kOr: return 1;
    case Expr::Kind::kAnd: return 2;
    case Expr::Kind::kNot: return 3;
    default: return 4;
  }
}

std::string RenderWrapped(const Expr& e, bool wrap) {
  std::string s = RenderExpr(e);
  return wrap ? "(" + s + ")" : s;
}

}  // namespace

std::string RenderLiteral(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kText:
      return QuoteString(v.as_text());
    case ValueKind::kNull:
      return "null";
    default:
      return v.ToString();
  }
}

std::string RenderExpr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kCompare:
      return RenderColumnRef(e.column) + " " + std::string(CmpText(e.op)) + " " +
             RenderLiteral(e.literal);
    case Expr::Kind::kIsNull:
      return RenderColumnRef(e.column) + (e.negated ? " is not null" : " is null");
    case Expr::Kind::kNot:
      return "not " + RenderWrapped(e.children[0], Precedence(e.children[0]) < 3);
    case Expr::Kind::kAnd:
    case Expr::Kind::kOr: {
      int p = Precedence(e);
      std::string kw = e.kind == Expr::Kind::kAnd ? " and " : " or ";
      return RenderWrapped(e.children[0], Precedence(e.children[0]) < p) + kw +
             RenderWrapped(e.children[1], Precedence(e.children[1]) <= p);
    }
  }
  return "";
}

std::string RenderPredicate(const Predicate& p) {
  switch (p.op) {
    case Comparator::kGe: return ">= " + FormatReal(p.value);
    case Comparator::kLe: return "<= " + FormatReal(p.value);
    case Comparator::kEq: return "== " + FormatReal(p.value);
    case Comparator::kGt: return "> " + FormatReal(p.value);
    case Comparator::kLt: return "< " + FormatReal(p.value);
    case Comparator::kNe: return "!= " + FormatReal(p.value);
    case Comparator::kBetween:
      return "between(" + FormatReal(p.value) + ", " + FormatReal(p.upper) + ")";
    case Comparator::kIn: {
      std::string out = "in(";
      for (size_t i = 0; i < p.set.size(); ++i) {
        if (i > 0) out += ", ";
        out += FormatReal(p.set[i]);
      }
      return out + ")";
    }
  }
  return "";
}

std::string RenderConstraint(const Constraint& c) {
  std::string out(VerbName(c.verb));
  out += "(";
  auto col = [&c]() { return QuoteString(c.columns.at(0)); };
  auto pred_suffix = [&c]() {
    return c.predicate ? ", " + RenderPredicate(*c.predicate) : std::string();
  };
  switch (c.verb) {
    case Verb::kIsComplete:
    case Verb::kIsUnique:
      out += col();
      break;
    case Verb::kHasApproxQuantile:
      out += col() + ", " + FormatReal(c.quantile) + ", " +
             RenderPredicate(c.EffectivePredicate());
      break;
    case Verb::kIsContainedIn: {
      out += col() + ", [";
      for (size_t i = 0; i < c.allowed.size(); ++i) {
        if (i > 0) out += ", ";
        out += RenderLiteral(c.allowed[i]);
      }
      out += "]" + pred_suffix();
      break;
    }
    case Verb::kHasPattern:
      out += col() + ", " + QuoteString(c.pattern) + pred_suffix();
      break;
    case Verb::kHasSize:
      out += RenderPredicate(c.EffectivePredicate());
      break;
    case Verb::kSatisfies:
      out += RenderExpr(*c.row_expr) + ", " + QuoteString(c.name) + pred_suffix();
      break;
    default:
      out += col() + ", " + RenderPredicate(c.EffectivePredicate());
      break;
  }
  out += ")";
  if (c.where) out += ".where(" + RenderExpr(*c.where) + ")";
  return out;
}

Constraint ParseConstraint(std::string_view text) {
  return Parser(text).ParseConstraintText();
}

Expr ParseExpr(std::string_view text) { return Parser(text).ParseExprText(); }

}  // namespace taskdv::dsl
