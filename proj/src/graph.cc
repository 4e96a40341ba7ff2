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

#include "taskdv/graph.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "taskdv/text.h"

namespace taskdv {

namespace {

constexpr std::string_view kMarkerTag = "# TASKDV_COL[";
constexpr std::string_view kMarkerPrefix = " # TASKDV_COL[";

void SortUnique(std::vector<CodeSpan>* spans) {
  std::sort(spans->begin(), spans->end());
  spans->erase(std::unique(spans->begin(), spans->end()), spans->end());
}

std::string_view KindText(AssumptionKind k) {
  return k == AssumptionKind::kMultiColumn ? "multi_column" : "single_column";
}

nlohmann::ordered_json SpanJson(const CodeSpan& s) {
  nlohmann::ordered_json j;
  j["file"] = s.file;
  j["start_line"] = s.start_line;
  j["end_line"] = s.end_line;
  return j;
}

}  // namespace

ColumnNode CanonicalNode(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

std::string NodeKey(const ColumnNode& node) { return Join(node, "+"); }

void AssumptionGraph::AddColumnNode(std::vector<std::string> names) {
  ColumnNode node = CanonicalNode(std::move(names));
  if (node.empty()) throw std::invalid_argument("empty column node");
  if (!HasColumnNode(node)) nodes_.push_back(std::move(node));
}

bool AssumptionGraph::HasColumnNode(const ColumnNode& node) const {
  return std::find(nodes_.begin(), nodes_.end(), node) != nodes_.end();
}

void AssumptionGraph::Link(const ColumnNode& node, const Assumption& assumption,
                           const std::vector<CodeSpan>& spans) {
  if (!HasColumnNode(node)) {
    throw std::invalid_argument("unknown column node '" + NodeKey(node) + "'");
  }
  if (assumption.text.empty()) throw std::invalid_argument("empty assumption text");
  for (const CodeSpan& s : spans) {
    if (s.start_line < 1 || s.start_line > s.end_line) {
      throw std::invalid_argument("invalid span");
    }
  }
  if (const Assumption* existing = FindAssumption(assumption.id)) {
    if (!(*existing == assumption)) {
      throw std::invalid_argument("assumption id '" + assumption.id +
                                  "' already bound to different content");
    }
  } else {
    assumptions_.push_back(assumption);
  }
  for (GraphEdge& e : edges_) {
    if (e.column == node && e.assumption_id == assumption.id) {
      e.spans.insert(e.spans.end(), spans.begin(), spans.end());
      SortUnique(&e.spans);
      return;
    }
  }
  GraphEdge edge{node, assumption.id, spans};
  SortUnique(&edge.spans);
  edges_.push_back(std::move(edge));
}

const Assumption* AssumptionGraph::FindAssumption(std::string_view id) const {
  for (const Assumption& a : assumptions_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

std::vector<const Assumption*> AssumptionGraph::AssumptionsOf(
    const ColumnNode& node) const {
  std::vector<const Assumption*> out;
  for (const GraphEdge& e : edges_) {
    if (e.column == node) out.push_back(FindAssumption(e.assumption_id));
  }
  return out;
}

std::vector<CodeSpan> AssumptionGraph::SpansOf(std::string_view assumption_id) const {
  std::vector<CodeSpan> out;
  for (const GraphEdge& e : edges_) {
    if (e.assumption_id == assumption_id) {
      out.insert(out.end(), e.spans.begin(), e.spans.end());
    }
  }
  SortUnique(&out);
  return out;
}

void AssumptionGraph::CheckInvariants() const {
  std::set<std::string> linked;
  for (const GraphEdge& e : edges_) {
    if (!HasColumnNode(e.column) || FindAssumption(e.assumption_id) == nullptr) {
      throw std::logic_error("edge endpoint missing");
    }
    linked.insert(e.assumption_id);
  }
  for (const Assumption& a : assumptions_) {
    if (!linked.count(a.id)) {
      throw std::logic_error("assumption '" + a.id + "' has no edge");
    }
  }
}

BacktraceResult Backtrace(const AssumptionGraph& g, const dsl::DataUnitTest& test,
                          std::string_view constraint_id) {
  const dsl::Constraint* c = test.find(constraint_id);
  if (c == nullptr) {
    throw std::invalid_argument("unknown constraint id '" + std::string(constraint_id) +
                                "'");
  }
  BacktraceResult out;
  std::set<std::string> seen;
  for (const std::string& id : c->assumption_ids) {
    const Assumption* a = g.FindAssumption(id);
    if (a == nullptr || !seen.insert(id).second) continue;
    out.assumptions.push_back(*a);
    std::vector<CodeSpan> spans = g.SpansOf(id);
    out.spans.insert(out.spans.end(), spans.begin(), spans.end());
  }
  SortUnique(&out.spans);
  return out;
}

nlohmann::ordered_json GraphToJson(const AssumptionGraph& g) {
  nlohmann::ordered_json j;
  j["columns"] = g.column_nodes();
  auto as = nlohmann::ordered_json::array();
  for (const Assumption& a : g.assumptions()) {
    nlohmann::ordered_json e;
    e["id"] = a.id;
    e["text"] = a.text;
    e["kind"] = std::string(KindText(a.kind));
    as.push_back(e);
  }
  j["assumptions"] = as;
  auto es = nlohmann::ordered_json::array();
  for (const GraphEdge& edge : g.edges()) {
    nlohmann::ordered_json e;
    e["column"] = edge.column;
    e["assumption_id"] = edge.assumption_id;
    auto spans = nlohmann::ordered_json::array();
    for (const CodeSpan& s : edge.spans) spans.push_back(SpanJson(s));
    e["spans"] = spans;
    es.push_back(e);
  }
  j["edges"] = es;
  return j;
}

AssumptionGraph GraphFromJson(const nlohmann::json& j) {
  AssumptionGraph g;
  for (const auto& node : j.at("columns")) {
    g.AddColumnNode(node.get<std::vector<std::string>>());
  }
  std::map<std::string, Assumption> by_id;
  for (const auto& a : j.at("assumptions")) {
    Assumption as;
    as.id = a.at("id").get<std::string>();
    as.text = a.at("text").get<std::string>();
    std::string kind = a.at("kind").get<std::string>();
    if (kind == "multi_column") {
      as.kind = AssumptionKind::kMultiColumn;
    } else if (kind != "single_column") {
      throw std::invalid_argument("unknown assumption kind '" + kind + "'");
    }
    by_id[as.id] = as;
  }
  for (const auto& e : j.at("edges")) {
    std::string id = e.at("assumption_id").get<std::string>();
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::invalid_argument("edge to unknown assumption");
    std::vector<CodeSpan> spans;
    for (const auto& s : e.at("spans")) {
      spans.push_back({s.at("file").get<std::string>(), s.at("start_line").get<int>(),
                       s.at("end_line").get<int>()});
    }
    g.Link(CanonicalNode(e.at("column").get<std::vector<std::string>>()), it->second,
           spans);
  }
  g.CheckInvariants();
  return g;
}

std::string AnnotateCode(std::string_view source, const ColumnSpans& spans) {
  if (source.find(kMarkerTag) != std::string_view::npos) {
    throw std::invalid_argument("source already contains column markers");
  }
  std::vector<std::string> lines = SplitLinesKeepEnds(source);
  std::vector<std::set<std::string>> cols(lines.size());
  for (const auto& [name, list] : spans) {
    if (name.empty() || name.find_first_of(",]\r\n") != std::string::npos) {
      throw std::invalid_argument("column name '" + name + "' cannot be used in a marker");
    }
    for (const CodeSpan& s : list) {
      if (s.start_line < 1 || s.end_line < s.start_line ||
          static_cast<size_t>(s.end_line) > lines.size()) {
        throw std::out_of_range("span " + std::to_string(s.start_line) + "-" +
                                std::to_string(s.end_line) + " outside source of " +
                                std::to_string(lines.size()) + " lines");
      }
      for (int l = s.start_line; l <= s.end_line; ++l) cols[l - 1].insert(name);
    }
  }
  std::string out;
  out.reserve(source.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    if (cols[i].empty()) {
      out += lines[i];
      continue;
    }
    auto [body, term] = SplitTerminator(lines[i]);
    out += body;
    out += kMarkerPrefix;
    out += Join({cols[i].begin(), cols[i].end()}, ",");
    out += "]";
    out += term;
  }
  return out;
}

std::string StripAnnotations(std::string_view annotated) {
  std::string out;
  out.reserve(annotated.size());
  for (const std::string& line : SplitLinesKeepEnds(annotated)) {
    auto [body, term] = SplitTerminator(line);
    size_t at = body.find(kMarkerPrefix);
    if (at != std::string_view::npos && !body.empty() && body.back() == ']') {
      body = body.substr(0, at);
    }
    out += body;
    out += term;
  }
  return out;
}

}  // namespace taskdv
