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

// Bipartite graph between column nodes (single columns or column sets) and
// natural-language assumptions, with code spans on the edges. Also the
// line-marker annotation used to show a model which lines touch which
// columns.

#ifndef TASKDV_GRAPH_H_
#define TASKDV_GRAPH_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "taskdv/dsl.h"

namespace taskdv {

struct CodeSpan {
  std::string file;
  int start_line = 1;  // 1-based, inclusive
  int end_line = 1;

  friend bool operator==(const CodeSpan&, const CodeSpan&) = default;
  friend auto operator<=>(const CodeSpan&, const CodeSpan&) = default;
};

enum class AssumptionKind { kSingleColumn, kMultiColumn };

struct Assumption {
  std::string id;
  std::string text;
  AssumptionKind kind = AssumptionKind::kSingleColumn;

  friend bool operator==(const Assumption&, const Assumption&) = default;
};

// Sorted, duplicate-free column names.
using ColumnNode = std::vector<std::string>;

ColumnNode CanonicalNode(std::vector<std::string> names);
// "a" for a single column, "a+b" for a set.
std::string NodeKey(const ColumnNode& node);

struct GraphEdge {
  ColumnNode column;
  std::string assumption_id;
  std::vector<CodeSpan> spans;  // sorted, deduplicated

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

class AssumptionGraph {
 public:
  // Registering an existing node is a no-op.
  void AddColumnNode(std::vector<std::string> names);
  bool HasColumnNode(const ColumnNode& node) const;

  // Adds the assumption (if new) and an edge from `node`, merging spans into
  // an existing edge. Relinking identical input leaves the graph unchanged.
  // Throws std::invalid_argument for an unregistered node, empty text, or an
  // id already bound to different text or kind.
  void Link(const ColumnNode& node, const Assumption& assumption,
            const std::vector<CodeSpan>& spans);

  const std::vector<ColumnNode>& column_nodes() const { return nodes_; }
  const std::vector<Assumption>& assumptions() const { return assumptions_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  const Assumption* FindAssumption(std::string_view id) const;
  // Assumptions attached to a node, in link order.
  std::vector<const Assumption*> AssumptionsOf(const ColumnNode& node) const;
  // Spans of every edge touching the assumption, sorted and deduplicated.
  std::vector<CodeSpan> SpansOf(std::string_view assumption_id) const;

  // Throws std::logic_error when bipartiteness or edge coverage is violated.
  void CheckInvariants() const;

  friend bool operator==(const AssumptionGraph&, const AssumptionGraph&) = default;

 private:
  std::vector<ColumnNode> nodes_;
  std::vector<Assumption> assumptions_;
  std::vector<GraphEdge> edges_;
};

struct BacktraceResult {
  std::vector<Assumption> assumptions;
  std::vector<CodeSpan> spans;
};

// Throws std::invalid_argument for an unknown constraint id. Assumption ids
// not present in the graph are skipped.
BacktraceResult Backtrace(const AssumptionGraph& g, const dsl::DataUnitTest& test,
                          std::string_view constraint_id);

nlohmann::ordered_json GraphToJson(const AssumptionGraph& g);
AssumptionGraph GraphFromJson(const nlohmann::json& j);

// Column name -> spans. Each covered line gets a trailing
// ` # TASKDV_COL[a,b]` marker listing its columns in name order.
using ColumnSpans = std::map<std::string, std::vector<CodeSpan>>;

// Throws std::out_of_range for a span outside the source and
// std::invalid_argument when the source already contains a marker.
std::string AnnotateCode(std::string_view source, const ColumnSpans& spans);
std::string StripAnnotations(std::string_view annotated);

}  // namespace taskdv

#endif  // TASKDV_GRAPH_H_
