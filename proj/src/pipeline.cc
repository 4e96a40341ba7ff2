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

#include "taskdv/pipeline.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "taskdv/parallel.h"
#include "taskdv/text.h"

namespace taskdv {

namespace {

using nlohmann::json;

std::string ArrayOf(const json& j, const char* key, const char* item_desc,
                    const std::function<bool(const json&)>& item_ok) {
  if (!j.is_object() || !j.contains(key)) return std::string("missing key \"") + key + "\"";
  const json& a = j[key];
  if (!a.is_array()) return std::string("\"") + key + "\" must be an array";
  for (const json& e : a) {
    if (!item_ok(e)) return std::string("every item of \"") + key + "\" must be " + item_desc;
  }
  return "";
}

bool IsSpan(const json& s) {
  return s.is_object() && s.contains("start_line") && s.contains("end_line") &&
         s["start_line"].is_number_integer() && s["end_line"].is_number_integer();
}

bool IsSpanList(const json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), IsSpan);
}

std::string CheckColumns(const json& j) {
  return ArrayOf(j, "columns", "a string", [](const json& e) { return e.is_string(); });
}

std::string CheckColumnSets(const json& j) {
  return ArrayOf(j, "column_sets", "an array of strings", [](const json& e) {
    return e.is_array() &&
           std::all_of(e.begin(), e.end(), [](const json& x) { return x.is_string(); });
  });
}

std::string CheckSpans(const json& j) {
  return ArrayOf(j, "spans", "an object with integer start_line and end_line", IsSpan);
}

std::string CheckAssumptions(const json& j) {
  return ArrayOf(j, "assumptions", "an object with a text string", [](const json& e) {
    return e.is_object() && e.contains("text") && e["text"].is_string() &&
           (!e.contains("spans") || IsSpanList(e["spans"]));
  });
}

std::string CheckConstraints(const json& j) {
  return ArrayOf(j, "constraints", "a string or an object with a text string",
                 [](const json& e) {
                   if (e.is_string()) return true;
                   if (!e.is_object() || !e.contains("text") || !e["text"].is_string()) {
                     return false;
                   }
                   if (!e.contains("assumption_ids")) return true;
                   const json& ids = e["assumption_ids"];
                   return ids.is_array() && std::all_of(ids.begin(), ids.end(),
                                                        [](const json& x) { return x.is_string(); });
                 });
}

size_t LineCount(std::string_view source) { return SplitLinesKeepEnds(source).size(); }

void MergeIds(std::vector<std::string>* into, const std::vector<std::string>& more) {
  for (const std::string& id : more) {
    if (std::find(into->begin(), into->end(), id) == into->end()) into->push_back(id);
  }
}

}  // namespace

void WarningLog::Add(std::string message) {
  std::lock_guard<std::mutex> lock(mu_);
  items_.push_back(std::move(message));
}

std::vector<std::string> WarningLog::Take() {
  std::lock_guard<std::mutex> lock(mu_);
  return std::exchange(items_, {});
}

std::string NumberLines(std::string_view source) {
  std::vector<std::string> lines = SplitLinesKeepEnds(source);
  size_t width = std::to_string(std::max<size_t>(lines.size(), 1)).size();
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string num = std::to_string(i + 1);
    out += std::string(width - num.size(), ' ') + num + "| ";
    out += SplitTerminator(lines[i]).first;
    out += "\n";
  }
  return out;
}

json ExtractJson(std::string_view reply) {
  size_t open = reply.find('{');
  size_t close = reply.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    return json::parse(reply);
  }
  return json::parse(reply.substr(open, close - open + 1));
}

Generator::Generator(Backend& backend, PromptSet prompts, PipelineOptions options)
    : backend_(backend), prompts_(std::move(prompts)), options_(std::move(options)) {}

json Generator::Ask(std::string_view method, const Bindings& bindings, const std::string& task,
                    const std::string& subject,
                    const std::function<std::string(const json&)>& check) {
  const std::string base = RenderTemplate(prompts_.at(method), bindings);
  std::string prompt = base;
  std::string problem;
  for (int attempt = 0; attempt <= options_.max_reasks; ++attempt) {
    ModelRequest req{std::string(method), prompt, task, subject, options_.decoding};
    ++calls_;
    ModelResponse resp;
    try {
      resp = backend_.Complete(req);
    } catch (const BackendError& e) {
      throw GenerationError(std::string(method) + " [" + req.TranscriptKey() + "]: " + e.what());
    }
    try {
      json reply = ExtractJson(resp.text);
      problem = check(reply);
      if (problem.empty()) return reply;
    } catch (const json::exception&) {
      problem = "the reply is not a JSON object";
    }
    prompt = base + "\n\nYour previous reply could not be used: " + problem +
             ". Reply again with only the JSON object described above.";
  }
  throw GenerationError(std::string(method) + " [" + task + "." + subject +
                        "]: malformed reply after " + std::to_string(options_.max_reasks) +
                        " re-asks: " + problem);
}

std::vector<std::string> Generator::DiscoverColumnAccess(const GenerationContext& ctx) {
  if (ctx.columns.empty()) return {};
  Bindings b = {{"columns", Join(ctx.columns, ", ")},
                {"profile", ProfileSummary(ctx.profile)},
                {"code", NumberLines(ctx.source)}};
  json reply = Ask(kDiscoverColumnAccess, b, ctx.task_id, "", CheckColumns);
  std::set<std::string> named;
  for (const json& c : reply["columns"]) {
    std::string name = c.get<std::string>();
    if (std::find(ctx.columns.begin(), ctx.columns.end(), name) == ctx.columns.end()) {
      warnings_.Add(ctx.task_id + ": ignoring unknown column '" + name + "'");
      continue;
    }
    named.insert(name);
  }
  std::vector<std::string> out;
  for (const std::string& c : ctx.columns) {
    if (named.count(c)) out.push_back(c);
  }
  return out;
}

std::vector<ColumnNode> Generator::DiscoverJointColumnAccess(
    const GenerationContext& ctx, const std::vector<std::string>& accessed) {
  if (accessed.size() < 2) return {};
  std::vector<std::string> names = accessed;
  Bindings b = {{"columns", Join(names, ", ")},
                {"profile", ProfileSummary(ctx.profile, names)},
                {"code", NumberLines(ctx.source)}};
  json reply = Ask(kDiscoverJointColumnAccess, b, ctx.task_id, "", CheckColumnSets);
  std::vector<ColumnNode> out;
  for (const json& set : reply["column_sets"]) {
    std::vector<std::string> members;
    for (const json& c : set) {
      std::string name = c.get<std::string>();
      if (std::find(accessed.begin(), accessed.end(), name) == accessed.end()) {
        warnings_.Add(ctx.task_id + ": dropping column '" + name +
                      "' from joint set, not among accessed columns");
        continue;
      }
      members.push_back(name);
    }
    ColumnNode node = CanonicalNode(std::move(members));
    if (node.size() < 2) continue;
    if (std::find(out.begin(), out.end(), node) == out.end()) out.push_back(std::move(node));
  }
  return out;
}

std::vector<CodeSpan> Generator::ParseSpans(const GenerationContext& ctx, const json& spans,
                                            std::string_view what) {
  const int n = static_cast<int>(LineCount(ctx.source));
  std::vector<CodeSpan> out;
  for (const json& s : spans) {
    int start = s["start_line"].get<int>();
    int end = s["end_line"].get<int>();
    if (start > end || end < 1 || start > n) {
      warnings_.Add(ctx.task_id + ": dropping span " + std::to_string(start) + "-" +
                    std::to_string(end) + " for " + std::string(what) + " outside 1-" +
                    std::to_string(n));
      continue;
    }
    if (start < 1 || end > n) {
      warnings_.Add(ctx.task_id + ": clipping span " + std::to_string(start) + "-" +
                    std::to_string(end) + " for " + std::string(what));
    }
    out.push_back({ctx.task_file, std::max(start, 1), std::min(end, n)});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CodeSpan> Generator::ColumnDataflow(const GenerationContext& ctx,
                                                const std::string& column) {
  Bindings b = {{"column", column}, {"code", NumberLines(ctx.source)}};
  json reply = Ask(kColumnDataflow, b, ctx.task_id, column, CheckSpans);
  return ParseSpans(ctx, reply["spans"], column);
}

std::vector<CodeSpan> Generator::MultiColumnDataflow(const GenerationContext& ctx,
                                                     const ColumnNode& columns) {
  Bindings b = {{"columns", Join(columns, ", ")}, {"code", NumberLines(ctx.source)}};
  json reply = Ask(kMultiColumnDataflow, b, ctx.task_id, NodeKey(columns), CheckSpans);
  return ParseSpans(ctx, reply["spans"], NodeKey(columns));
}

std::vector<std::pair<Assumption, std::vector<CodeSpan>>> Generator::SummarizeAndLink(
    GenerationContext& ctx, const ColumnNode& node, const std::vector<CodeSpan>& node_spans,
    const std::string& annotated) {
  if (node_spans.empty()) return {};
  const std::string key = NodeKey(node);
  Bindings b = {{"column", Join(node, ", ")},
                {"annotated_code", NumberLines(annotated)},
                {"profile", ProfileSummary(ctx.profile, node)}};
  json reply = Ask(kSummarizeLink, b, ctx.task_id, key, CheckAssumptions);
  std::vector<std::pair<Assumption, std::vector<CodeSpan>>> out;
  for (const json& a : reply["assumptions"]) {
    std::string text(Trim(a["text"].get<std::string>()));
    if (text.empty()) {
      warnings_.Add(ctx.task_id + ": skipping empty assumption for " + key);
      continue;
    }
    Assumption as;
    as.id = key + "#" + std::to_string(out.size() + 1);
    as.text = text;
    as.kind = node.size() > 1 ? AssumptionKind::kMultiColumn : AssumptionKind::kSingleColumn;
    std::vector<CodeSpan> spans;
    if (a.contains("spans")) spans = ParseSpans(ctx, a["spans"], key);
    if (spans.empty()) spans = node_spans;
    out.emplace_back(std::move(as), std::move(spans));
  }
  if (!ctx.graph.HasColumnNode(node)) ctx.graph.AddColumnNode(node);
  for (const auto& [as, spans] : out) ctx.graph.Link(node, as, spans);
  return out;
}

std::vector<dsl::Constraint> Generator::GenerateFor(const GenerationContext& ctx,
                                                    const ColumnNode& node,
                                                    size_t* unparseable) {
  if (!ctx.graph.HasColumnNode(node)) {
    throw std::invalid_argument("column node '" + NodeKey(node) + "' not in graph");
  }
  std::vector<const Assumption*> assumptions = ctx.graph.AssumptionsOf(node);
  if (assumptions.empty()) return {};
  std::string listing;
  std::vector<std::string> all_ids;
  for (const Assumption* a : assumptions) {
    listing += "- " + a->id + ": " + a->text + "\n";
    all_ids.push_back(a->id);
  }
  const bool multi = node.size() > 1;
  Bindings b = {{"assumptions", listing},
                {"profile", ProfileSummary(ctx.profile, node)},
                {"grammar", std::string(GrammarSummary())}};
  if (multi) {
    b["columns"] = Join(node, ", ");
  } else {
    b["column"] = node[0];
  }
  json reply = Ask(multi ? kGenMultiColumnConstraints : kGenColumnConstraints, b, ctx.task_id,
                   NodeKey(node), CheckConstraints);
  std::vector<dsl::Constraint> out;
  for (const json& e : reply["constraints"]) {
    std::string text = e.is_string() ? e.get<std::string>() : e["text"].get<std::string>();
    dsl::Constraint c;
    try {
      c = dsl::ParseConstraint(text);
    } catch (const dsl::DslError& err) {
      warnings_.Add(ctx.task_id + ": unparseable constraint for " + NodeKey(node) + ": " +
                    text + " (" + err.what() + ")");
      if (unparseable != nullptr) ++*unparseable;
      continue;
    }
    if (e.is_object() && e.contains("assumption_ids")) {
      for (const json& id : e["assumption_ids"]) {
        std::string s = id.get<std::string>();
        if (std::find(all_ids.begin(), all_ids.end(), s) != all_ids.end()) {
          MergeIds(&c.assumption_ids, {s});
        }
      }
    }
    if (c.assumption_ids.empty()) c.assumption_ids = all_ids;
    auto dup = std::find_if(out.begin(), out.end(),
                            [&c](const dsl::Constraint& o) { return dsl::SameAst(o, c); });
    if (dup != out.end()) {
      MergeIds(&dup->assumption_ids, c.assumption_ids);
    } else {
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<dsl::Constraint> Generator::GenerateColumnConstraints(const GenerationContext& ctx,
                                                                  const std::string& column,
                                                                  size_t* unparseable) {
  return GenerateFor(ctx, {column}, unparseable);
}

std::vector<dsl::Constraint> Generator::GenerateMultiColumnConstraints(
    const GenerationContext& ctx, const ColumnNode& columns, size_t* unparseable) {
  return GenerateFor(ctx, CanonicalNode(columns), unparseable);
}

GenerationResult Generator::GenerateUnitTest(const std::string& task_id,
                                             const std::string& task_file,
                                             const std::string& source,
                                             const Dataset& sample) {
  const size_t calls_before = calls_;
  GenerationResult result;
  GenerationContext ctx;
  ctx.task_id = task_id;
  ctx.task_file = task_file;
  ctx.source = source;
  ctx.profile = ProfileData(sample, options_.profile);
  ctx.columns = sample.column_names();

  std::atomic<size_t> failed{0};
  auto guarded = [this, &failed](const std::string& what, auto&& fn) {
    try {
      return std::optional(fn());
    } catch (const GenerationError& e) {
      warnings_.Add(std::string("generation failed for ") + what + ": " + e.what());
      ++failed;
      return std::optional<decltype(fn())>();
    }
  };

  result.accessed =
      guarded(task_id + " column access", [&] { return DiscoverColumnAccess(ctx); })
          .value_or(std::vector<std::string>{});
  result.joint = guarded(task_id + " joint column access", [&] {
                   return DiscoverJointColumnAccess(ctx, result.accessed);
                 }).value_or(std::vector<ColumnNode>{});

  std::vector<ColumnNode> nodes;
  for (const std::string& c : result.accessed) nodes.push_back({c});
  nodes.insert(nodes.end(), result.joint.begin(), result.joint.end());
  for (const ColumnNode& n : nodes) ctx.graph.AddColumnNode(n);

  const size_t par = options_.parallelism;
  auto spans = ParallelMap<std::optional<std::vector<CodeSpan>>>(
      nodes.size(), par, [&](size_t i) {
        return guarded(task_id + "." + NodeKey(nodes[i]) + " dataflow", [&] {
          return nodes[i].size() == 1 ? ColumnDataflow(ctx, nodes[i][0])
                                      : MultiColumnDataflow(ctx, nodes[i]);
        });
      });

  ColumnSpans by_column;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!spans[i]) continue;
    for (const std::string& c : nodes[i]) {
      auto& list = by_column[c];
      list.insert(list.end(), spans[i]->begin(), spans[i]->end());
    }
  }
  std::string annotated;
  try {
    annotated = AnnotateCode(source, by_column);
  } catch (const std::invalid_argument& e) {
    warnings_.Add(task_id + ": annotation skipped: " + e.what());
    annotated = source;
  }

  // Summaries run against per-worker graphs; the coordinator links them in
  // node order so assumption ids and edge order are deterministic.
  using Summary = std::vector<std::pair<Assumption, std::vector<CodeSpan>>>;
  auto summaries = ParallelMap<std::optional<Summary>>(nodes.size(), par, [&](size_t i) {
    if (!spans[i]) return std::optional<Summary>();
    return guarded(task_id + "." + NodeKey(nodes[i]) + " assumptions", [&] {
      GenerationContext local;
      local.task_id = ctx.task_id;
      local.task_file = ctx.task_file;
      local.source = ctx.source;
      local.profile = ctx.profile;
      local.columns = ctx.columns;
      return SummarizeAndLink(local, nodes[i], *spans[i], annotated);
    });
  });
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!summaries[i]) continue;
    for (const auto& [as, sp] : *summaries[i]) ctx.graph.Link(nodes[i], as, sp);
  }

  std::atomic<size_t> unparseable{0};
  auto generated = ParallelMap<std::optional<std::vector<dsl::Constraint>>>(
      nodes.size(), par, [&](size_t i) {
        return guarded(task_id + "." + NodeKey(nodes[i]) + " constraints", [&] {
          size_t bad = 0;
          auto out = GenerateFor(ctx, nodes[i], &bad);
          unparseable += bad;
          return out;
        });
      });

  std::vector<dsl::Constraint> candidates;
  for (const auto& list : generated) {
    if (!list) continue;
    for (const dsl::Constraint& c : *list) {
      auto dup = std::find_if(candidates.begin(), candidates.end(),
                              [&c](const dsl::Constraint& o) { return dsl::SameAst(o, c); });
      if (dup != candidates.end()) {
        MergeIds(&dup->assumption_ids, c.assumption_ids);
      } else {
        candidates.push_back(c);
      }
    }
  }

  GenerationStats& stats = result.stats;
  stats.generated = candidates.size();
  stats.non_executable = unparseable;
  result.test.id = task_id;
  result.test.task_id = task_id;
  for (dsl::Constraint& c : candidates) {
    dsl::PrecheckResult pre = dsl::PrecheckConstraint(c, sample, options_.eval);
    if (!pre.accepted) {
      ++stats.discarded;
      ++stats.discard_reasons[pre.reason];
      if (pre.reason != "fails_on_sample") ++stats.non_executable;
      continue;
    }
    c.id = "c" + std::to_string(result.test.constraints.size() + 1);
    result.test.constraints.push_back(std::move(c));
  }
  result.graph = std::move(ctx.graph);
  stats.failed_nodes = failed;
  stats.model_calls = calls_ - calls_before;
  return result;
}

dsl::DataUnitTest SuggestTaskAgnostic(const DataProfile& profile, const std::string& test_id) {
  using dsl::Comparator;
  using dsl::Constraint;
  using dsl::Predicate;
  using dsl::Verb;
  dsl::DataUnitTest t;
  t.id = test_id;
  t.task_id = test_id;
  auto add = [&t](Constraint c) {
    c.id = "s" + std::to_string(t.constraints.size() + 1);
    t.constraints.push_back(std::move(c));
  };
  for (const ColumnProfile& col : profile.columns) {
    Constraint base;
    base.columns = {col.name};
    if (col.row_count > 0) {
      if (col.completeness == 1.0) {
        Constraint c = base;
        c.verb = Verb::kIsComplete;
        add(c);
      } else {
        double floor2 = std::floor(col.completeness * 100.0 + 1e-9) / 100.0;
        if (floor2 > col.completeness) floor2 -= 0.01;
        if (floor2 > 0) {
          Constraint c = base;
          c.verb = Verb::kHasCompleteness;
          c.predicate = Predicate::Make(Comparator::kGe, floor2);
          add(c);
        }
      }
    }
    if (col.histogram && !col.histogram->empty()) {
      Constraint c = base;
      c.verb = Verb::kIsContainedIn;
      for (const auto& [v, n] : *col.histogram) c.allowed.push_back(v);
      add(c);
    }
    if (col.min && col.max) {
      Constraint lo = base;
      lo.verb = Verb::kHasMin;
      lo.predicate = Predicate::Make(Comparator::kGe, *col.min);
      add(lo);
      Constraint hi = base;
      hi.verb = Verb::kHasMax;
      hi.predicate = Predicate::Make(Comparator::kLe, *col.max);
      add(hi);
    }
    if (col.non_null_count > 0 &&
        col.approx_distinct >= 0.99 * static_cast<double>(col.non_null_count)) {
      Constraint c = base;
      c.verb = Verb::kIsUnique;
      add(c);
    }
  }
  return t;
}

nlohmann::ordered_json StatsToJson(const GenerationStats& s) {
  nlohmann::ordered_json j;
  j["generated"] = s.generated;
  j["discarded"] = s.discarded;
  j["non_executable"] = s.non_executable;
  nlohmann::ordered_json reasons = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.discard_reasons) reasons[k] = v;
  j["discard_reasons"] = reasons;
  j["model_calls"] = s.model_calls;
  j["failed_nodes"] = s.failed_nodes;
  return j;
}

}  // namespace taskdv
