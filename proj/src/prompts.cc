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

#include "taskdv/prompts.h"

#include <algorithm>

#include "taskdv/text.h"

namespace taskdv {

namespace {

constexpr std::string_view kGrammar = R"(Constraint forms (one per string):
  hasCompleteness("col", >= 0.95)        fraction of non-null values
  isComplete("col")                      no nulls
  isUnique("col")                        no duplicate non-null values
  hasMin("col", >= 0) / hasMax("col", <= 100)
  hasMean("col", between(1, 10)) / hasStandardDeviation("col", > 0)
  hasApproxCountDistinct("col", <= 50)
  hasApproxQuantile("col", 0.5, <= 1000)
  isContainedIn("col", ["A", "B"])       optional ratio predicate, default == 1.0
  hasPattern("col", "[A-Z]{2}")          full-match regex, optional ratio predicate
  hasSize(>= 1)                          row count
  satisfies(<row condition>, "name")     fraction of rows where the condition holds
Predicates: >= x, <= x, == x, > x, < x, != x, between(lo, hi), in(a, b).
Any constraint may end with .where(<row condition>) to restrict the rows.
Row conditions: col == "text", col > 3, col is null, col is not null,
combined with and / or / not and parentheses. Use `backticks` for column
names that are not plain identifiers.)";

const std::map<std::string, std::string, std::less<>>& DefaultTemplates() {
  static const std::map<std::string, std::string, std::less<>> t = {
      {std::string(kDiscoverColumnAccess),
       R"P(You review a data processing script that runs on a table.
Table columns: {{columns}}

Data profile:
{{profile}}

Script (line numbers on the left):
{{code}}

List every table column the script reads, directly or through derived
variables. Reply with JSON only: {"columns": ["col", ...]})P"},
      {std::string(kDiscoverJointColumnAccess),
       R"P(You review a data processing script that runs on a table.
Columns read by the script: {{columns}}

Data profile:
{{profile}}

Script (line numbers on the left):
{{code}}

Find groups of two or more columns whose values the script combines in one
computation or condition (for example a filter on one column followed by use
of another). Reply with JSON only:
{"column_sets": [["col_a", "col_b"], ...]})P"},
      {std::string(kColumnDataflow),
       R"P(Script (line numbers on the left):
{{code}}

Find every line that operates on column "{{column}}" or on values derived
from it, including later uses of variables that hold it. Reply with JSON only:
{"spans": [{"start_line": 3, "end_line": 4}, ...]})P"},
      {std::string(kMultiColumnDataflow),
       R"P(Script (line numbers on the left):
{{code}}

Find every line where the columns {{columns}} are used together, including
filters on one of them that determine how the others are used. Reply with
JSON only: {"spans": [{"start_line": 3, "end_line": 4}, ...]})P"},
      {std::string(kSummarizeLink),
       R"P(The script below has trailing markers naming the table columns each
line operates on.
{{annotated_code}}

Data profile:
{{profile}}

State the assumptions the script makes about {{column}}: conditions the data
must meet for the script to run without crashing and produce sensible
results. Only report assumptions the code actually relies on. Reply with JSON
only:
{"assumptions": [{"text": "...", "spans": [{"start_line": 3, "end_line": 4}]}]})P"},
      {std::string(kGenColumnConstraints),
       R"P(Write data validation constraints for column "{{column}}".

Assumptions the downstream code makes (with ids):
{{assumptions}}

Data profile:
{{profile}}

{{grammar}}

Each constraint must encode one of the assumptions and must hold on data the
code handles correctly. Reply with JSON only:
{"constraints": [{"text": "isComplete(\"{{column}}\")", "assumption_ids": ["..."]}]})P"},
      {std::string(kGenMultiColumnConstraints),
       R"P(Write data validation constraints relating the columns {{columns}}.

Assumptions the downstream code makes (with ids):
{{assumptions}}

Data profile:
{{profile}}

{{grammar}}

Each constraint must encode one of the assumptions and must hold on data the
code handles correctly. Reply with JSON only:
{"constraints": [{"text": "...", "assumption_ids": ["..."]}]})P"},
      {std::string(kProposerInstruction),
       R"P(You improve the prompt templates of a pipeline that writes data
validation constraints for downstream scripts. A constraint is useful when it
fails only on data that actually breaks the script, so the feedback reports
failure precision: of the batches on which a constraint (or all constraints
of a column) failed, the fraction that really broke the task. Low values mean
false alarms.

Current templates (JSON, placeholders in double braces must be kept):
{{prompts}}

Feedback from observed batches:
{{feedback}}

Rewrite any templates that would reduce false alarms without missing real
failures. Reply with JSON only: {"prompts": {"template_name": "new text"}}.
Omit templates you keep unchanged.)P"},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& AllowedPlaceholders(std::string_view method) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> allowed = {
      {std::string(kDiscoverColumnAccess), {"columns", "profile", "code"}},
      {std::string(kDiscoverJointColumnAccess), {"columns", "profile", "code"}},
      {std::string(kColumnDataflow), {"column", "code"}},
      {std::string(kMultiColumnDataflow), {"columns", "code"}},
      {std::string(kSummarizeLink), {"column", "annotated_code", "profile"}},
      {std::string(kGenColumnConstraints), {"column", "assumptions", "profile", "grammar"}},
      {std::string(kGenMultiColumnConstraints),
       {"columns", "assumptions", "profile", "grammar"}},
      {std::string(kProposerInstruction), {"prompts", "feedback"}},
  };
  static const std::vector<std::string> none;
  auto it = allowed.find(method);
  return it == allowed.end() ? none : it->second;
}

std::vector<std::string> Placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  size_t pos = 0;
  while ((pos = tmpl.find("{{", pos)) != std::string_view::npos) {
    size_t end = tmpl.find("}}", pos + 2);
    if (end == std::string_view::npos) throw PromptError("unterminated placeholder");
    std::string name(Trim(tmpl.substr(pos + 2, end - pos - 2)));
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    pos = end + 2;
  }
  return out;
}

std::string RenderTemplate(std::string_view tmpl, const Bindings& bindings) {
  std::string out;
  size_t pos = 0;
  while (true) {
    size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      return out;
    }
    size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) throw PromptError("unterminated placeholder");
    out.append(tmpl.substr(pos, open - pos));
    std::string name(Trim(tmpl.substr(open + 2, close - open - 2)));
    auto it = bindings.find(name);
    if (it == bindings.end()) throw PromptError("unbound placeholder {{" + name + "}}");
    out.append(it->second);
    pos = close + 2;
  }
}

PromptSet PromptSet::Defaults() {
  PromptSet p;
  for (const auto& [k, v] : DefaultTemplates()) p.templates[k] = v;
  return p;
}

const std::string& PromptSet::at(std::string_view method) const {
  auto it = templates.find(std::string(method));
  if (it == templates.end()) {
    throw PromptError("prompt set has no template '" + std::string(method) + "'");
  }
  return it->second;
}

std::vector<std::string> PromptSet::Problems() const {
  std::vector<std::string> problems;
  for (std::string_view name : kPromptNames) {
    auto it = templates.find(std::string(name));
    if (it == templates.end() || Trim(it->second).empty()) {
      problems.push_back("missing template '" + std::string(name) + "'");
    }
  }
  for (const auto& [name, tmpl] : templates) {
    if (std::find(kPromptNames.begin(), kPromptNames.end(), name) == kPromptNames.end()) {
      problems.push_back("unknown template '" + name + "'");
      continue;
    }
    const auto& allowed = AllowedPlaceholders(name);
    try {
      for (const std::string& ph : Placeholders(tmpl)) {
        if (std::find(allowed.begin(), allowed.end(), ph) == allowed.end()) {
          problems.push_back("template '" + name + "' uses unknown placeholder {{" + ph +
                             "}}");
        }
      }
    } catch (const PromptError& e) {
      problems.push_back("template '" + name + "': " + e.what());
    }
  }
  return problems;
}

nlohmann::ordered_json PromptSetToJson(const PromptSet& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (std::string_view name : kPromptNames) {
    auto it = p.templates.find(std::string(name));
    if (it != p.templates.end()) t[std::string(name)] = it->second;
  }
  j["templates"] = t;
  return j;
}

PromptSet PromptSetFromJson(const nlohmann::json& j) {
  PromptSet p;
  p.name = j.value("name", "default");
  for (const auto& [k, v] : j.at("templates").items()) p.templates[k] = v.get<std::string>();
  auto problems = p.Problems();
  if (!problems.empty()) throw PromptError(Join(problems, "; "));
  return p;
}

std::string_view GrammarSummary() { return kGrammar; }

}  // namespace taskdv
