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

// Named prompt templates driving each model-backed step. Templates use
// `{{name}}` placeholders; each method accepts a fixed placeholder set.

#ifndef TASKDV_PROMPTS_H_
#define TASKDV_PROMPTS_H_

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace taskdv {

inline constexpr std::string_view kDiscoverColumnAccess = "discover_column_access";
inline constexpr std::string_view kDiscoverJointColumnAccess =
    "discover_joint_column_access";
inline constexpr std::string_view kColumnDataflow = "column_dataflow";
inline constexpr std::string_view kMultiColumnDataflow = "multi_column_dataflow";
inline constexpr std::string_view kSummarizeLink = "summarize_link";
inline constexpr std::string_view kGenColumnConstraints = "gen_column_constraints";
inline constexpr std::string_view kGenMultiColumnConstraints =
    "gen_multi_column_constraints";
inline constexpr std::string_view kProposerInstruction = "proposer_instruction";

inline constexpr std::array<std::string_view, 8> kPromptNames = {
    kDiscoverColumnAccess, kDiscoverJointColumnAccess, kColumnDataflow,
    kMultiColumnDataflow,  kSummarizeLink,             kGenColumnConstraints,
    kGenMultiColumnConstraints, kProposerInstruction,
};

// Placeholders a template for `method` may use.
const std::vector<std::string>& AllowedPlaceholders(std::string_view method);

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Bindings = std::map<std::string, std::string>;

// Placeholder names in order of first appearance.
std::vector<std::string> Placeholders(std::string_view tmpl);
// Throws PromptError for an unbound or unterminated placeholder.
std::string RenderTemplate(std::string_view tmpl, const Bindings& bindings);

struct PromptSet {
  std::string name = "default";
  std::map<std::string, std::string> templates;

  // Built-in templates written against the method descriptions.
  static PromptSet Defaults();

  const std::string& at(std::string_view method) const;
  // Problems with the set: missing or empty templates, unknown names, and
  // placeholders outside the method's allowed set.
  std::vector<std::string> Problems() const;

  friend bool operator==(const PromptSet& a, const PromptSet& b) {
    return a.templates == b.templates;
  }
};

nlohmann::ordered_json PromptSetToJson(const PromptSet& p);
// Throws PromptError when the result has Problems().
PromptSet PromptSetFromJson(const nlohmann::json& j);

// Short grammar reference bound to {{grammar}}.
std::string_view GrammarSummary();

}  // namespace taskdv

#endif  // TASKDV_PROMPTS_H_
