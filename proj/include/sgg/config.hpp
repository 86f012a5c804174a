// Copyright 2026 The sgg-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SGG_CONFIG_HPP
#define SGG_CONFIG_HPP

#include <string>

#include "sgg/geometry.hpp"
#include "sgg/graph.hpp"
#include "sgg/reward.hpp"

namespace sgg {

/// Everything the scoring surfaces need: the schema plus reward weights and
/// matching knobs. One JSON file format (docs/annotation-format.md); CLI
/// flags override file values.
struct ToolkitConfig {
  Schema schema = Schema::kObjectRelation;
  RewardWeights weights;
  MatchConfig match;
};

/// Loads a config file. Unknown keys are errors so typos cannot silently
/// fall back to defaults. Throws IoError/DataError.
ToolkitConfig load_config(const std::string& path);

/// Applies the same JSON shape from an in-memory string (used for
/// per-request overrides and tests).
void apply_config_text(const std::string& json_text, ToolkitConfig& config);

/// The effective configuration as canonical JSON, echoed into reports and
/// responses for provenance.
std::string config_json(const ToolkitConfig& config);

}  // namespace sgg

#endif  // SGG_CONFIG_HPP
