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

#ifndef SGG_CONFIG_INTERNAL_HPP
#define SGG_CONFIG_INTERNAL_HPP

#include <json.hpp>

#include "sgg/config.hpp"

namespace sgg::internal {

// Shared by the config loader and the service's per-request overrides.
// Throws DataError on unknown keys or wrong types.
void apply_config(const nlohmann::json& doc, ToolkitConfig& config);
void apply_weights(const nlohmann::json& doc, RewardWeights& weights);
void apply_match(const nlohmann::json& doc, MatchConfig& match);

nlohmann::ordered_json config_to_json(const ToolkitConfig& config);

}  // namespace sgg::internal

#endif  // SGG_CONFIG_INTERNAL_HPP
