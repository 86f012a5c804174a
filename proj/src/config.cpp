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

#include "sgg/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "config_internal.hpp"
#include "sgg/errors.hpp"

namespace sgg {

namespace internal {

namespace {

using nlohmann::json;

double number_or_throw(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw DataError("config key \"" + key + "\" must be a number");
  }
  return value.get<double>();
}

void apply_fields(const json& doc, const char* section,
                  const std::map<std::string, double*>& numbers,
                  const std::map<std::string, bool*>& flags) {
  if (!doc.is_object()) {
    throw DataError(std::string("config section \"") + section +
                    "\" must be an object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (const auto it = numbers.find(key); it != numbers.end()) {
      *it->second = number_or_throw(value, key);
      continue;
    }
    if (const auto it = flags.find(key); it != flags.end()) {
      if (!value.is_boolean()) {
        throw DataError("config key \"" + key + "\" must be a boolean");
      }
      *it->second = value.get<bool>();
      continue;
    }
    throw DataError(std::string("unknown key \"") + key + "\" in config "
                    "section \"" + section + "\"");
  }
}

}  // namespace

void apply_weights(const json& doc, RewardWeights& weights) {
  apply_fields(doc, "weights",
               {{"format", &weights.format},
                {"obj_cls", &weights.obj_cls},
                {"obj_box", &weights.obj_box},
                {"rel_recall", &weights.rel_recall},
                {"rel_precision", &weights.rel_precision},
                {"rel_f1", &weights.rel_f1},
                {"obj_hallucination", &weights.obj_hallucination},
                {"rel_hallucination", &weights.rel_hallucination},
                {"alpha_obj", &weights.alpha_obj},
                {"alpha_rel", &weights.alpha_rel},
                {"lambda_iou", &weights.lambda_iou},
                {"lambda_l1", &weights.lambda_l1}},
               {});
}

void apply_match(const json& doc, MatchConfig& match) {
  apply_fields(doc, "match",
               {{"lambda_sim", &match.lambda_sim},
                {"lambda_giou", &match.lambda_giou},
                {"lambda_l1", &match.lambda_l1},
                {"iou_threshold", &match.iou_threshold},
                {"epsilon", &match.epsilon},
                {"image_width", &match.image_width},
                {"image_height", &match.image_height}},
               {{"require_iou_for_match", &match.require_iou_for_match}});
}

void apply_config(const json& doc, ToolkitConfig& config) {
  if (!doc.is_object()) throw DataError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "schema") {
      if (!value.is_string()) throw DataError("config schema must be a string");
      const auto schema = schema_from_name(value.get<std::string>());
      if (!schema) {
        throw DataError("unknown schema \"" + value.get<std::string>() +
                        "\" (use object_relation or human_object)");
      }
      config.schema = *schema;
    } else if (key == "weights") {
      apply_weights(value, config.weights);
    } else if (key == "match") {
      apply_match(value, config.match);
    } else {
      throw DataError("unknown top-level config key \"" + key + "\"");
    }
  }
}

nlohmann::ordered_json config_to_json(const ToolkitConfig& config) {
  nlohmann::ordered_json doc;
  doc["schema"] = schema_name(config.schema);
  nlohmann::ordered_json& w = doc["weights"];
  w["format"] = config.weights.format;
  w["obj_cls"] = config.weights.obj_cls;
  w["obj_box"] = config.weights.obj_box;
  w["rel_recall"] = config.weights.rel_recall;
  w["rel_precision"] = config.weights.rel_precision;
  w["rel_f1"] = config.weights.rel_f1;
  w["obj_hallucination"] = config.weights.obj_hallucination;
  w["rel_hallucination"] = config.weights.rel_hallucination;
  w["alpha_obj"] = config.weights.alpha_obj;
  w["alpha_rel"] = config.weights.alpha_rel;
  w["lambda_iou"] = config.weights.lambda_iou;
  w["lambda_l1"] = config.weights.lambda_l1;
  nlohmann::ordered_json& m = doc["match"];
  m["lambda_sim"] = config.match.lambda_sim;
  m["lambda_giou"] = config.match.lambda_giou;
  m["lambda_l1"] = config.match.lambda_l1;
  m["iou_threshold"] = config.match.iou_threshold;
  m["epsilon"] = config.match.epsilon;
  m["require_iou_for_match"] = config.match.require_iou_for_match;
  m["image_width"] = config.match.image_width;
  m["image_height"] = config.match.image_height;
  return doc;
}

}  // namespace internal

ToolkitConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad config file " + path + ": " + e.what());
  }
  ToolkitConfig config;
  internal::apply_config(doc, config);
  return config;
}

void apply_config_text(const std::string& json_text, ToolkitConfig& config) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad config text: ") + e.what());
  }
  internal::apply_config(doc, config);
}

std::string config_json(const ToolkitConfig& config) {
  return internal::config_to_json(config).dump();
}

}  // namespace sgg
