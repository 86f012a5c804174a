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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgg/config.hpp"
#include "sgg/dataset.hpp"
#include "sgg/errors.hpp"
#include "sgg/judge.hpp"
#include "sgg/metrics.hpp"
#include "sgg/records.hpp"
#include "sgg/reward.hpp"
#include "sgg/service.hpp"
#include "sgg/toon.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace sgg;

// Exit codes, stable and documented in the README.
constexpr int kOk = 0;
constexpr int kUsageError = 2;
constexpr int kDataError = 3;
constexpr int kIoError = 4;

std::string fixed3(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", v);
  return buffer;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

Schema schema_or_throw(const std::string& name) {
  const auto schema = schema_from_name(name);
  if (!schema) {
    throw DataError("unknown schema \"" + name +
                    "\" (use object_relation or human_object)");
  }
  return *schema;
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("bad vocabulary file " + path + ": " + e.what());
  }
  Vocabulary vocab;
  if (doc.contains("object_labels")) {
    for (const auto& v : doc["object_labels"]) {
      vocab.object_labels.insert(v.get<std::string>());
    }
  }
  if (doc.contains("predicates")) {
    for (const auto& v : doc["predicates"]) {
      vocab.predicates.insert(v.get<std::string>());
    }
  }
  if (doc.contains("groups")) {
    for (const auto& [group, values] : doc["groups"].items()) {
      for (const auto& v : values) {
        vocab.group_predicates[group].insert(v.get<std::string>());
      }
    }
  }
  return vocab;
}

struct CommonOptions {
  std::string config_path;
  std::string schema_name;

  ToolkitConfig resolve() const {
    ToolkitConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    if (!schema_name.empty()) config.schema = schema_or_throw(schema_name);
    return config;
  }
};

void add_common(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path,
                  "JSON config file (weights, match, schema)");
  cmd->add_option("--schema", options.schema_name,
                  "object_relation or human_object (overrides the config)");
}

// ---- convert ----------------------------------------------------------

int run_convert(const std::string& from, const std::string& to,
                const std::string& input, const std::string& output,
                const ToolkitConfig& config) {
  DatasetSplit split;
  if (from == "json") {
    split = load_records_json(input, config.schema);
  } else if (from == "toon") {
    split = load_records_toon(input, config.schema);
  } else {
    throw DataError("--from must be json or toon");
  }
  if (to == "json") {
    save_records_json(split, output);
  } else if (to == "toon") {
    save_records_toon(split, output);
  } else {
    throw DataError("--to must be json or toon");
  }
  return kOk;
}

// ---- validate ---------------------------------------------------------

int run_validate(const std::vector<std::string>& inputs,
                 const ToolkitConfig& config, const std::string& vocab_path,
                 bool closed) {
  Vocabulary vocab;
  if (!vocab_path.empty()) vocab = load_vocabulary(vocab_path);

  std::size_t bad = 0;
  for (const auto& path : inputs) {
    for (const auto& record : load_predictions(path, config.schema)) {
      std::vector<std::string> problems;
      for (const auto& diag : record.outcome.diagnostics) {
        problems.push_back(diag.message);
      }
      if (record.outcome.graph && (closed || !vocab_path.empty())) {
        const ValidationReport report =
            validate_graph(*record.outcome.graph,
                           vocab_path.empty() ? nullptr : &vocab, closed);
        for (const auto& violation : report.violations) {
          problems.push_back(violation.code + ": " + violation.message);
        }
      }
      if (!record.outcome.valid || !problems.empty()) {
        ++bad;
        for (const auto& problem : problems) {
          std::cerr << path << " sample \"" << record.sample_id
                    << "\": " << problem << "\n";
        }
        if (problems.empty()) {
          std::cerr << path << " sample \"" << record.sample_id
                    << "\": invalid\n";
        }
      }
    }
  }
  if (bad > 0) {
    std::cerr << bad << " invalid record(s)\n";
    return kDataError;
  }
  return kOk;
}

// ---- score ------------------------------------------------------------

int run_score(const std::string& gt_path, const std::string& completions_path,
              const ToolkitConfig& config, const std::string& output,
              bool table, std::size_t threads) {
  const DatasetSplit gt = load_records(gt_path, config.schema);
  std::map<std::string, const SceneGraph*> gt_by_id;
  for (const auto& record : gt.records) {
    if (!gt_by_id.emplace(record.sample_id, &record.graph).second) {
      throw DataError("duplicate ground-truth sample id \"" +
                      record.sample_id + "\"");
    }
  }

  const auto completions = load_completions(completions_path);
  std::vector<std::pair<SceneGraph, std::string>> items;
  items.reserve(completions.size());
  for (const auto& completion : completions) {
    const auto it = gt_by_id.find(completion.sample_id);
    if (it == gt_by_id.end()) {
      throw DataError("completion references unknown sample id \"" +
                      completion.sample_id + "\"");
    }
    items.emplace_back(*it->second, completion.completion);
  }

  const auto breakdowns = score_batch(items, config.weights, config.match,
                                      threads);

  double total_sum = 0.0;
  double valid_sum = 0.0;
  std::string machine;
  for (std::size_t i = 0; i < breakdowns.size(); ++i) {
    const RewardBreakdown& b = breakdowns[i];
    total_sum += b.total;
    valid_sum += b.valid_mask;
    ordered_json row;
    row["sample_id"] = completions[i].sample_id;
    row["valid_mask"] = b.valid_mask;
    row["format"] = b.format;
    row["obj_cls"] = b.obj_cls;
    row["obj_box"] = b.obj_box;
    row["rel_recall"] = b.rel_recall;
    row["rel_precision"] = b.rel_precision;
    row["rel_f1"] = b.rel_f1;
    row["penalty_obj"] = b.penalty_obj;
    row["penalty_rel"] = b.penalty_rel;
    row["total"] = b.total;
    row["diagnostics"]["frac_no_rel"] = b.diagnostics.frac_no_rel;
    row["diagnostics"]["num_pred_objs"] = b.diagnostics.num_pred_objs;
    row["diagnostics"]["num_pred_rels"] = b.diagnostics.num_pred_rels;
    row["diagnostics"]["frac_invalid_rel"] = b.diagnostics.frac_invalid_rel;
    row["diagnostics"]["has_answer_tags"] = b.diagnostics.has_answer_tags;
    machine += row.dump();
    machine += '\n';
  }
  const double n = breakdowns.empty() ? 1.0 : static_cast<double>(breakdowns.size());
  ordered_json aggregate;
  aggregate["aggregate"]["count"] = breakdowns.size();
  aggregate["aggregate"]["mean_total"] = total_sum / n;
  aggregate["aggregate"]["valid_fraction"] = valid_sum / n;
  aggregate["config"] = json::parse(config_json(config));
  machine += aggregate.dump();
  machine += '\n';

  if (table) {
    std::string text;
    text += "samples: " + std::to_string(breakdowns.size()) + "\n";
    text += "mean total: " + fixed3(total_sum / n) + "\n";
    text += "valid fraction: " + fixed3(valid_sum / n) + "\n";
    write_text(output, text);
  } else {
    write_text(output, machine);
  }
  return kOk;
}

// ---- eval -------------------------------------------------------------

struct EvalInputs {
  DatasetSplit gt;
  std::map<std::string, const ParseOutcome*> pred_by_id;
  std::vector<PredictionRecord> predictions;
};

EvalInputs load_eval_inputs(const std::string& gt_path,
                            const std::string& pred_path,
                            const ToolkitConfig& config) {
  EvalInputs inputs;
  inputs.gt = load_records(gt_path, config.schema);
  inputs.predictions = load_predictions(pred_path, config.schema);
  for (const auto& prediction : inputs.predictions) {
    if (!inputs.pred_by_id.emplace(prediction.sample_id, &prediction.outcome)
             .second) {
      throw DataError("duplicate prediction for sample id \"" +
                      prediction.sample_id + "\"");
    }
  }
  return inputs;
}

int run_eval(const std::string& gt_path, const std::string& pred_path,
             const std::string& mode, const ToolkitConfig& config,
             const std::string& judge_endpoint, const std::string& judge_stub,
             bool include_failed, const std::string& output, bool table,
             std::size_t judge_parallel) {
  const EvalInputs inputs = load_eval_inputs(gt_path, pred_path, config);

  const bool soft = mode == "soft";
  if (!soft && mode != "strict") {
    throw DataError("--mode must be strict or soft");
  }

  std::unique_ptr<JudgeClient> backend;
  std::unique_ptr<CachingJudge> judge;
  if (soft) {
    if (!judge_endpoint.empty() && !judge_stub.empty()) {
      throw DataError("use either --judge-endpoint or --judge-stub, not both");
    }
    if (!judge_endpoint.empty()) {
      HttpJudgeConfig judge_config;
      judge_config.endpoint = judge_endpoint;
      backend = std::make_unique<HttpJudge>(judge_config);
    } else if (!judge_stub.empty()) {
      backend = std::make_unique<SynonymJudge>(
          SynonymJudge::from_file(judge_stub));
    } else {
      backend = std::make_unique<SynonymJudge>();
    }
    judge = std::make_unique<CachingJudge>(*backend);
  }

  const ParseOutcome missing;  // valid = false: counts as a failed sample
  std::vector<SampleMetrics> samples(inputs.gt.records.size());
  const auto evaluate_index = [&](std::size_t i) {
    const auto& record = inputs.gt.records[i];
    const auto it = inputs.pred_by_id.find(record.sample_id);
    const ParseOutcome& outcome =
        it == inputs.pred_by_id.end() ? missing : *it->second;
    samples[i] = soft ? evaluate_sample_soft(record.graph, outcome,
                                             config.match, *judge)
                      : evaluate_sample_strict(record.graph, outcome,
                                               config.match);
  };

  if (soft && judge_parallel > 1) {
    // Concurrent samples bound the number of in-flight judge requests.
    std::vector<std::thread> pool;
    const std::size_t stride =
        std::min<std::size_t>(judge_parallel, samples.size());
    for (std::size_t w = 0; w < stride; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < samples.size(); i += stride) {
          evaluate_index(i);
        }
      });
    }
    for (auto& thread : pool) thread.join();
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) evaluate_index(i);
  }

  const MetricsReport report =
      aggregate(samples, soft ? EvalMode::kSoft : EvalMode::kStrict,
                include_failed);
  std::size_t judge_failures = 0;
  for (const auto& sample : samples) judge_failures += sample.judge_failures;

  if (table) {
    std::string text;
    text += "mode          " + std::string(soft ? "soft" : "strict") + "\n";
    text += "samples       " + std::to_string(report.sample_count) + "\n";
    text += "fail rate (%) " + fixed3(report.failure_rate * 100.0) + "\n";
    text += "obj P/R/F1    " + fixed3(report.obj_p) + " / " +
            fixed3(report.obj_r) + " / " + fixed3(report.obj_f1) + "\n";
    text += "rel P/R/F1    " + fixed3(report.rel_p) + " / " +
            fixed3(report.rel_r) + " / " + fixed3(report.rel_f1) + "\n";
    text += "SGG score     " + fixed3(report.sgg_score) + "\n";
    if (soft) {
      text += "judge failures " + std::to_string(judge_failures) + "\n";
    }
    write_text(output, text);
  } else {
    ordered_json doc;
    doc["mode"] = soft ? "soft" : "strict";
    doc["sample_count"] = report.sample_count;
    doc["failure_rate"] = report.failure_rate;
    doc["obj_precision"] = report.obj_p;
    doc["obj_recall"] = report.obj_r;
    doc["obj_f1"] = report.obj_f1;
    doc["rel_precision"] = report.rel_p;
    doc["rel_recall"] = report.rel_r;
    doc["rel_f1"] = report.rel_f1;
    doc["sgg_score"] = report.sgg_score;
    doc["include_failed"] = include_failed;
    if (soft) doc["judge_failures"] = judge_failures;
    doc["config"] = json::parse(config_json(config));
    write_text(output, doc.dump() + "\n");
  }
  return kOk;
}

// ---- eval-sgdet -------------------------------------------------------

int run_eval_sgdet(const std::string& gt_path, const std::string& pred_path,
                   const std::vector<int>& ks, const ToolkitConfig& config,
                   const std::string& denominator, const std::string& output,
                   bool table) {
  const EvalInputs inputs = load_eval_inputs(gt_path, pred_path, config);

  SgdetDenominator denom = SgdetDenominator::kMinKOrPred;
  if (denominator == "k") {
    denom = SgdetDenominator::kK;
  } else if (denominator != "min") {
    throw DataError("--denominator must be min or k");
  }

  std::vector<double> precision(ks.size(), 0.0);
  std::vector<double> recall(ks.size(), 0.0);
  std::vector<double> f1(ks.size(), 0.0);
  for (const auto& record : inputs.gt.records) {
    std::vector<RankedTriplet> triplets;
    const auto it = inputs.pred_by_id.find(record.sample_id);
    if (it != inputs.pred_by_id.end() && it->second->valid &&
        it->second->graph) {
      triplets = ranked_triplets(*it->second->graph);
    }
    const auto scores =
        evaluate_sgdet(record.graph, triplets, ks, config.match, denom);
    for (std::size_t k = 0; k < scores.size(); ++k) {
      precision[k] += scores[k].precision;
      recall[k] += scores[k].recall;
      f1[k] += scores[k].f1;
    }
  }
  const double n = inputs.gt.records.empty()
                       ? 1.0
                       : static_cast<double>(inputs.gt.records.size());

  if (table) {
    std::string text = "K\tP@K\tR@K\tF1@K\n";
    for (std::size_t k = 0; k < ks.size(); ++k) {
      text += std::to_string(ks[k]) + "\t" + fixed3(precision[k] / n) + "\t" +
              fixed3(recall[k] / n) + "\t" + fixed3(f1[k] / n) + "\n";
    }
    write_text(output, text);
  } else {
    ordered_json doc;
    doc["sample_count"] = inputs.gt.records.size();
    doc["denominator"] = denominator;
    doc["scores"] = ordered_json::array();
    for (std::size_t k = 0; k < ks.size(); ++k) {
      ordered_json row;
      row["k"] = ks[k];
      row["precision"] = precision[k] / n;
      row["recall"] = recall[k] / n;
      row["f1"] = f1[k] / n;
      doc["scores"].push_back(std::move(row));
    }
    doc["config"] = json::parse(config_json(config));
    write_text(output, doc.dump() + "\n");
  }
  return kOk;
}

// ---- dataset commands -------------------------------------------------

ordered_json stats_json(const FilterStats& stats) {
  ordered_json doc;
  doc["before"] = stats.before;
  doc["removed"] = stats.removed;
  doc["kept"] = stats.kept;
  doc["removed_pct"] = stats.removed_pct;
  return doc;
}

int run_filter(const std::string& input, const std::string& output,
               const ToolkitConfig& config) {
  const DatasetSplit split = load_records(input, config.schema);
  const auto [filtered, stats] = filter_zero_relation(split);
  save_records_json(filtered, output);
  std::cerr << stats_json(stats).dump() << "\n";
  return kOk;
}

int run_thin(const std::string& input, const std::string& output,
             const ToolkitConfig& config, const std::string& method,
             bool multiset) {
  if (method != "base-annot") {
    throw DataError("--method supports base-annot only");
  }
  const DatasetSplit split = load_records(input, config.schema);
  const auto [thinned, stats] = thin_base_annot(split, multiset);
  save_records_json(thinned, output);
  std::cerr << stats_json(stats).dump() << "\n";
  return kOk;
}

int run_corrupt(const std::string& input, const std::string& output,
                const ToolkitConfig& config, const CorruptionPolicy& policy,
                const std::string& vocab_path, std::uint64_t seed) {
  const DatasetSplit split = load_records(input, config.schema);
  Vocabulary vocab;
  if (!vocab_path.empty()) vocab = load_vocabulary(vocab_path);

  DatasetSplit corrupted;
  corrupted.name = split.name;
  std::uint64_t record_seed = seed;
  for (const auto& record : split.records) {
    DatasetRecord out = record;
    out.graph = corrupt_graph(record.graph, policy, vocab, record_seed);
    ++record_seed;
    corrupted.records.push_back(std::move(out));
  }
  save_records_json(corrupted, output);
  ordered_json echo;
  echo["seed"] = seed;
  echo["object_dropout"] = policy.object_dropout;
  echo["relation_dropout"] = policy.relation_dropout;
  echo["box_jitter"] = policy.box_jitter;
  echo["label_substitution"] = policy.label_substitution;
  std::cerr << echo.dump() << "\n";
  return kOk;
}

int run_stats(const std::string& input, const ToolkitConfig& config,
              const std::string& measure_name, const std::string& counts_path,
              const std::string& output, bool table) {
  const auto measure = length_measure_from_name(measure_name);
  if (!measure) throw DataError("--measure must be chars, bytes, ws or file");

  const DatasetSplit split = load_records(input, config.schema);
  TokenCountsMap counts;
  const TokenCountsMap* counts_ptr = nullptr;
  if (*measure == LengthMeasure::kCountsFile) {
    if (counts_path.empty()) {
      throw DataError("--measure file needs --counts-file");
    }
    counts = load_token_counts(counts_path);
    counts_ptr = &counts;
  }
  const LengthStats stats = length_stats(split, *measure, counts_ptr);

  if (table) {
    auto row = [](const char* name, const LengthSummary& s) {
      return std::string(name) + "\t" + fixed3(s.min_v) + "\t" +
             fixed3(s.mean) + "\t" + fixed3(s.median) + "\t" +
             fixed3(s.max_v) + "\n";
    };
    std::string text = "format\tmin\tmean\tmedian\tmax\n";
    text += row("json", stats.json);
    text += row("toon", stats.toon);
    text += row("ratio", stats.ratio);
    write_text(output, text);
  } else {
    auto summary = [](const LengthSummary& s) {
      ordered_json doc;
      doc["min"] = s.min_v;
      doc["mean"] = s.mean;
      doc["median"] = s.median;
      doc["max"] = s.max_v;
      return doc;
    };
    ordered_json doc;
    doc["measure"] = length_measure_name(*measure);
    doc["count"] = stats.count;
    doc["json"] = summary(stats.json);
    doc["toon"] = summary(stats.toon);
    doc["ratio"] = summary(stats.ratio);
    write_text(output, doc.dump() + "\n");
  }
  return kOk;
}

// ---- serve ------------------------------------------------------------

int run_serve(const ToolkitConfig& config, const std::string& transport,
              int port, std::size_t threads) {
  const ScoreService service(config);
  if (const char* level = std::getenv("SGG_LOG_LEVEL");
      level && std::string(level) == "debug") {
    std::cerr << "serving with config " << config_json(config) << "\n";
  }
  if (transport == "stdio") return serve_stdio(service, threads);
  if (transport == "tcp") return serve_tcp(service, port, threads);
  throw DataError("--transport must be stdio or tcp");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-graph toolkit: TOON codec, matching rewards, metrics, "
               "dataset preparation and a reward-scoring service"};
  app.require_subcommand(1);

  // convert
  auto* convert = app.add_subcommand("convert", "Convert record files");
  CommonOptions convert_common;
  std::string convert_from = "json", convert_to = "toon";
  std::string convert_input, convert_output;
  convert->add_option("--from", convert_from, "json or toon")->required();
  convert->add_option("--to", convert_to, "json or toon")->required();
  convert->add_option("--input", convert_input, "input records file")->required();
  convert->add_option("--output", convert_output, "output records file")->required();
  add_common(convert, convert_common);

  // validate
  auto* validate = app.add_subcommand("validate", "Validate record files");
  CommonOptions validate_common;
  std::vector<std::string> validate_inputs;
  std::string validate_vocab;
  bool validate_closed = false;
  validate->add_option("inputs", validate_inputs, "record files")->required();
  validate->add_option("--vocab", validate_vocab, "vocabulary JSON file");
  validate->add_flag("--closed", validate_closed,
                     "treat out-of-vocabulary labels as violations");
  add_common(validate, validate_common);

  // score
  auto* score = app.add_subcommand("score", "Score completions as rewards");
  CommonOptions score_common;
  std::string score_gt, score_completions, score_output;
  bool score_table = false;
  std::size_t score_threads = 0;
  score->add_option("--gt", score_gt, "ground-truth records")->required();
  score->add_option("--completions", score_completions,
                    "completions JSONL file")->required();
  score->add_option("--weights", score_common.config_path,
                    "config file with weights");
  score->add_option("--output", score_output, "output path (default stdout)");
  score->add_flag("--table", score_table, "human-readable summary");
  score->add_option("--threads", score_threads, "worker threads (0 = auto)");
  score->add_option("--schema", score_common.schema_name,
                    "object_relation or human_object");
  score->add_option("--config", score_common.config_path, "config file")
      ->excludes("--weights");

  // eval
  auto* eval = app.add_subcommand("eval", "Strict or soft graph evaluation");
  CommonOptions eval_common;
  std::string eval_gt, eval_pred, eval_mode = "strict";
  std::string eval_judge_endpoint, eval_judge_stub, eval_output;
  double eval_iou = -1.0;
  bool eval_exclude_failed = false, eval_table = false;
  std::size_t eval_judge_parallel = 4;
  eval->add_option("--gt", eval_gt, "ground-truth records")->required();
  eval->add_option("--pred", eval_pred, "prediction records")->required();
  eval->add_option("--mode", eval_mode, "strict or soft");
  eval->add_option("--iou", eval_iou, "IoU threshold override");
  eval->add_option("--judge-endpoint", eval_judge_endpoint,
                   "HTTP judge endpoint URL");
  eval->add_option("--judge-stub", eval_judge_stub,
                   "synonym-table judge JSON file");
  eval->add_flag("--exclude-failed", eval_exclude_failed,
                 "exclude failed samples from macro averages");
  eval->add_option("--output", eval_output, "output path (default stdout)");
  eval->add_flag("--table", eval_table, "human-readable table");
  eval->add_option("--judge-parallel", eval_judge_parallel,
                   "max concurrent samples in soft mode");
  add_common(eval, eval_common);

  // eval-sgdet
  auto* sgdet = app.add_subcommand("eval-sgdet",
                                   "Ranked P@K / R@K / F1@K evaluation");
  CommonOptions sgdet_common;
  std::string sgdet_gt, sgdet_pred, sgdet_denominator = "min", sgdet_output;
  std::vector<int> sgdet_ks{10, 20, 50};
  double sgdet_iou = -1.0;
  bool sgdet_table = false;
  sgdet->add_option("--gt", sgdet_gt, "ground-truth records")->required();
  sgdet->add_option("--pred", sgdet_pred, "prediction records")->required();
  sgdet->add_option("--k", sgdet_ks, "K values")->delimiter(',');
  sgdet->add_option("--iou", sgdet_iou, "IoU threshold override");
  sgdet->add_option("--denominator", sgdet_denominator,
                    "P@K denominator: min (of K and predictions) or k");
  sgdet->add_option("--output", sgdet_output, "output path (default stdout)");
  sgdet->add_flag("--table", sgdet_table, "human-readable table");
  add_common(sgdet, sgdet_common);

  // filter-zero-rel
  auto* filter = app.add_subcommand("filter-zero-rel",
                                    "Drop records with no relations");
  CommonOptions filter_common;
  std::string filter_input, filter_output;
  filter->add_option("--input", filter_input, "input records")->required();
  filter->add_option("--output", filter_output, "output records")->required();
  add_common(filter, filter_common);

  // thin
  auto* thin = app.add_subcommand("thin", "Video frame thinning");
  CommonOptions thin_common;
  std::string thin_input, thin_output, thin_method = "base-annot";
  bool thin_multiset = false;
  thin->add_option("--input", thin_input, "input records")->required();
  thin->add_option("--output", thin_output, "output records")->required();
  thin->add_option("--method", thin_method, "thinning method (base-annot)");
  thin->add_flag("--multiset", thin_multiset,
                 "compare category multisets instead of sets");
  add_common(thin, thin_common);

  // corrupt
  auto* corrupt = app.add_subcommand(
      "corrupt", "Seeded corruption of previous-frame context graphs");
  CommonOptions corrupt_common;
  std::string corrupt_input, corrupt_output, corrupt_vocab;
  CorruptionPolicy corrupt_policy;
  std::uint64_t corrupt_seed = 0;
  corrupt->add_option("--input", corrupt_input, "input records")->required();
  corrupt->add_option("--output", corrupt_output, "output records")->required();
  corrupt->add_option("--seed", corrupt_seed, "base random seed")->required();
  corrupt->add_option("--object-dropout", corrupt_policy.object_dropout,
                      "object dropout probability");
  corrupt->add_option("--relation-dropout", corrupt_policy.relation_dropout,
                      "relation dropout probability");
  corrupt->add_option("--box-jitter", corrupt_policy.box_jitter,
                      "box jitter fraction");
  corrupt->add_option("--label-substitution",
                      corrupt_policy.label_substitution,
                      "label substitution probability");
  corrupt->add_option("--vocab", corrupt_vocab,
                      "vocabulary file for substitutions");
  add_common(corrupt, corrupt_common);

  // stats
  auto* stats = app.add_subcommand("stats", "Serialization length statistics");
  CommonOptions stats_common;
  std::string stats_input, stats_measure = "chars", stats_counts, stats_output;
  bool stats_table = false;
  stats->add_option("--input", stats_input, "input records")->required();
  stats->add_option("--measure", stats_measure, "chars, bytes, ws or file");
  stats->add_option("--counts-file", stats_counts,
                    "per-sample token counts (measure=file)");
  stats->add_option("--output", stats_output, "output path (default stdout)");
  stats->add_flag("--table", stats_table, "human-readable table");
  add_common(stats, stats_common);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the reward-scoring service");
  CommonOptions serve_common;
  std::string serve_transport = "stdio";
  int serve_port = 7471;
  std::size_t serve_threads = 0;
  serve->add_option("--transport", serve_transport, "stdio or tcp");
  serve->add_option("--port", serve_port, "TCP port");
  serve->add_option("--threads", serve_threads, "worker threads (0 = auto)");
  add_common(serve, serve_common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) {
      return run_convert(convert_from, convert_to, convert_input,
                         convert_output, convert_common.resolve());
    }
    if (validate->parsed()) {
      return run_validate(validate_inputs, validate_common.resolve(),
                          validate_vocab, validate_closed);
    }
    if (score->parsed()) {
      return run_score(score_gt, score_completions, score_common.resolve(),
                       score_output, score_table, score_threads);
    }
    if (eval->parsed()) {
      ToolkitConfig config = eval_common.resolve();
      if (eval_iou >= 0.0) config.match.iou_threshold = eval_iou;
      return run_eval(eval_gt, eval_pred, eval_mode, config,
                      eval_judge_endpoint, eval_judge_stub,
                      !eval_exclude_failed, eval_output, eval_table,
                      eval_judge_parallel);
    }
    if (sgdet->parsed()) {
      ToolkitConfig config = sgdet_common.resolve();
      if (sgdet_iou >= 0.0) config.match.iou_threshold = sgdet_iou;
      return run_eval_sgdet(sgdet_gt, sgdet_pred, sgdet_ks, config,
                            sgdet_denominator, sgdet_output, sgdet_table);
    }
    if (filter->parsed()) {
      return run_filter(filter_input, filter_output, filter_common.resolve());
    }
    if (thin->parsed()) {
      return run_thin(thin_input, thin_output, thin_common.resolve(),
                      thin_method, thin_multiset);
    }
    if (corrupt->parsed()) {
      return run_corrupt(corrupt_input, corrupt_output,
                         corrupt_common.resolve(), corrupt_policy,
                         corrupt_vocab, corrupt_seed);
    }
    if (stats->parsed()) {
      return run_stats(stats_input, stats_common.resolve(), stats_measure,
                       stats_counts, stats_output, stats_table);
    }
    if (serve->parsed()) {
      return run_serve(serve_common.resolve(), serve_transport, serve_port,
                       serve_threads);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  std::cerr << "no subcommand\n";
  return kUsageError;
}
