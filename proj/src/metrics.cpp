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

#include "sgg/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "sgg/hungarian.hpp"
#include "sgg/matching.hpp"

namespace sgg {

namespace {

double safe_ratio(std::size_t num, std::size_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double harmonic(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

void fill_rates(SampleMetrics& m) {
  m.obj_p = safe_ratio(m.obj_tp, m.obj_tp + m.obj_fp);
  m.obj_r = safe_ratio(m.obj_tp, m.obj_tp + m.obj_fn);
  m.obj_f1 = harmonic(m.obj_p, m.obj_r);
  m.rel_p = safe_ratio(m.rel_tp, m.rel_tp + m.rel_fp);
  m.rel_r = safe_ratio(m.rel_tp, m.rel_tp + m.rel_fn);
  m.rel_f1 = harmonic(m.rel_p, m.rel_r);
}

// Object alignment used by evaluation: Hungarian matching on (1 - IoU).
struct EvalAlignment {
  // aligned pred object index per gt object index, -1 when unassigned
  std::vector<std::ptrdiff_t> pred_of_gt;
  Eigen::MatrixXd iou;
};

EvalAlignment align_by_iou(const SceneGraph& gt, const SceneGraph& pred) {
  EvalAlignment alignment;
  alignment.pred_of_gt.assign(gt.objects.size(), -1);
  alignment.iou = pairwise_iou(gt.objects, pred.objects);
  if (gt.objects.empty() || pred.objects.empty()) return alignment;

  const Eigen::MatrixXd cost =
      Eigen::MatrixXd::Ones(alignment.iou.rows(), alignment.iou.cols()) -
      alignment.iou;
  const Assignment assignment = hungarian(cost);
  for (const auto& [i, j] : assignment.pairs) {
    alignment.pred_of_gt[static_cast<std::size_t>(i)] = j;
  }
  return alignment;
}

std::unordered_map<int, std::size_t> index_by_id(const SceneGraph& graph) {
  std::unordered_map<int, std::size_t> map;
  for (std::size_t i = 0; i < graph.objects.size(); ++i) {
    map.emplace(graph.objects[i].id, i);
  }
  return map;
}

std::string judge_context(const SceneGraph& gt, const SceneGraph& pred) {
  return "ground truth:\n" + serialize_toon(gt).raw_text + "prediction:\n" +
         serialize_toon(pred).raw_text;
}

struct SoftObjectVerdicts {
  // per gt object index: aligned pair passed the IoU gate and the labels were
  // accepted (equal or judge-approved)
  std::vector<char> accepted;
  std::size_t judge_failures = 0;
};

SoftObjectVerdicts soft_object_verdicts(const SceneGraph& gt,
                                        const SceneGraph& pred,
                                        const EvalAlignment& alignment,
                                        const MatchConfig& cfg,
                                        JudgeClient* judge,
                                        const std::string& context) {
  SoftObjectVerdicts verdicts;
  verdicts.accepted.assign(gt.objects.size(), 0);
  for (std::size_t i = 0; i < gt.objects.size(); ++i) {
    const std::ptrdiff_t j = alignment.pred_of_gt[i];
    if (j < 0) continue;
    if (alignment.iou(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) < cfg.iou_threshold) {
      continue;
    }
    const std::string& gt_label = gt.objects[i].label;
    const std::string& pred_label =
        pred.objects[static_cast<std::size_t>(j)].label;
    if (gt_label == pred_label) {
      verdicts.accepted[i] = 1;
    } else if (judge) {
      try {
        if (judge->judge_objects(gt_label, pred_label, context)) {
          verdicts.accepted[i] = 1;
        }
      } catch (const JudgeError&) {
        ++verdicts.judge_failures;
      }
    }
  }
  return verdicts;
}

SampleMetrics evaluate_sample(const SceneGraph& gt, const ParseOutcome& pred,
                              const MatchConfig& cfg, JudgeClient* judge) {
  SampleMetrics metrics;
  if (!pred.valid || !pred.graph) {
    metrics.failed = true;
    metrics.obj_fn = gt.objects.size();
    metrics.rel_fn = gt.relations.size();
    fill_rates(metrics);
    return metrics;
  }

  const SceneGraph& p = *pred.graph;
  const EvalAlignment alignment = align_by_iou(gt, p);
  const std::string context = judge ? judge_context(gt, p) : std::string();

  // Object counts. Soft acceptance subsumes strict: equal labels never reach
  // the judge.
  const SoftObjectVerdicts object_verdicts =
      soft_object_verdicts(gt, p, alignment, cfg, judge, context);
  metrics.judge_failures += object_verdicts.judge_failures;
  for (char accepted : object_verdicts.accepted) {
    if (accepted) ++metrics.obj_tp;
  }
  metrics.obj_fp = p.objects.size() - metrics.obj_tp;
  metrics.obj_fn = gt.objects.size() - metrics.obj_tp;

  // Relation counts: strict eligibility, plus judge-resolved eligibility on
  // alignment-consistent endpoint pairs in soft mode.
  if (!judge) {
    metrics.rel_tp = match_relations(gt, p, cfg).matched_relations;
  } else {
    const auto gt_index = index_by_id(gt);
    const auto pred_index = index_by_id(p);

    std::vector<std::vector<std::size_t>> eligible(gt.relations.size());
    for (std::size_t gi = 0; gi < gt.relations.size(); ++gi) {
      const Relation& g = gt.relations[gi];
      const auto gs = gt_index.find(g.subject_id);
      const auto go = gt_index.find(g.object_id);
      if (gs == gt_index.end() || go == gt_index.end()) continue;
      const SceneObject& g_sub = gt.objects[gs->second];
      const SceneObject& g_obj = gt.objects[go->second];
      for (std::size_t pjdx = 0; pjdx < p.relations.size(); ++pjdx) {
        const Relation& q = p.relations[pjdx];
        if (g.group != q.group) continue;
        const auto ps = pred_index.find(q.subject_id);
        const auto po = pred_index.find(q.object_id);
        if (ps == pred_index.end() || po == pred_index.end()) continue;
        const SceneObject& p_sub = p.objects[ps->second];
        const SceneObject& p_obj = p.objects[po->second];

        const bool strict_edge =
            g.predicate == q.predicate && g_sub.label == p_sub.label &&
            g_obj.label == p_obj.label &&
            iou(g_sub.box, p_sub.box) >= cfg.iou_threshold &&
            iou(g_obj.box, p_obj.box) >= cfg.iou_threshold;
        bool soft_edge = false;
        if (!strict_edge) {
          // Endpoints must be each other's alignment partners, pass the IoU
          // gate, and carry accepted labels; the predicate is then disputed.
          const bool endpoints_aligned =
              alignment.pred_of_gt[gs->second] ==
                  static_cast<std::ptrdiff_t>(ps->second) &&
              alignment.pred_of_gt[go->second] ==
                  static_cast<std::ptrdiff_t>(po->second);
          if (endpoints_aligned && object_verdicts.accepted[gs->second] &&
              object_verdicts.accepted[go->second]) {
            if (g.predicate == q.predicate) {
              soft_edge = true;
            } else {
              try {
                soft_edge = judge->judge_predicates(g.predicate, q.predicate,
                                                    g_sub.label, g_obj.label,
                                                    context);
              } catch (const JudgeError&) {
                ++metrics.judge_failures;
              }
            }
          }
        }
        if (strict_edge || soft_edge) eligible[gi].push_back(pjdx);
      }
    }

    const auto match = max_bipartite_matching(eligible, p.relations.size());
    for (std::size_t gi = 0; gi < match.size(); ++gi) {
      if (match[gi] >= 0) ++metrics.rel_tp;
    }
  }
  metrics.rel_fp = p.relations.size() - metrics.rel_tp;
  metrics.rel_fn = gt.relations.size() - metrics.rel_tp;

  fill_rates(metrics);
  return metrics;
}

}  // namespace

SampleMetrics evaluate_sample_strict(const SceneGraph& gt,
                                     const ParseOutcome& pred,
                                     const MatchConfig& cfg) {
  return evaluate_sample(gt, pred, cfg, nullptr);
}

SampleMetrics evaluate_sample_soft(const SceneGraph& gt,
                                   const ParseOutcome& pred,
                                   const MatchConfig& cfg,
                                   JudgeClient& judge) {
  return evaluate_sample(gt, pred, cfg, &judge);
}

MetricsReport aggregate(const std::vector<SampleMetrics>& samples,
                        EvalMode mode, bool include_failed) {
  if (samples.empty()) {
    throw std::invalid_argument("aggregate: no samples");
  }

  MetricsReport report;
  report.mode = mode;
  report.sample_count = samples.size();

  std::size_t failed = 0;
  std::size_t used = 0;
  for (const auto& sample : samples) {
    if (sample.failed) ++failed;
    if (sample.failed && !include_failed) continue;
    ++used;
    report.obj_p += sample.obj_p;
    report.obj_r += sample.obj_r;
    report.obj_f1 += sample.obj_f1;
    report.rel_p += sample.rel_p;
    report.rel_r += sample.rel_r;
    report.rel_f1 += sample.rel_f1;
  }
  if (used > 0) {
    const double n = static_cast<double>(used);
    report.obj_p /= n;
    report.obj_r /= n;
    report.obj_f1 /= n;
    report.rel_p /= n;
    report.rel_r /= n;
    report.rel_f1 /= n;
  }
  report.sgg_score = (report.obj_f1 + report.rel_f1) / 2.0;
  report.failure_rate =
      static_cast<double>(failed) / static_cast<double>(samples.size());
  return report;
}

std::vector<RankedTriplet> ranked_triplets(const SceneGraph& graph) {
  std::vector<RankedTriplet> out;
  for (const auto& rel : graph.relations) {
    const SceneObject* subject = graph.find_object(rel.subject_id);
    const SceneObject* object = graph.find_object(rel.object_id);
    if (!subject || !object) continue;
    out.push_back({subject->label, subject->box, rel.predicate, object->label,
                   object->box});
  }
  return out;
}

std::vector<SgdetScore> evaluate_sgdet(const SceneGraph& gt,
                                       const std::vector<RankedTriplet>& ranked,
                                       const std::vector<int>& k_values,
                                       const MatchConfig& cfg,
                                       SgdetDenominator denominator) {
  for (int k : k_values) {
    if (k <= 0) throw std::invalid_argument("evaluate_sgdet: K must be > 0");
  }

  // With-constraint: one predicate per (subject, object) pair, best rank wins.
  struct PairKey {
    std::string s_label, o_label;
    BoundingBox s_box, o_box;
    bool operator<(const PairKey& other) const {
      auto tie = [](const PairKey& k) {
        return std::tie(k.s_label, k.o_label, k.s_box.x1, k.s_box.y1,
                        k.s_box.x2, k.s_box.y2, k.o_box.x1, k.o_box.y1,
                        k.o_box.x2, k.o_box.y2);
      };
      return tie(*this) < tie(other);
    }
  };
  std::vector<const RankedTriplet*> constrained;
  {
    std::map<PairKey, bool> seen;
    for (const auto& triplet : ranked) {
      PairKey key{triplet.subject_label, triplet.object_label,
                  triplet.subject_box, triplet.object_box};
      if (seen.emplace(std::move(key), true).second) {
        constrained.push_back(&triplet);
      }
    }
  }

  const std::vector<RankedTriplet> gt_triplets = ranked_triplets(gt);

  std::vector<SgdetScore> scores;
  for (int k : k_values) {
    const std::size_t top =
        std::min<std::size_t>(static_cast<std::size_t>(k), constrained.size());

    std::vector<std::vector<std::size_t>> eligible(gt_triplets.size());
    for (std::size_t gi = 0; gi < gt_triplets.size(); ++gi) {
      const RankedTriplet& g = gt_triplets[gi];
      for (std::size_t pj = 0; pj < top; ++pj) {
        const RankedTriplet& p = *constrained[pj];
        if (g.subject_label != p.subject_label ||
            g.object_label != p.object_label || g.predicate != p.predicate) {
          continue;
        }
        if (iou(g.subject_box, p.subject_box) < cfg.iou_threshold) continue;
        if (iou(g.object_box, p.object_box) < cfg.iou_threshold) continue;
        eligible[gi].push_back(pj);
      }
    }
    const auto match = max_bipartite_matching(eligible, top);
    std::size_t tp = 0;
    for (const auto m : match) {
      if (m >= 0) ++tp;
    }

    SgdetScore score;
    score.k = k;
    score.tp = tp;
    score.recall = gt_triplets.empty()
                       ? 0.0
                       : static_cast<double>(tp) /
                             static_cast<double>(gt_triplets.size());
    const std::size_t denom = denominator == SgdetDenominator::kK
                                  ? static_cast<std::size_t>(k)
                                  : std::min(static_cast<std::size_t>(k),
                                             constrained.size());
    score.precision =
        denom > 0 ? static_cast<double>(tp) / static_cast<double>(denom) : 0.0;
    score.f1 = harmonic(score.precision, score.recall);
    scores.push_back(score);
  }
  return scores;
}

}  // namespace sgg
