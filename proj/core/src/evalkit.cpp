// Copyright 2026 The hybridfit Authors
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

#include "hybridfit/evalkit.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hybridfit {

namespace {

struct Ranked {
  double score;
  std::size_t set_index;
  const OrientedBox* box;
};

}  // namespace

void DetectionSet::validate() const {
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const auto& d = detections[i];
    if (!d.class_label()) {
      throw std::invalid_argument("scene " + std::to_string(scene_id) +
                                  ": detection " + std::to_string(i) +
                                  " has no class label");
    }
    if (!d.score() || !(*d.score() >= 0.0 && *d.score() <= 1.0)) {
      throw std::invalid_argument("scene " + std::to_string(scene_id) +
                                  ": detection " + std::to_string(i) +
                                  " needs a score in [0, 1]");
    }
  }
}

ClassEvaluation evaluate_class(std::span<const DetectionSet> dets,
                               std::span<const GroundTruth> gts,
                               int class_label, double iou_thresh,
                               Interpolation interp) {
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) {
    throw std::invalid_argument("iou threshold must lie in (0, 1]");
  }

  // Ground truth of this class per scene id.
  std::unordered_map<int, std::vector<const OrientedBox*>> truth;
  ClassEvaluation out;
  for (const auto& g : gts) {
    auto& list = truth[g.scene_id];
    for (const auto& b : g.boxes) {
      if (b.class_label() == class_label) {
        list.push_back(&b);
        ++out.num_ground_truth;
      }
    }
  }

  std::vector<Ranked> ranked;
  for (std::size_t s = 0; s < dets.size(); ++s) {
    dets[s].validate();
    for (const auto& d : dets[s].detections) {
      if (d.class_label() == class_label) ranked.push_back({*d.score(), s, &d});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) {
                     return a.score > b.score;
                   });
  out.num_detections = static_cast<int>(ranked.size());

  std::unordered_map<int, std::vector<bool>> used;
  std::vector<bool> is_tp(ranked.size(), false);
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    const int scene = dets[ranked[k].set_index].scene_id;
    const auto it = truth.find(scene);
    if (it == truth.end() || it->second.empty()) continue;
    auto& taken = used[scene];
    taken.resize(it->second.size(), false);
    double best_iou = -1.0;
    std::size_t best = 0;
    for (std::size_t g = 0; g < it->second.size(); ++g) {
      if (taken[g]) continue;
      const double iou = iou3d(*ranked[k].box, *it->second[g]);
      if (iou > best_iou) {
        best_iou = iou;
        best = g;
      }
    }
    if (best_iou >= iou_thresh) {
      taken[best] = true;
      is_tp[k] = true;
    }
  }

  if (out.num_ground_truth == 0) return out;

  const auto npos = static_cast<long double>(out.num_ground_truth);
  std::vector<long double> precision(ranked.size());
  std::vector<long double> recall(ranked.size());
  int tp = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (is_tp[k]) ++tp;
    precision[k] = static_cast<long double>(tp) / static_cast<long double>(k + 1);
    recall[k] = static_cast<long double>(tp) / npos;
    out.precision.push_back(static_cast<double>(precision[k]));
    out.recall.push_back(static_cast<double>(recall[k]));
  }
  out.true_positives = tp;

  // Precision envelope: best precision at this rank or any later one.
  std::vector<long double> envelope = precision;
  for (std::size_t k = envelope.size(); k-- > 1;) {
    envelope[k - 1] = std::max(envelope[k - 1], envelope[k]);
  }

  long double ap = 0.0L;
  if (interp == Interpolation::kAllPoint) {
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      if (is_tp[k]) ap += envelope[k];
    }
    ap /= npos;
  } else {
    for (int step = 0; step <= 10; ++step) {
      const long double r = static_cast<long double>(step) / 10.0L;
      long double best = 0.0L;
      for (std::size_t k = 0; k < ranked.size(); ++k) {
        if (recall[k] >= r) {
          best = envelope[k];
          break;
        }
      }
      ap += best;
    }
    ap /= 11.0L;
  }
  out.ap = static_cast<double>(ap);
  return out;
}

std::optional<double> average_precision(std::span<const DetectionSet> dets,
                                        std::span<const GroundTruth> gts,
                                        int class_label, double iou_thresh,
                                        Interpolation interp) {
  return evaluate_class(dets, gts, class_label, iou_thresh, interp).ap;
}

MeanApResult mean_ap(std::span<const DetectionSet> dets,
                     std::span<const GroundTruth> gts,
                     std::span<const int> classes, double iou_thresh,
                     Interpolation interp) {
  MeanApResult out;
  long double sum = 0.0L;
  int defined = 0;
  for (int c : classes) {
    const auto ap = average_precision(dets, gts, c, iou_thresh, interp);
    out.per_class[c] = ap;
    if (ap) {
      sum += *ap;
      ++defined;
    }
  }
  if (defined == 0) {
    throw std::invalid_argument("mean_ap: no class has ground truth");
  }
  out.map = static_cast<double>(sum / defined);
  return out;
}

std::vector<int> class_labels(std::span<const DetectionSet> dets,
                              std::span<const GroundTruth> gts) {
  std::set<int> labels;
  for (const auto& g : gts) {
    for (const auto& b : g.boxes) {
      if (b.class_label()) labels.insert(*b.class_label());
    }
  }
  for (const auto& d : dets) {
    for (const auto& b : d.detections) {
      if (b.class_label()) labels.insert(*b.class_label());
    }
  }
  return {labels.begin(), labels.end()};
}

}  // namespace hybridfit
