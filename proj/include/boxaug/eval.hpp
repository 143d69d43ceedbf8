// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxaug/error.hpp"
#include "boxaug/geometry.hpp"
#include "boxaug/kitti_io.hpp"
#include "boxaug/types.hpp"

namespace boxaug {

/// The class set C over which mAP and ICFW mAP are taken.
inline const std::array<std::string, 3> kEvalClasses = {"Car", "Pedestrian", "Cyclist"};

enum class Difficulty { kEasy = 0, kModerate = 1, kHard = 2 };
inline constexpr std::array<Difficulty, 3> kDifficulties = {Difficulty::kEasy, Difficulty::kModerate,
                                                            Difficulty::kHard};

constexpr std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy: return "easy";
    case Difficulty::kModerate: return "moderate";
    case Difficulty::kHard: return "hard";
  }
  return "";
}

enum class Metric { k3D, kBEV };
inline constexpr std::array<Metric, 2> kMetrics = {Metric::k3D, Metric::kBEV};

constexpr std::string_view to_string(Metric m) { return m == Metric::k3D ? "3d" : "bev"; }

enum class Interp { kR40, kR11 };

constexpr std::string_view to_string(Interp i) { return i == Interp::kR40 ? "r40" : "r11"; }

inline Interp parse_interp(std::string_view s) {
  if (s == "r40" || s == "R40") return Interp::kR40;
  if (s == "r11" || s == "R11") return Interp::kR11;
  throw Error(ErrorCode::kConfigInvalid, "interpolation must be r40 or r11, got '" + std::string(s) + "'");
}

struct DifficultyRule {
  Difficulty level = Difficulty::kEasy;
  double min_box_height = 0.0;
  int max_occlusion = 0;
  double max_truncation = 0.0;
};

/// KITTI benchmark strata.
inline constexpr std::array<DifficultyRule, 3> kKittiRules = {{
    {Difficulty::kEasy, 40.0, 0, 0.15},
    {Difficulty::kModerate, 25.0, 1, 0.30},
    {Difficulty::kHard, 25.0, 2, 0.50},
}};

inline bool meets(const ObjectLabel& l, const DifficultyRule& rule) noexcept {
  return l.box2d.height() >= rule.min_box_height && l.occlusion <= rule.max_occlusion &&
         l.truncation <= rule.max_truncation;
}

struct Partition {
  std::vector<ObjectLabel> counted;
  std::vector<ObjectLabel> ignored;
};

/// counted: non-DontCare labels meeting every threshold; ignored: the rest.
inline Partition difficulty_filter(std::span<const ObjectLabel> labels, const DifficultyRule& rule) {
  Partition p;
  for (const auto& l : labels) {
    (!l.is_dont_care() && meets(l, rule) ? p.counted : p.ignored).push_back(l);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Matching

enum class MatchKind { kTruePositive, kFalsePositive, kIgnored };

struct Match {
  double score = 0.0;
  MatchKind kind = MatchKind::kFalsePositive;
  std::size_t pred_index = 0;  // index into the frame's prediction list
};

struct FrameMatches {
  std::vector<Match> matches;  // in descending score order
  std::size_t false_negatives = 0;
};

inline double label_iou_3d(const ObjectLabel& a, const ObjectLabel& b) noexcept {
  return iou_3d(to_box3d(a), to_box3d(b));
}

inline double label_iou_bev(const ObjectLabel& a, const ObjectLabel& b) noexcept {
  return iou_bev(to_bev(a), to_bev(b));
}

/// Greedy score-ordered matching in one frame. Each prediction takes the
/// unmatched counted GT of highest IoU >= threshold (TP); failing that, an
/// unmatched ignored GT with IoU >= threshold absorbs it; otherwise FP.
/// Every GT is used at most once. Equal scores keep input order.
template <typename IouFn>
FrameMatches match_detections(std::span<const ObjectLabel> counted, std::span<const ObjectLabel> ignored,
                              std::span<const ObjectLabel> preds, IouFn&& iou_fn, double threshold) {
  std::vector<std::size_t> order(preds.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!preds[i].score) throw Error(ErrorCode::kMissingScore, "prediction " + std::to_string(i) + " has no score");
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return *preds[a].score > *preds[b].score; });

  std::vector<bool> used_counted(counted.size(), false);
  std::vector<bool> used_ignored(ignored.size(), false);
  FrameMatches out;
  out.matches.reserve(preds.size());
  for (const auto pi : order) {
    const auto& pred = preds[pi];
    Match m{*pred.score, MatchKind::kFalsePositive, pi};
    double best = -1.0;
    std::size_t best_gt = counted.size();
    for (std::size_t g = 0; g < counted.size(); ++g) {
      if (used_counted[g]) continue;
      const double v = iou_fn(pred, counted[g]);
      if (v >= threshold && v > best) {
        best = v;
        best_gt = g;
      }
    }
    if (best_gt < counted.size()) {
      used_counted[best_gt] = true;
      m.kind = MatchKind::kTruePositive;
    } else {
      for (std::size_t g = 0; g < ignored.size(); ++g) {
        if (!used_ignored[g] && iou_fn(pred, ignored[g]) >= threshold) {
          used_ignored[g] = true;
          m.kind = MatchKind::kIgnored;
          break;
        }
      }
    }
    out.matches.push_back(m);
  }
  out.false_negatives =
      static_cast<std::size_t>(std::count(used_counted.begin(), used_counted.end(), false));
  return out;
}

// ---------------------------------------------------------------------------
// Average precision

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct PRCurve {
  std::vector<PrPoint> points;
  std::size_t positives = 0;
};

struct ApResult {
  double ap = 0.0;
  bool no_positives = false;  // zero counted GTs; ap is reported as 0
};

namespace detail {

struct Cumulative {
  std::size_t tp = 0;
  std::size_t fp = 0;
};

/// Cumulative (TP, FP) after each scored decision, ignored matches skipped.
inline std::vector<Cumulative> accumulate(std::vector<Match> matches) {
  std::stable_sort(matches.begin(), matches.end(),
                   [](const Match& a, const Match& b) { return a.score > b.score; });
  std::vector<Cumulative> out;
  Cumulative c;
  for (const auto& m : matches) {
    if (m.kind == MatchKind::kIgnored) continue;
    (m.kind == MatchKind::kTruePositive ? c.tp : c.fp) += 1;
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Precision/recall after each prediction of the score-sorted list.
inline PRCurve precision_recall(const std::vector<Match>& matches, std::size_t false_negatives) {
  PRCurve curve;
  const auto cum = detail::accumulate(matches);
  curve.positives = (cum.empty() ? 0 : cum.back().tp) + false_negatives;
  for (const auto& c : cum) {
    curve.points.push_back({curve.positives ? static_cast<double>(c.tp) / static_cast<double>(curve.positives) : 0.0,
                            static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp)});
  }
  return curve;
}

/// Interpolated AP: mean over recall samples r of max precision at recall >= r.
/// R40 samples r = 1/40 .. 40/40, R11 samples r = 0, 0.1 .. 1. Recall
/// comparisons are done in integers (tp * D >= j * positives) so sample
/// points that coincide with a recall level are never lost to rounding.
inline ApResult average_precision(const std::vector<Match>& matches, std::size_t false_negatives,
                                  Interp mode) {
  const auto cum = detail::accumulate(matches);
  const std::size_t positives = (cum.empty() ? 0 : cum.back().tp) + false_negatives;
  if (positives == 0) return {0.0, true};

  // Suffix maximum of precision, so that max_{r' >= r} p(r') is one lookup.
  std::vector<double> best(cum.size() + 1, 0.0);
  for (std::size_t i = cum.size(); i-- > 0;) {
    const double p = static_cast<double>(cum[i].tp) / static_cast<double>(cum[i].tp + cum[i].fp);
    best[i] = std::max(best[i + 1], p);
  }

  const std::size_t denom = mode == Interp::kR40 ? 40 : 10;
  const std::size_t first = mode == Interp::kR40 ? 1 : 0;
  const std::size_t samples = mode == Interp::kR40 ? 40 : 11;
  double sum = 0.0;
  std::size_t i = 0;
  for (std::size_t j = first; j <= denom; ++j) {
    while (i < cum.size() && cum[i].tp * denom < j * positives) ++i;
    sum += best[i];
  }
  return {sum / static_cast<double>(samples), false};
}

// ---------------------------------------------------------------------------
// mAP, class frequencies, ICFW

using ClassMap = std::map<std::string, double>;

/// Unweighted mean over the fixed class set, taken as an offset from the
/// first AP so that equal APs come back exactly.
inline double mean_ap(const ClassMap& aps) {
  double base = 0.0;
  double offsets = 0.0;
  bool first = true;
  for (const auto& c : kEvalClasses) {
    const auto it = aps.find(c);
    if (it == aps.end()) throw Error(ErrorCode::kMissingClass, c);
    if (first) {
      base = it->second;
      first = false;
    }
    offsets += it->second - base;
  }
  return base + offsets / static_cast<double>(kEvalClasses.size());
}

inline std::map<std::string, std::size_t> class_counts(std::span<const ObjectLabel> gts,
                                                       const DifficultyRule& rule) {
  std::map<std::string, std::size_t> counts;
  for (const auto& c : kEvalClasses) counts[c] = 0;
  for (const auto& l : gts) {
    auto it = counts.find(l.class_name);
    if (it != counts.end() && meets(l, rule)) ++it->second;
  }
  return counts;
}

inline std::optional<ClassMap> frequencies_from_counts(const std::map<std::string, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [c, n] : counts) total += n;
  if (total == 0) return std::nullopt;
  ClassMap f;
  for (const auto& [c, n] : counts) f[c] = static_cast<double>(n) / static_cast<double>(total);
  return f;
}

/// f_c per difficulty: counted instances of c over counted instances of all
/// classes in C. Throws EmptySplit when some difficulty counts nothing.
inline std::map<Difficulty, ClassMap> class_frequencies(std::span<const ObjectLabel> gts,
                                                        std::span<const DifficultyRule> rules) {
  std::map<Difficulty, ClassMap> out;
  for (const auto& rule : rules) {
    auto f = frequencies_from_counts(class_counts(gts, rule));
    if (!f) {
      throw Error(ErrorCode::kEmptySplit,
                  "no counted objects at difficulty " + std::string(to_string(rule.level)));
    }
    out[rule.level] = std::move(*f);
  }
  return out;
}

/// w_c = f_c^-1 / sum_c f_c^-1.
inline ClassMap icfw_weights(const ClassMap& f) {
  double norm = 0.0;
  for (const auto& [c, v] : f) {
    if (!(v > 0.0)) throw Error(ErrorCode::kZeroFrequency, c);
    norm += 1.0 / v;
  }
  ClassMap w;
  for (const auto& [c, v] : f) w[c] = (1.0 / v) / norm;
  return w;
}

/// sum_c w_c AP_c over the fixed class set. The sum is divided by sum_c w_c
/// (1 up to rounding) so that equal APs come back unchanged; equal weights
/// take the unweighted path and agree with mean_ap bit for bit.
inline double icfw_map(const ClassMap& aps, const ClassMap& w) {
  double sum = 0.0;
  double norm = 0.0;
  bool uniform = true;
  std::optional<double> first;
  for (const auto& c : kEvalClasses) {
    const auto a = aps.find(c);
    const auto b = w.find(c);
    if (a == aps.end() || b == w.end()) throw Error(ErrorCode::kMissingClass, c);
    sum += b->second * a->second;
    norm += b->second;
    if (!first) first = b->second;
    uniform = uniform && b->second == *first;
  }
  if (uniform && *first > 0.0) return mean_ap(aps);
  return norm > 0.0 ? sum / norm : 0.0;
}

// ---------------------------------------------------------------------------
// Full evaluation

struct EvalSettings {
  /// Per-class IoU thresholds; every class must list the same number of
  /// slots. mAP rows are formed per slot.
  std::map<std::string, std::vector<double>> thresholds = {
      {"Car", {0.7}}, {"Pedestrian", {0.25}}, {"Cyclist", {0.25}}};
  Interp interp = Interp::kR40;
  std::array<DifficultyRule, 3> rules = kKittiRules;

  std::size_t slots() const {
    std::size_t n = 0;
    for (const auto& c : kEvalClasses) {
      const auto it = thresholds.find(c);
      if (it == thresholds.end() || it->second.empty()) {
        throw Error(ErrorCode::kConfigInvalid, "no IoU threshold for class " + c);
      }
      if (n != 0 && it->second.size() != n) {
        throw Error(ErrorCode::kConfigInvalid, "every class needs the same number of IoU thresholds");
      }
      n = it->second.size();
    }
    return n;
  }
};

struct Frame {
  std::string id;
  std::vector<ObjectLabel> gts;
  std::vector<ObjectLabel> preds;
};

struct ApRecord {
  std::string cls;
  Difficulty difficulty = Difficulty::kEasy;
  Metric metric = Metric::k3D;
  std::size_t slot = 0;
  double threshold = 0.0;
  double ap = 0.0;
  bool no_positives = false;
};

struct SummaryRecord {
  Difficulty difficulty = Difficulty::kEasy;
  Metric metric = Metric::k3D;
  std::size_t slot = 0;
  double map = 0.0;
  std::optional<double> icfw_map;
};

struct FrequencyRecord {
  Difficulty difficulty = Difficulty::kEasy;
  std::map<std::string, std::size_t> counts;
  std::optional<ClassMap> frequencies;
  std::optional<ClassMap> weights;
  std::string weight_error;
};

struct EvalReport {
  Interp interp = Interp::kR40;
  std::size_t frames = 0;
  std::vector<ApRecord> aps;
  std::vector<SummaryRecord> summary;
  std::vector<FrequencyRecord> frequencies;

  const ApRecord* find(std::string_view cls, Difficulty d, Metric m, std::size_t slot = 0) const {
    for (const auto& r : aps) {
      if (r.cls == cls && r.difficulty == d && r.metric == m && r.slot == slot) return &r;
    }
    return nullptr;
  }

  const SummaryRecord* find_summary(Difficulty d, Metric m, std::size_t slot = 0) const {
    for (const auto& r : summary) {
      if (r.difficulty == d && r.metric == m && r.slot == slot) return &r;
    }
    return nullptr;
  }

  const FrequencyRecord* find_frequencies(Difficulty d) const {
    for (const auto& r : frequencies) {
      if (r.difficulty == d) return &r;
    }
    return nullptr;
  }
};

/// AP for one (class, rule, metric, threshold) cell over all frames.
inline ApResult evaluate_cell(std::span<const Frame> frames, std::string_view cls, const DifficultyRule& rule,
                              Metric metric, double threshold, Interp interp) {
  std::vector<Match> all;
  std::size_t fn = 0;
  for (const auto& frame : frames) {
    // DontCare regions carry sentinel 3D geometry and take no part in 3D/BEV matching.
    std::vector<ObjectLabel> counted;
    std::vector<ObjectLabel> ignored;
    for (const auto& g : frame.gts) {
      if (g.class_name != cls) continue;
      (meets(g, rule) ? counted : ignored).push_back(g);
    }
    std::vector<ObjectLabel> preds;
    for (const auto& p : frame.preds) {
      if (p.class_name == cls) preds.push_back(p);
    }
    auto fm = metric == Metric::k3D
                  ? match_detections(counted, ignored, preds, label_iou_3d, threshold)
                  : match_detections(counted, ignored, preds, label_iou_bev, threshold);
    all.insert(all.end(), fm.matches.begin(), fm.matches.end());
    fn += fm.false_negatives;
  }
  return average_precision(all, fn, interp);
}

inline EvalReport evaluate(std::span<const Frame> frames, const EvalSettings& settings) {
  const std::size_t slots = settings.slots();
  for (const auto& f : frames) {
    for (const auto& p : f.preds) {
      if (!p.score) throw Error(ErrorCode::kMissingScore, "frame " + f.id + ": prediction without score");
    }
  }

  EvalReport report;
  report.interp = settings.interp;
  report.frames = frames.size();

  std::vector<ObjectLabel> all_gts;
  for (const auto& f : frames) all_gts.insert(all_gts.end(), f.gts.begin(), f.gts.end());

  for (const auto& rule : settings.rules) {
    FrequencyRecord fr;
    fr.difficulty = rule.level;
    fr.counts = class_counts(all_gts, rule);
    fr.frequencies = frequencies_from_counts(fr.counts);
    if (!fr.frequencies) {
      fr.weight_error = "EmptySplit";
    } else {
      try {
        fr.weights = icfw_weights(*fr.frequencies);
      } catch (const Error& e) {
        fr.weight_error = e.what();
      }
    }
    report.frequencies.push_back(std::move(fr));
  }

  for (const auto& rule : settings.rules) {
    for (const auto metric : kMetrics) {
      for (std::size_t slot = 0; slot < slots; ++slot) {
        for (const auto& cls : kEvalClasses) {
          const double thr = settings.thresholds.at(cls)[slot];
          const auto res = evaluate_cell(frames, cls, rule, metric, thr, settings.interp);
          report.aps.push_back({cls, rule.level, metric, slot, thr, res.ap, res.no_positives});
        }
      }
    }
  }

  // Summary rows are recomputed from the stored records.
  for (const auto& rule : settings.rules) {
    const auto* fr = report.find_frequencies(rule.level);
    for (const auto metric : kMetrics) {
      for (std::size_t slot = 0; slot < slots; ++slot) {
        ClassMap aps;
        for (const auto& cls : kEvalClasses) aps[cls] = report.find(cls, rule.level, metric, slot)->ap;
        SummaryRecord s{rule.level, metric, slot, mean_ap(aps), std::nullopt};
        if (fr != nullptr && fr->weights) s.icfw_map = icfw_map(aps, *fr->weights);
        report.summary.push_back(s);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Directory loading and report rendering

namespace detail {

inline fs::path label_dir_of(const fs::path& root) {
  std::error_code ec;
  return fs::is_directory(root / kLabelDir, ec) ? root / kLabelDir : root;
}

inline std::set<std::string> list_label_ids(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kMissingFile, "no label directory: " + dir.string());
  std::set<std::string> ids;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && de.path().extension() == ".txt") ids.insert(de.path().stem().string());
  }
  return ids;
}

}  // namespace detail

/// Loads ground truth and predictions. Each root may be a KITTI dataset root
/// (with label_2/) or a bare label directory. With a split only its ids are
/// read; otherwise the two directories must hold exactly the same ids.
inline std::vector<Frame> load_frames(const fs::path& gt_root, const fs::path& pred_root,
                                      const std::optional<SplitManifest>& split = std::nullopt) {
  const fs::path gt_dir = detail::label_dir_of(gt_root);
  const fs::path pred_dir = detail::label_dir_of(pred_root);
  const auto gt_ids = detail::list_label_ids(gt_dir);
  const auto pred_ids = detail::list_label_ids(pred_dir);

  std::vector<std::string> ids;
  if (split) {
    ids = split->ids;
    for (const auto& id : ids) {
      if (!gt_ids.contains(id)) throw Error(ErrorCode::kIdMismatch, "no ground truth for " + id);
      if (!pred_ids.contains(id)) throw Error(ErrorCode::kIdMismatch, "no predictions for " + id);
    }
  } else {
    for (const auto& id : gt_ids) {
      if (!pred_ids.contains(id)) throw Error(ErrorCode::kIdMismatch, "no predictions for " + id);
    }
    for (const auto& id : pred_ids) {
      if (!gt_ids.contains(id)) throw Error(ErrorCode::kIdMismatch, "predictions for unknown id " + id);
    }
    ids.assign(gt_ids.begin(), gt_ids.end());
  }

  std::vector<Frame> frames;
  frames.reserve(ids.size());
  for (const auto& id : ids) {
    Frame f;
    f.id = id;
    f.gts = read_label_file(gt_dir / (id + ".txt"));
    f.preds = read_label_file(pred_dir / (id + ".txt"));
    for (const auto& p : f.preds) {
      if (!p.score) throw Error(ErrorCode::kMissingScore, "prediction file " + id + ".txt has a line without score");
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["interp"] = std::string(to_string(r.interp));
  j["frames"] = r.frames;
  j["records"] = nlohmann::json::array();
  for (const auto& a : r.aps) {
    j["records"].push_back({{"class", a.cls},
                            {"difficulty", std::string(to_string(a.difficulty))},
                            {"metric", std::string(to_string(a.metric))},
                            {"slot", a.slot},
                            {"threshold", a.threshold},
                            {"ap", a.ap},
                            {"no_positives", a.no_positives}});
  }
  j["summary"] = nlohmann::json::array();
  for (const auto& s : r.summary) {
    nlohmann::json rec = {{"difficulty", std::string(to_string(s.difficulty))},
                          {"metric", std::string(to_string(s.metric))},
                          {"slot", s.slot},
                          {"map", s.map}};
    rec["icfw_map"] = s.icfw_map ? nlohmann::json(*s.icfw_map) : nlohmann::json(nullptr);
    j["summary"].push_back(rec);
  }
  j["class_frequencies"] = nlohmann::json::array();
  for (const auto& f : r.frequencies) {
    nlohmann::json rec = {{"difficulty", std::string(to_string(f.difficulty))}, {"counts", f.counts}};
    rec["frequencies"] = f.frequencies ? nlohmann::json(*f.frequencies) : nlohmann::json(nullptr);
    rec["weights"] = f.weights ? nlohmann::json(*f.weights) : nlohmann::json(nullptr);
    if (!f.weight_error.empty()) rec["weight_error"] = f.weight_error;
    j["class_frequencies"].push_back(rec);
  }
  return j;
}

namespace detail {

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

/// Frequency/weight pairs, one row per difficulty, one column per class.
inline std::string format_frequency_table(const std::vector<FrequencyRecord>& rows) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-10s", "f_c/w_c");
  out += buf;
  for (const auto& c : kEvalClasses) {
    std::snprintf(buf, sizeof(buf), " %12s", c.c_str());
    out += buf;
  }
  out += "\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-10s", std::string(to_string(r.difficulty)).c_str());
    out += buf;
    for (const auto& c : kEvalClasses) {
      const std::string cell = (r.frequencies ? detail::fixed2(r.frequencies->at(c)) : "-") + "/" +
                               (r.weights ? detail::fixed2(r.weights->at(c)) : "-");
      std::snprintf(buf, sizeof(buf), " %12s", cell.c_str());
      out += buf;
    }
    if (!r.weight_error.empty()) out += "  (" + r.weight_error + ")";
    out += "\n";
  }
  return out;
}

/// Human-readable table: APs in percent, one row per (difficulty, metric, slot).
inline std::string format_report(const EvalReport& r) {
  std::string out = "AP (" + std::string(to_string(r.interp)) + ") over " + std::to_string(r.frames) + " frames\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %-6s", "difficulty", "metric");
  out += buf;
  for (const auto& c : kEvalClasses) {
    std::snprintf(buf, sizeof(buf), " %16s", c.c_str());
    out += buf;
  }
  out += "      mAP  ICFW-mAP\n";
  for (const auto& s : r.summary) {
    std::snprintf(buf, sizeof(buf), "%-10s %-6s", std::string(to_string(s.difficulty)).c_str(),
                  std::string(to_string(s.metric)).c_str());
    out += buf;
    for (const auto& c : kEvalClasses) {
      const auto* a = r.find(c, s.difficulty, s.metric, s.slot);
      std::snprintf(buf, sizeof(buf), " %9.2f (@%.2f)", 100.0 * a->ap, a->threshold);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), " %8.2f", 100.0 * s.map);
    out += buf;
    if (s.icfw_map) {
      std::snprintf(buf, sizeof(buf), " %9.2f", 100.0 * *s.icfw_map);
    } else {
      std::snprintf(buf, sizeof(buf), " %9s", "n/a");
    }
    out += buf;
    out += "\n";
  }
  out += "\nclass frequencies\n" + format_frequency_table(r.frequencies);
  return out;
}

}  // namespace boxaug
