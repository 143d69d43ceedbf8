// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxaug/augment.hpp"
#include "boxaug/error.hpp"
#include "boxaug/eval.hpp"
#include "boxaug/pipeline.hpp"

namespace boxaug {

/// Everything a CLI run needs. Command-line flags override values read
/// from the config document, which override these defaults.
struct RunConfig {
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> split;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  AugmentConfig augment;
  std::vector<ScheduleEntry> schedule;
  EvalSettings eval;
};

namespace config_detail {

using nlohmann::json;

inline void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::kConfigInvalid, std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const auto a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorCode::kConfigInvalid, "unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& j, std::string_view key, T& dst, std::string_view where) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    dst = it->template get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfigInvalid, std::string(where) + "." + std::string(key) + " has the wrong type");
  }
}

inline FillMode parse_fill(const std::string& s) {
  if (s == "zeros") return FillMode::kZeros;
  if (s == "grey" || s == "gray") return FillMode::kGrey;
  if (s == "gaussian") return FillMode::kGaussian;
  throw Error(ErrorCode::kConfigInvalid, "cutout.fill must be zeros, grey or gaussian");
}

inline void apply_iou_check(const json& j, IouCheckConfig& c, std::string_view where) {
  check_keys(j, where, {"iou_check", "iou_threshold"});
  read(j, "iou_check", c.iou_check, where);
  read(j, "iou_threshold", c.iou_threshold, where);
}

}  // namespace config_detail

/// Applies the (possibly partial) augment object `j` on top of `cfg`.
inline void apply_augment_json(const nlohmann::json& j, AugmentConfig& cfg, std::string_view where = "augment") {
  using namespace config_detail;
  check_keys(j, where, {"cutout", "photometric", "mixup", "cutpaste", "mosaic", "op"});
  if (const auto it = j.find("cutout"); it != j.end()) {
    check_keys(*it, "cutout", {"holes", "side", "fill"});
    read(*it, "holes", cfg.cutout.holes, "cutout");
    read(*it, "side", cfg.cutout.side, "cutout");
    if (it->contains("fill")) {
      std::string fill;
      read(*it, "fill", fill, "cutout");
      cfg.cutout.fill = parse_fill(fill);
    }
  }
  if (const auto it = j.find("photometric"); it != j.end()) {
    check_keys(*it, "photometric",
               {"blur_len", "blur_prob", "rgb_shift_max", "rgb_shift_prob", "contrast_max", "contrast_prob"});
    auto& p = cfg.photometric;
    read(*it, "blur_len", p.blur_len, "photometric");
    read(*it, "blur_prob", p.blur_prob, "photometric");
    read(*it, "rgb_shift_max", p.rgb_shift_max, "photometric");
    read(*it, "rgb_shift_prob", p.rgb_shift_prob, "photometric");
    read(*it, "contrast_max", p.contrast_max, "photometric");
    read(*it, "contrast_prob", p.contrast_prob, "photometric");
  }
  if (const auto it = j.find("mixup"); it != j.end()) config_detail::apply_iou_check(*it, cfg.mixup, "mixup");
  if (const auto it = j.find("cutpaste"); it != j.end()) config_detail::apply_iou_check(*it, cfg.cutpaste, "cutpaste");
  if (const auto it = j.find("mosaic"); it != j.end()) {
    check_keys(*it, "mosaic", {"retention"});
    read(*it, "retention", cfg.mosaic.retention, "mosaic");
  }
}

/// Canonical class spelling for evaluation (car -> Car).
inline std::string canonical_class(std::string_view name) {
  for (const auto& c : kEvalClasses) {
    if (c.size() == name.size() &&
        std::equal(c.begin(), c.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
        })) {
      return c;
    }
  }
  throw Error(ErrorCode::kConfigInvalid, "unknown evaluation class '" + std::string(name) + "'");
}

inline void apply_eval_json(const nlohmann::json& j, EvalSettings& s) {
  using namespace config_detail;
  check_keys(j, "eval", {"iou", "interp", "difficulty"});
  if (const auto it = j.find("iou"); it != j.end()) {
    if (!it->is_object()) throw Error(ErrorCode::kConfigInvalid, "eval.iou must be an object");
    for (const auto& [cls, v] : it->items()) {
      std::vector<double> thr;
      if (v.is_number()) {
        thr.push_back(v.get<double>());
      } else if (v.is_array()) {
        for (const auto& x : v) {
          if (!x.is_number()) throw Error(ErrorCode::kConfigInvalid, "eval.iou values must be numbers");
          thr.push_back(x.get<double>());
        }
      } else {
        throw Error(ErrorCode::kConfigInvalid, "eval.iou." + cls + " must be a number or list");
      }
      s.thresholds[canonical_class(cls)] = thr;
    }
  }
  if (const auto it = j.find("interp"); it != j.end()) {
    if (!it->is_string()) throw Error(ErrorCode::kConfigInvalid, "eval.interp must be a string");
    s.interp = parse_interp(it->get<std::string>());
  }
  if (const auto it = j.find("difficulty"); it != j.end()) {
    check_keys(*it, "eval.difficulty", {"easy", "moderate", "hard"});
    for (auto& rule : s.rules) {
      const auto r = it->find(std::string(to_string(rule.level)));
      if (r == it->end()) continue;
      const std::string where = "eval.difficulty." + std::string(to_string(rule.level));
      check_keys(*r, where, {"min_box_height", "max_occlusion", "max_truncation"});
      read(*r, "min_box_height", rule.min_box_height, where);
      read(*r, "max_occlusion", rule.max_occlusion, where);
      read(*r, "max_truncation", rule.max_truncation, where);
    }
  }
}

inline void validate(const EvalSettings& s) {
  (void)s.slots();
  for (const auto& [cls, thr] : s.thresholds) {
    for (const double t : thr) {
      if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::kConfigInvalid, "IoU thresholds must lie in (0,1]");
    }
  }
}

/// Builds a RunConfig from a parsed config document on top of the defaults.
inline RunConfig parse_run_config(const nlohmann::json& j) {
  using namespace config_detail;
  check_keys(j, "config", {"dataset", "split", "output", "seed", "workers", "augment", "schedule", "eval"});
  RunConfig cfg;
  auto path_field = [&](std::string_view key, std::optional<std::filesystem::path>& dst) {
    std::string v;
    if (j.contains(key)) {
      read(j, key, v, "config");
      dst = v;
    }
  };
  path_field("dataset", cfg.dataset);
  path_field("split", cfg.split);
  path_field("output", cfg.output);
  read(j, "seed", cfg.seed, "config");
  read(j, "workers", cfg.workers, "config");
  if (const auto it = j.find("augment"); it != j.end()) apply_augment_json(*it, cfg.augment);
  validate(cfg.augment);
  if (const auto it = j.find("schedule"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::kConfigInvalid, "schedule must be a list");
    for (const auto& e : *it) {
      if (!e.is_object() || !e.contains("op") || !e["op"].is_string()) {
        throw Error(ErrorCode::kConfigInvalid, "schedule entries need a string 'op'");
      }
      ScheduleEntry entry;
      try {
        entry.op = parse_op(e["op"].get<std::string>());
      } catch (const Error&) {
        throw Error(ErrorCode::kConfigInvalid, "unknown op '" + e["op"].get<std::string>() + "' in schedule");
      }
      entry.config = cfg.augment;
      apply_augment_json(e, entry.config, "schedule entry");
      validate(entry.config);
      cfg.schedule.push_back(std::move(entry));
    }
  }
  if (const auto it = j.find("eval"); it != j.end()) apply_eval_json(*it, cfg.eval);
  validate(cfg.eval);
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot read config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace boxaug
