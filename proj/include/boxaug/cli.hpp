// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boxaug/augment.hpp"
#include "boxaug/config.hpp"
#include "boxaug/error.hpp"
#include "boxaug/eval.hpp"
#include "boxaug/kitti_io.hpp"
#include "boxaug/pipeline.hpp"
#include "boxaug/png.hpp"
#include "boxaug/preview.hpp"

namespace boxaug::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kUnknownOp: return kExitUsage;
    default: return kExitFailure;
  }
}

/// Flags shared by every command. Unset optionals fall back to the config file.
struct CommonFlags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  bool verbose = false;
};

struct AugmentFlags {
  std::optional<std::string> input;
  std::optional<std::string> split;
  std::optional<std::string> output;
};

struct EvalFlags {
  std::string gt;
  std::string pred;
  std::optional<std::string> split;
  std::optional<std::string> iou;
  std::optional<std::string> iou_all;
  std::optional<std::string> interp;
  std::optional<std::string> report;
};

struct StatsFlags {
  std::string labels;
  std::optional<std::string> split;
};

struct PreviewFlags {
  std::optional<std::string> input;
  std::optional<std::string> split;
  std::string sample;
  std::string op;
  std::string out;
};

/// Defaults, then the config file, then command-line flags.
inline RunConfig resolve_config(const CommonFlags& common, const AugmentFlags& flags = {}) {
  RunConfig cfg = common.config ? load_run_config(*common.config) : RunConfig{};
  if (common.seed) cfg.seed = *common.seed;
  if (common.workers) cfg.workers = *common.workers;
  if (flags.input) cfg.dataset = *flags.input;
  if (flags.split) cfg.split = *flags.split;
  if (flags.output) cfg.output = *flags.output;
  if (cfg.workers == 0) throw Error(ErrorCode::kConfigInvalid, "--workers must be >= 1");
  return cfg;
}

namespace detail {

inline std::vector<double> parse_number_list(const std::string& text, std::string_view what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigInvalid, std::string(what) + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kConfigInvalid, std::string(what) + " is empty");
  return out;
}

/// "car=0.7,pedestrian=0.25" -> per-class single-slot thresholds.
inline void apply_iou_flag(const std::string& text, EvalSettings& s) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfigInvalid, "--iou expects class=value pairs");
    s.thresholds[canonical_class(item.substr(0, eq))] = parse_number_list(item.substr(eq + 1), "--iou");
  }
}

inline SplitManifest split_or_all(const std::optional<std::filesystem::path>& split, const DatasetIndex& index) {
  if (split) return read_split(*split);
  return {"all", index.ids()};
}

}  // namespace detail

inline int cmd_augment(const CommonFlags& common, const AugmentFlags& flags, std::ostream& out) {
  const RunConfig cfg = resolve_config(common, flags);
  if (!cfg.dataset) throw Error(ErrorCode::kConfigInvalid, "no input dataset (--input or config 'dataset')");
  if (!cfg.output) throw Error(ErrorCode::kConfigInvalid, "no output directory (--output or config 'output')");
  const auto index = DatasetIndex::scan(*cfg.dataset);
  const auto split = detail::split_or_all(cfg.split, index);

  const auto t0 = std::chrono::steady_clock::now();
  const auto report = run_pipeline(index, split, cfg.schedule, cfg.seed, *cfg.output, cfg.workers);
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out << "split " << split.name << ": " << split.ids.size() << " samples, seed " << cfg.seed << "\n";
  if (cfg.schedule.empty()) out << "copied " << report.samples_copied << " samples verbatim\n";
  for (const auto& e : report.entries) {
    out << e.output_dir.filename().string() << ": written=" << e.samples_written << " kept=" << e.boxes_kept
        << " rejected=" << e.boxes_rejected << " dropped=" << e.boxes_dropped << "\n";
  }
  for (const auto& f : report.failed) out << "FAILED " << f << "\n";
  if (common.verbose) out << "elapsed " << secs << " s\n";
  return report.ok() ? kExitOk : kExitFailure;
}

inline int cmd_eval(const CommonFlags& common, const EvalFlags& flags, std::ostream& out) {
  RunConfig cfg = resolve_config(common);
  if (flags.iou_all) {
    const auto thr = detail::parse_number_list(*flags.iou_all, "--iou-all");
    for (const auto& c : kEvalClasses) cfg.eval.thresholds[c] = thr;
  }
  if (flags.iou) detail::apply_iou_flag(*flags.iou, cfg.eval);
  if (flags.interp) cfg.eval.interp = parse_interp(*flags.interp);
  validate(cfg.eval);

  std::optional<SplitManifest> split;
  if (flags.split) split = read_split(*flags.split);
  const auto frames = load_frames(flags.gt, flags.pred, split);
  const auto report = evaluate(frames, cfg.eval);
  out << format_report(report);
  if (flags.report) {
    const std::string text = to_json(report).dump(2) + "\n";
    write_file_bytes(*flags.report, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  return kExitOk;
}

inline int cmd_stats(const CommonFlags& common, const StatsFlags& flags, std::ostream& out) {
  const RunConfig cfg = resolve_config(common);
  const std::filesystem::path dir = ::boxaug::detail::label_dir_of(flags.labels);
  std::vector<std::string> ids;
  if (flags.split) {
    ids = read_split(*flags.split).ids;
  } else {
    const auto all = ::boxaug::detail::list_label_ids(dir);
    ids.assign(all.begin(), all.end());
  }
  std::vector<ObjectLabel> gts;
  for (const auto& id : ids) {
    auto labels = read_label_file(dir / (id + ".txt"));
    gts.insert(gts.end(), labels.begin(), labels.end());
  }

  std::vector<FrequencyRecord> rows;
  bool any = false;
  bool weight_error = false;
  for (const auto& rule : cfg.eval.rules) {
    FrequencyRecord r;
    r.difficulty = rule.level;
    r.counts = class_counts(gts, rule);
    r.frequencies = frequencies_from_counts(r.counts);
    if (r.frequencies) {
      any = true;
      try {
        r.weights = icfw_weights(*r.frequencies);
      } catch (const Error& e) {
        r.weight_error = e.what();
        weight_error = true;
      }
    } else {
      r.weight_error = "EmptySplit";
    }
    rows.push_back(std::move(r));
  }
  if (!any) throw Error(ErrorCode::kEmptySplit, "no counted Car/Pedestrian/Cyclist objects in " + std::to_string(ids.size()) + " frames");

  out << "frames " << ids.size() << "\n";
  out << format_frequency_table(rows);
  return weight_error ? kExitFailure : kExitOk;
}

inline int cmd_preview(const CommonFlags& common, const PreviewFlags& flags, std::ostream& out) {
  AugmentFlags af;
  af.input = flags.input;
  af.split = flags.split;
  const RunConfig cfg = resolve_config(common, af);
  const OpKind op = parse_op(flags.op);
  if (!cfg.dataset) throw Error(ErrorCode::kConfigInvalid, "no input dataset (--input or config 'dataset')");
  const auto index = DatasetIndex::scan(*cfg.dataset);
  const auto split = detail::split_or_all(cfg.split, index);
  const auto it = std::find(split.ids.begin(), split.ids.end(), flags.sample);
  if (it == split.ids.end()) throw Error(ErrorCode::kMissingSample, "sample '" + flags.sample + "' not found");
  const auto ordinal = static_cast<std::size_t>(it - split.ids.begin());

  ScheduleEntry entry{op, cfg.augment};
  for (const auto& e : cfg.schedule) {
    if (e.op == op) {
      entry.config = e.config;
      break;
    }
  }
  const Sample original = load_sample(index, flags.sample);
  const auto augmented = apply_entry(index, split.ids, ordinal, 0, entry, cfg.seed);
  write_png(flags.out, render_preview(original, augmented));
  out << "wrote " << flags.out << " (" << op_name(op) << ", " << augmented.regions.size() << " regions, "
      << augmented.sample.labels.size() << " boxes)\n";
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"boxaug: 2D augmentation and 3D detection evaluation for KITTI-format datasets"};
  app.require_subcommand(1);
  CommonFlags common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON run configuration");
    sub->add_option("--seed", common.seed, "global random seed");
    sub->add_option("--workers", common.workers, "worker threads");
    sub->add_flag("--verbose", common.verbose, "extra diagnostics");
  };

  AugmentFlags aug;
  auto* augment = app.add_subcommand("augment", "apply the augmentation schedule to a split");
  add_common(augment);
  augment->add_option("--input", aug.input, "KITTI dataset root");
  augment->add_option("--split", aug.split, "split manifest (one id per line)");
  augment->add_option("--output", aug.output, "output root");

  EvalFlags ev;
  auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
  add_common(eval);
  eval->add_option("--gt", ev.gt, "ground-truth labels (dataset root or label dir)")->required();
  eval->add_option("--pred", ev.pred, "prediction labels with scores")->required();
  eval->add_option("--split", ev.split, "restrict to the ids of a split manifest");
  eval->add_option("--iou", ev.iou, "per-class IoU thresholds, e.g. car=0.7,pedestrian=0.25");
  eval->add_option("--iou-all", ev.iou_all, "same thresholds for every class, e.g. 0.25,0.5,0.7");
  eval->add_option("--interp", ev.interp, "r40 (default) or r11");
  eval->add_option("--report", ev.report, "write the machine-readable report here");

  StatsFlags st;
  auto* stats = app.add_subcommand("stats", "class frequencies and inverse-frequency weights");
  add_common(stats);
  stats->add_option("--labels", st.labels, "label directory or dataset root")->required();
  stats->add_option("--split", st.split, "split manifest");

  PreviewFlags pv;
  auto* preview = app.add_subcommand("preview", "render original and augmented sample side by side");
  add_common(preview);
  preview->add_option("--input", pv.input, "KITTI dataset root");
  preview->add_option("--split", pv.split, "split manifest used as the partner pool");
  preview->add_option("--sample", pv.sample, "sample id")->required();
  preview->add_option("--op", pv.op, "augmentation op")->required();
  preview->add_option("--out", pv.out, "output PNG")->required();

  std::vector<const char*> argv;
  argv.push_back("boxaug");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (augment->parsed()) return cmd_augment(common, aug, out);
    if (eval->parsed()) return cmd_eval(common, ev, out);
    if (stats->parsed()) return cmd_stats(common, st, out);
    if (preview->parsed()) return cmd_preview(common, pv, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace boxaug::cli
