// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxaug/augment.hpp"
#include "boxaug/kitti_io.hpp"
#include "boxaug/random.hpp"

namespace boxaug {

struct ScheduleEntry {
  OpKind op = OpKind::kCutout;
  AugmentConfig config;
};

struct EntrySummary {
  std::string op;
  std::filesystem::path output_dir;
  std::size_t samples_written = 0;
  std::size_t boxes_kept = 0;
  std::size_t boxes_rejected = 0;
  std::size_t boxes_dropped = 0;
};

struct PipelineReport {
  std::size_t samples_copied = 0;  // verbatim copies (empty schedule)
  std::vector<EntrySummary> entries;
  std::vector<std::string> failed;  // "<entry>:<id>: <reason>", ordered

  bool ok() const noexcept { return failed.empty(); }
};

/// Output directory for schedule entry `k`, e.g. "00_box-mixup".
inline std::string entry_dir_name(std::size_t k, OpKind op) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02zu", k);
  return std::string(buf) + "_" + std::string(op_name(op));
}

/// Draws `count` partner ordinals uniformly from [0, n) excluding `self`.
/// Partners are distinct whenever the split has enough other samples.
inline std::vector<std::size_t> draw_partners(std::size_t self, std::size_t n, std::size_t count,
                                              RandomSource& rng) {
  std::vector<std::size_t> out;
  if (count == 0) return out;
  if (n < 2) throw Error(ErrorCode::kMissingSample, "split has no partner sample");
  const bool distinct = n - 1 >= count;
  while (out.size() < count) {
    auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 2));
    if (j >= self) ++j;
    if (distinct && std::find(out.begin(), out.end(), j) != out.end()) continue;
    out.push_back(j);
  }
  return out;
}

/// Applies one op to the sample at `ordinal` of `ids`, with partners drawn
/// from the stream derive_stream(seed, {ordinal, entry}).
inline AugmentedSample apply_entry(const DatasetIndex& index, const std::vector<std::string>& ids,
                                   std::size_t ordinal, std::size_t entry, const ScheduleEntry& sched,
                                   std::uint64_t seed) {
  auto rng = derive_stream(seed, {static_cast<std::uint64_t>(ordinal), static_cast<std::uint64_t>(entry)});
  const auto partners = draw_partners(ordinal, ids.size(), partner_count(sched.op), rng);
  const Sample ref = load_sample(index, ids[ordinal]);
  switch (sched.op) {
    case OpKind::kCutout: return cutout(ref, sched.config, rng);
    case OpKind::kPhotometric: return photometric(ref, sched.config, rng);
    case OpKind::kBoxMixup:
      return box_mixup(ref, load_sample(index, ids[partners[0]]), sched.config, rng);
    case OpKind::kBoxCutPaste:
      return box_cut_paste(ref, load_sample(index, ids[partners[0]]), sched.config, rng);
    case OpKind::kMosaicTile: {
      const std::array<Sample, 4> quads{ref, load_sample(index, ids[partners[0]]),
                                        load_sample(index, ids[partners[1]]),
                                        load_sample(index, ids[partners[2]])};
      auto out = mosaic_tile(quads, sched.config);
      out.provenance.back().draw_digest = rng.digest();
      return out;
    }
  }
  throw Error(ErrorCode::kUnknownOp, "unhandled op");
}

namespace detail {

/// Runs fn(i) for i in [0, n) on `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
}

struct TaskResult {
  bool ok = false;
  std::string error;
  AugmentStats stats;
  std::vector<Provenance> provenance;
};

inline void copy_verbatim(const DatasetIndex& index, const std::string& id, const fs::path& out_root) {
  const auto* e = index.find(id);
  if (e == nullptr) throw Error(ErrorCode::kMissingFile, "sample '" + id + "' not in index");
  std::error_code ec;
  fs::copy_file(e->image_path, out_root / kImageDir / (id + ".png"), fs::copy_options::overwrite_existing, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "copy " + e->image_path.string() + ": " + ec.message());
  if (e->label_path) {
    fs::copy_file(*e->label_path, out_root / kLabelDir / (id + ".txt"), fs::copy_options::overwrite_existing, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "copy " + e->label_path->string() + ": " + ec.message());
  }
}

inline void write_provenance(const fs::path& path, const std::vector<std::string>& ids,
                             const std::vector<TaskResult>& results) {
  std::string text;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!results[i].ok) continue;
    nlohmann::json rec;
    rec["id"] = ids[i];
    for (const auto& p : results[i].provenance) {
      char digest[17];
      std::snprintf(digest, sizeof(digest), "%016llx", static_cast<unsigned long long>(p.draw_digest));
      rec["ops"].push_back({{"op", p.op}, {"partners", p.partners}, {"draw_digest", digest}});
    }
    text += rec.dump() + "\n";
  }
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace detail

/// Processes every sample of `split`, once per schedule entry, writing each
/// entry's outputs under out_root/<NN>_<op>/ in KITTI layout together with a
/// provenance.jsonl. An empty schedule copies the split verbatim into out_root.
/// Output bytes depend only on (dataset, schedule, seed), never on `workers`.
inline PipelineReport run_pipeline(const DatasetIndex& index, const SplitManifest& split,
                                   const std::vector<ScheduleEntry>& schedule, std::uint64_t seed,
                                   const fs::path& out_root, unsigned workers = 1) {
  for (const auto& e : schedule) validate(e.config);
  validate_split(index, split);
  PipelineReport report;
  const auto& ids = split.ids;

  if (schedule.empty()) {
    ensure_directory(out_root / kImageDir);
    ensure_directory(out_root / kLabelDir);
    std::vector<detail::TaskResult> results(ids.size());
    detail::parallel_for(ids.size(), workers, [&](std::size_t i) {
      try {
        detail::copy_verbatim(index, ids[i], out_root);
        results[i].ok = true;
      } catch (const std::exception& ex) {
        results[i].error = ex.what();
      }
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (results[i].ok) {
        ++report.samples_copied;
      } else {
        report.failed.push_back("copy:" + ids[i] + ": " + results[i].error);
      }
    }
    return report;
  }

  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const auto& sched = schedule[k];
    EntrySummary summary;
    summary.op = std::string(op_name(sched.op));
    summary.output_dir = out_root / entry_dir_name(k, sched.op);
    ensure_directory(summary.output_dir / kImageDir);
    ensure_directory(summary.output_dir / kLabelDir);

    std::vector<detail::TaskResult> results(ids.size());
    detail::parallel_for(ids.size(), workers, [&](std::size_t i) {
      try {
        auto aug = apply_entry(index, ids, i, k, sched, seed);
        write_sample(aug.sample, summary.output_dir);
        results[i].stats = aug.stats;
        results[i].provenance = std::move(aug.provenance);
        results[i].ok = true;
      } catch (const std::exception& ex) {
        results[i].error = ex.what();
      }
    });

    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto& r = results[i];
      if (!r.ok) {
        report.failed.push_back(entry_dir_name(k, sched.op) + ":" + ids[i] + ": " + r.error);
        continue;
      }
      ++summary.samples_written;
      summary.boxes_kept += r.stats.kept;
      summary.boxes_rejected += r.stats.rejected;
      summary.boxes_dropped += r.stats.dropped;
    }
    detail::write_provenance(summary.output_dir / "provenance.jsonl", ids, results);
    report.entries.push_back(std::move(summary));
  }
  return report;
}

}  // namespace boxaug
