// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "boxaug/error.hpp"
#include "boxaug/png.hpp"
#include "boxaug/types.hpp"

namespace boxaug {

namespace fs = std::filesystem;

inline constexpr std::string_view kImageDir = "image_2";
inline constexpr std::string_view kLabelDir = "label_2";

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline double parse_real(std::string_view token, std::size_t line_no, std::string_view field) {
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw MalformedLine(line_no, "field '" + std::string(field) + "' is not a finite number: '" +
                                     std::string(token) + "'");
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Wraps an angle into [-pi, pi]. Values already in range are returned unchanged.
inline double normalize_angle(double a) noexcept {
  if (a >= -std::numbers::pi && a <= std::numbers::pi) return a;
  return std::remainder(a, 2.0 * std::numbers::pi);
}

/// Parses one KITTI object line: 15 fields, or 16 with a trailing score.
inline ObjectLabel parse_label_line(std::string_view line, std::size_t line_no = 0) {
  const auto tok = detail::split_ws(line);
  if (tok.size() != 15 && tok.size() != 16) {
    throw MalformedLine(line_no, "expected 15 or 16 fields, got " + std::to_string(tok.size()));
  }
  ObjectLabel l;
  l.class_name = std::string(tok[0]);
  l.truncation = detail::parse_real(tok[1], line_no, "truncated");
  const double occ = detail::parse_real(tok[2], line_no, "occluded");
  if (occ != std::floor(occ) || occ < -1.0 || occ > 3.0) {
    throw MalformedLine(line_no, "occlusion must be an integer in {-1,0,1,2,3}");
  }
  l.occlusion = static_cast<int>(occ);
  l.alpha = normalize_angle(detail::parse_real(tok[3], line_no, "alpha"));
  l.box2d = {detail::parse_real(tok[4], line_no, "left"), detail::parse_real(tok[5], line_no, "top"),
             detail::parse_real(tok[6], line_no, "right"),
             detail::parse_real(tok[7], line_no, "bottom")};
  l.dims3d = {detail::parse_real(tok[8], line_no, "height"), detail::parse_real(tok[9], line_no, "width"),
              detail::parse_real(tok[10], line_no, "length")};
  l.location3d = {detail::parse_real(tok[11], line_no, "x"), detail::parse_real(tok[12], line_no, "y"),
                  detail::parse_real(tok[13], line_no, "z")};
  l.rotation_y = normalize_angle(detail::parse_real(tok[14], line_no, "rotation_y"));
  if (tok.size() == 16) l.score = detail::parse_real(tok[15], line_no, "score");
  return l;
}

/// Canonical text form: reals with two decimals, occlusion as an integer,
/// no trailing newline.
inline std::string serialize_label(const ObjectLabel& l) {
  char buf[512];
  int n = std::snprintf(buf, sizeof(buf),
                        "%s %.2f %d %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f",
                        l.class_name.c_str(), l.truncation, l.occlusion, l.alpha, l.box2d.left,
                        l.box2d.top, l.box2d.right, l.box2d.bottom, l.dims3d.height, l.dims3d.width,
                        l.dims3d.length, l.location3d.x, l.location3d.y, l.location3d.z, l.rotation_y);
  std::string out(buf, static_cast<std::size_t>(std::max(n, 0)));
  if (l.score) {
    n = std::snprintf(buf, sizeof(buf), " %.2f", *l.score);
    out.append(buf, static_cast<std::size_t>(std::max(n, 0)));
  }
  return out;
}

/// Parses a whole label file body. Blank lines are skipped; line numbers in
/// errors are 1-based.
inline std::vector<ObjectLabel> parse_label_text(std::string_view text) {
  std::vector<ObjectLabel> labels;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    ++line_no;
    if (!detail::trim(line).empty()) labels.push_back(parse_label_line(line, line_no));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return labels;
}

inline std::string serialize_labels(const std::vector<ObjectLabel>& labels) {
  std::string out;
  for (const auto& l : labels) {
    out += serialize_label(l);
    out += '\n';
  }
  return out;
}

inline std::vector<ObjectLabel> read_label_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_label_text(ss.str());
  } catch (const MalformedLine& e) {
    throw MalformedLine(e.line(), path.string() + ": " + e.what());
  }
}

inline void write_label_file(const fs::path& path, const std::vector<ObjectLabel>& labels) {
  const std::string text = serialize_labels(labels);
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// Sorted listing of a KITTI-layout directory (image_2/<id>.png, label_2/<id>.txt).
class DatasetIndex {
 public:
  struct Entry {
    std::string id;
    fs::path image_path;
    std::optional<fs::path> label_path;
  };

  static DatasetIndex scan(const fs::path& root) {
    const fs::path image_dir = root / kImageDir;
    std::error_code ec;
    if (!fs::is_directory(image_dir, ec)) {
      throw Error(ErrorCode::kMissingFile, "no image directory: " + image_dir.string());
    }
    DatasetIndex index;
    index.root_ = root;
    for (const auto& de : fs::directory_iterator(image_dir)) {
      if (!de.is_regular_file() || de.path().extension() != ".png") continue;
      Entry e;
      e.id = de.path().stem().string();
      e.image_path = de.path();
      const fs::path label = root / kLabelDir / (e.id + ".txt");
      if (fs::is_regular_file(label, ec)) e.label_path = label;
      index.entries_.push_back(std::move(e));
    }
    std::sort(index.entries_.begin(), index.entries_.end(),
              [](const Entry& a, const Entry& b) { return a.id < b.id; });
    return index;
  }

  const fs::path& root() const noexcept { return root_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.id);
    return out;
  }

  const Entry* find(std::string_view id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Entry& e, std::string_view key) { return e.id < key; });
    return (it != entries_.end() && it->id == id) ? &*it : nullptr;
  }

  bool contains(std::string_view id) const { return find(id) != nullptr; }

 private:
  fs::path root_;
  std::vector<Entry> entries_;
};

struct SplitManifest {
  std::string name;
  std::vector<std::string> ids;
};

/// One id per line; blank lines ignored. Duplicates are rejected.
inline SplitManifest read_split(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "split manifest: " + path.string());
  SplitManifest split;
  split.name = path.stem().string();
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    const auto id = detail::trim(line);
    if (id.empty()) continue;
    if (!seen.insert(std::string(id)).second) {
      throw Error(ErrorCode::kConfigInvalid, "duplicate id '" + std::string(id) + "' in " + path.string());
    }
    split.ids.emplace_back(id);
  }
  return split;
}

inline void write_split(const fs::path& path, const SplitManifest& split) {
  std::string text;
  for (const auto& id : split.ids) text += id + "\n";
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// Throws MissingFile for the first split id absent from the index.
inline void validate_split(const DatasetIndex& index, const SplitManifest& split) {
  for (const auto& id : split.ids) {
    if (!index.contains(id)) throw Error(ErrorCode::kMissingFile, "split id not in dataset: " + id);
  }
}

/// Clips a box to [0,width] x [0,height].
inline Rect2D clip_box(const Rect2D& r, double width, double height) noexcept {
  return {std::clamp(r.left, 0.0, width), std::clamp(r.top, 0.0, height),
          std::clamp(r.right, 0.0, width), std::clamp(r.bottom, 0.0, height)};
}

struct LoadStats {
  std::size_t dropped_labels = 0;
};

/// Decodes the image and parses labels; boxes are clipped to the image and
/// labels left with zero area are dropped (counted in `stats`).
inline Sample load_sample(const DatasetIndex& index, std::string_view id, LoadStats* stats = nullptr) {
  const auto* entry = index.find(id);
  if (entry == nullptr) throw Error(ErrorCode::kMissingFile, "sample '" + std::string(id) + "' not in index");
  Sample s;
  s.id = entry->id;
  s.image = read_png(entry->image_path);
  if (!entry->label_path) return s;
  const double w = static_cast<double>(s.image.width());
  const double h = static_cast<double>(s.image.height());
  for (auto& label : read_label_file(*entry->label_path)) {
    label.box2d = clip_box(label.box2d, w, h);
    if (label.box2d.area() <= 0.0) {
      if (stats != nullptr) ++stats->dropped_labels;
      continue;
    }
    s.labels.push_back(std::move(label));
  }
  return s;
}

inline void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoFailure, "cannot create directory " + dir.string() +
                                           (ec ? ": " + ec.message() : std::string()));
  }
}

/// Writes image_2/<id>.png and label_2/<id>.txt under `out_root`.
inline void write_sample(const Sample& sample, const fs::path& out_root) {
  const fs::path image_dir = out_root / kImageDir;
  const fs::path label_dir = out_root / kLabelDir;
  ensure_directory(image_dir);
  ensure_directory(label_dir);
  write_png(image_dir / (sample.id + ".png"), sample.image);
  write_label_file(label_dir / (sample.id + ".txt"), sample.labels);
}

}  // namespace boxaug
