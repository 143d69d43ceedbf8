// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

// Synthetic samples, datasets and filesystem helpers shared by the suites.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "boxaug/kitti_io.hpp"
#include "boxaug/types.hpp"

namespace boxaug::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "boxaug") {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline std::string frame_id(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06zu", i);
  return buf;
}

inline PixelImage random_image(std::mt19937_64& gen, std::size_t w, std::size_t h) {
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<std::uint8_t> data(w * h * 3);
  for (auto& v : data) v = static_cast<std::uint8_t>(px(gen));
  return PixelImage(w, h, std::move(data));
}

/// Smooth-ish image so that PNG compression has something to work with.
inline PixelImage gradient_image(std::size_t w, std::size_t h, int phase) {
  PixelImage img(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      img.at(x, y, 0) = static_cast<std::uint8_t>((x * 3 + static_cast<std::size_t>(phase) * 17) % 256);
      img.at(x, y, 1) = static_cast<std::uint8_t>((y * 5 + static_cast<std::size_t>(phase) * 31) % 256);
      img.at(x, y, 2) = static_cast<std::uint8_t>((x + y + static_cast<std::size_t>(phase) * 7) % 256);
    }
  }
  return img;
}

inline ObjectLabel make_label(std::string cls, Rect2D box) {
  ObjectLabel l;
  l.class_name = std::move(cls);
  l.box2d = box;
  l.dims3d = {1.5, 1.6, 3.9};
  l.location3d = {0.0, 1.7, 10.0};
  return l;
}

/// Random label with a box roughly inside a w x h frame (may stick out) and
/// random but valid 3D fields.
inline ObjectLabel random_label(std::mt19937_64& gen, double w, double h, bool allow_dont_care = true) {
  static const std::vector<std::string> classes = {"Car", "Pedestrian", "Cyclist", "Van", "DontCare"};
  std::uniform_int_distribution<std::size_t> cls(0, allow_dont_care ? classes.size() - 1 : classes.size() - 2);
  std::uniform_real_distribution<double> ux(-0.1 * w, 1.0 * w);
  std::uniform_real_distribution<double> uy(-0.1 * h, 1.0 * h);
  std::uniform_real_distribution<double> side(0.5, 0.6 * std::max(w, h));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> ang(-3.1, 3.1);
  ObjectLabel l;
  l.class_name = classes[cls(gen)];
  const double left = ux(gen);
  const double top = uy(gen);
  l.box2d = {left, top, left + side(gen), top + side(gen)};
  l.truncation = std::round(u01(gen) * 100.0) / 100.0;
  l.occlusion = static_cast<int>(std::uniform_int_distribution<int>(0, 3)(gen));
  l.alpha = ang(gen);
  l.dims3d = {0.5 + 2.0 * u01(gen), 0.5 + 2.0 * u01(gen), 0.5 + 4.0 * u01(gen)};
  l.location3d = {-10.0 + 20.0 * u01(gen), 1.0 + u01(gen), 5.0 + 40.0 * u01(gen)};
  l.rotation_y = ang(gen);
  return l;
}

/// Random sample of at most max_w x max_h with up to max_labels labels.
/// Boxes are clipped to the frame and zero-area ones dropped, as load_sample would.
inline Sample random_sample(std::mt19937_64& gen, std::size_t max_w, std::size_t max_h, std::size_t max_labels,
                            const std::string& id = "000000") {
  std::uniform_int_distribution<std::size_t> dw(1, max_w);
  std::uniform_int_distribution<std::size_t> dh(1, max_h);
  std::uniform_int_distribution<std::size_t> dn(0, max_labels);
  Sample s;
  s.id = id;
  const std::size_t w = dw(gen);
  const std::size_t h = dh(gen);
  s.image = random_image(gen, w, h);
  const std::size_t n = dn(gen);
  for (std::size_t i = 0; i < n; ++i) {
    auto l = random_label(gen, static_cast<double>(w), static_cast<double>(h));
    l.box2d = clip_box(l.box2d, static_cast<double>(w), static_cast<double>(h));
    if (l.box2d.area() > 0.0) s.labels.push_back(l);
  }
  return s;
}

/// Writes `count` samples (w x h, a few labels each, quantised to two
/// decimals) under root/image_2 and root/label_2 and returns their ids.
inline std::vector<std::string> write_dataset(const fs::path& root, std::size_t count, std::uint64_t seed,
                                              std::size_t w = 64, std::size_t h = 48) {
  std::mt19937_64 gen(seed);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < count; ++i) {
    Sample s;
    s.id = frame_id(i);
    s.image = random_image(gen, w, h);
    const std::size_t n = 1 + i % 4;
    for (std::size_t k = 0; k < n; ++k) {
      auto l = random_label(gen, static_cast<double>(w), static_cast<double>(h), false);
      l.box2d = clip_box(l.box2d, static_cast<double>(w), static_cast<double>(h));
      if (l.box2d.width() < 2.0 || l.box2d.height() < 2.0) continue;
      s.labels.push_back(parse_label_line(serialize_label(l)));
    }
    write_sample(s, root);
    ids.push_back(s.id);
  }
  return ids;
}

/// FNV-1a digest over every regular file under root: relative path, then bytes.
inline std::uint64_t tree_digest(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (de.is_regular_file()) files.push_back(fs::relative(de.path(), root));
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) { h = (h ^ c) * 0x100000001b3ULL; };
  for (const auto& rel : files) {
    for (const char c : rel.generic_string()) mix(static_cast<unsigned char>(c));
    mix(0);
    std::ifstream in(root / rel, std::ios::binary);
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) mix(static_cast<unsigned char>(*it));
    mix(0);
  }
  return h;
}

inline void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace boxaug::testing
