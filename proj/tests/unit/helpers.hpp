#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

#include "debris/model.hpp"
#include "debris/spectral_library.hpp"

namespace testutil {

inline debris::PixelRecord record(std::int64_t id, debris::ClassLabel label, double fill = 0.1) {
  debris::PixelRecord r;
  r.pixel_id = id;
  r.label = label;
  r.scene_or_date = "t";
  r.bands.fill(fill);
  if (label == debris::ClassLabel::Plastic) {
    r.polymer = debris::Polymer::PET;
    r.coverage_pct = 100.0;
  }
  return r;
}

inline debris::SpectralSignature flat(std::string name, debris::MaterialKind kind, double value) {
  debris::SpectralSignature s{std::move(name), kind, {}};
  for (double wl = 400.0; wl <= 2500.0; wl += 100.0) s.samples.push_back({wl, value});
  return s;
}

// Flat signatures for every campaign material; reflectances chosen so that no
// index denominator vanishes.
inline std::shared_ptr<debris::SignatureLibrary> flat_library(double plastic = 0.5,
                                                              double water = 0.05,
                                                              double sand = 0.3) {
  auto lib = std::make_shared<debris::SignatureLibrary>("flat test library");
  for (auto p : {"PA6", "PA66", "PVC", "LDPE", "PET", "PP", "uNAPO"}) {
    lib->add(flat(p, debris::MaterialKind::Polymer, plastic));
  }
  lib->add(flat("water", debris::MaterialKind::Water, water));
  lib->add(flat("sand", debris::MaterialKind::Sand, sand));
  return lib;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("debris_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
