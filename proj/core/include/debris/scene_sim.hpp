#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "debris/model.hpp"
#include "debris/raster.hpp"
#include "debris/spectral_library.hpp"

namespace debris {

inline constexpr std::array<double, 5> kCampaignCoverages{0.2, 0.4, 0.6, 0.8, 1.0};

inline constexpr std::uint32_t kSceneExtentM = 1200;
inline constexpr std::uint32_t kGrid10 = kSceneExtentM / 10;  // 120
inline constexpr std::uint32_t kGrid20 = kSceneExtentM / 20;  // 60

struct SceneSpec {
  std::string scene_id;
  Polymer polymer = Polymer::PET;
  double coverage_fraction = 1.0;
  std::uint32_t extent_m = kSceneExtentM;
  std::shared_ptr<const SignatureLibrary> library;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

// Throws Error(Config) for a coverage outside the campaign set, an extent
// other than 1200 m, a negative noise level or a missing library, and
// Error(MissingMaterial) when the polymer, water or sand is not in the library.
void validate(const SceneSpec& spec);

struct ObjectPlacement {
  std::uint32_t row = 0;  // anchor cell in the 10 m grid
  std::uint32_t col = 0;
  double side_m = 0.0;
};

// 256 anchors: rows 3+7i (water half) and 63+7i (sand half), cols 3+7j.
std::vector<ObjectPlacement> object_placements(double coverage_fraction);

struct LabeledRasterStack {
  std::string scene_id;
  Polymer polymer = Polymer::PET;
  double coverage_fraction = 1.0;
  // One raster per band at its native resolution (120x120 or 60x60).
  std::array<Raster, kBandCount> rasters;
  std::vector<ClassLabel> labels_10m;  // 120x120
  std::vector<ClassLabel> labels_20m;  // 60x60
  std::vector<double> coverage_10m;    // plastic area fraction per 10 m pixel
  std::vector<double> coverage_20m;

  const Raster& raster(MsiBand b) const { return rasters[index_of(b)]; }
};

std::vector<SceneSpec> default_campaign(std::shared_ptr<const SignatureLibrary> library,
                                        std::uint64_t seed);

// Filtered campaign: Cartesian product polymers x coverages in the given order.
std::vector<SceneSpec> make_campaign(std::shared_ptr<const SignatureLibrary> library,
                                     std::span<const Polymer> polymers,
                                     std::span<const double> coverages,
                                     double noise_sigma, std::uint64_t seed);

std::string scene_id_for(Polymer polymer, double coverage_fraction);

LabeledRasterStack build_scene(const SceneSpec& spec);

// Scenes are independent and built in parallel; output order follows specs.
std::vector<LabeledRasterStack> build_campaign(std::span<const SceneSpec> specs);

// Upsamples the 20 m bands and assembles one record per 10 m pixel, scene by
// scene in row-major order. Band values are rounded to four decimals.
Dataset campaign_dataset(std::span<const LabeledRasterStack> stacks, Resampler resampler);

// Per-scene label CSV: row,col,label,polymer,coverage_pct at 10 m.
std::string labels_csv(const LabeledRasterStack& stack);

}  // namespace debris
