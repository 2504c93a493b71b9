#include "debris/bands.hpp"

#include <algorithm>

namespace debris {
namespace {

constexpr std::array<Feature, kFeatureCount> kFeatures{
    Feature::Blue,  Feature::Green, Feature::Red,   Feature::RedEdge1, Feature::RedEdge2,
    Feature::RedEdge3, Feature::NIR1, Feature::NIR2, Feature::SWIR1,   Feature::SWIR2,
    Feature::NDWI,  Feature::WRI,   Feature::NDVI,  Feature::AWEI,     Feature::MNDWI,
    Feature::SR,    Feature::PI,    Feature::RNDVI, Feature::FDI};

}  // namespace

std::optional<MsiBand> band_from_name(std::string_view name) {
  for (const auto& b : kBands) {
    if (b.name == name) return b.band;
  }
  return std::nullopt;
}

std::optional<MsiBand> band_from_sentinel_code(std::string_view code) {
  for (const auto& b : kBands) {
    if (b.sentinel_code == code) return b.band;
  }
  return std::nullopt;
}

std::string_view to_string(Feature f) {
  if (is_band(f)) return info(band_of(f)).name;
  return kIndexNames[index_of(index_name_of(f))];
}

std::optional<Feature> feature_from_name(std::string_view name) {
  auto it = std::find_if(kFeatures.begin(), kFeatures.end(),
                         [&](Feature f) { return to_string(f) == name; });
  if (it == kFeatures.end()) return std::nullopt;
  return *it;
}

std::span<const Feature> all_features() { return kFeatures; }
std::span<const Feature> band_features() { return std::span(kFeatures).first(kBandCount); }
std::span<const Feature> index_features() { return std::span(kFeatures).subspan(kBandCount); }

}  // namespace debris
