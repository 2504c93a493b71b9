#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace debris {

// The ten 10 m / 20 m MSI bands, in Sentinel-2 band-number order. The
// underlying value is also the band code of the raster file format.
enum class MsiBand : std::uint8_t {
  Blue,
  Green,
  Red,
  RedEdge1,
  RedEdge2,
  RedEdge3,
  NIR1,
  NIR2,
  SWIR1,
  SWIR2,
};

inline constexpr std::size_t kBandCount = 10;

struct BandInfo {
  MsiBand band;
  std::string_view name;
  std::string_view sentinel_code;
  double central_wavelength_nm;  // Sentinel-2A value
  int native_resolution_m;
};

inline constexpr std::array<BandInfo, kBandCount> kBands{{
    {MsiBand::Blue, "Blue", "B2", 496.6, 10},
    {MsiBand::Green, "Green", "B3", 560.0, 10},
    {MsiBand::Red, "Red", "B4", 664.5, 10},
    {MsiBand::RedEdge1, "RedEdge1", "B5", 703.9, 20},
    {MsiBand::RedEdge2, "RedEdge2", "B6", 740.2, 20},
    {MsiBand::RedEdge3, "RedEdge3", "B7", 782.5, 20},
    {MsiBand::NIR1, "NIR1", "B8", 835.1, 10},
    {MsiBand::NIR2, "NIR2", "B8A", 864.8, 20},
    {MsiBand::SWIR1, "SWIR1", "B11", 1613.7, 20},
    {MsiBand::SWIR2, "SWIR2", "B12", 2202.4, 20},
}};

inline constexpr std::array<MsiBand, kBandCount> kAllBands{
    MsiBand::Blue,     MsiBand::Green, MsiBand::Red,  MsiBand::RedEdge1,
    MsiBand::RedEdge2, MsiBand::RedEdge3, MsiBand::NIR1, MsiBand::NIR2,
    MsiBand::SWIR1,    MsiBand::SWIR2};

constexpr std::size_t index_of(MsiBand b) { return static_cast<std::size_t>(b); }
constexpr const BandInfo& info(MsiBand b) { return kBands[index_of(b)]; }

std::optional<MsiBand> band_from_name(std::string_view name);
std::optional<MsiBand> band_from_sentinel_code(std::string_view code);

// Radiometric indices, in pixel-table column order.
enum class IndexName : std::uint8_t {
  NDWI,
  WRI,
  NDVI,
  AWEI,
  MNDWI,
  SR,
  PI,
  RNDVI,
  FDI,
};

inline constexpr std::size_t kIndexCount = 9;
inline constexpr std::array<std::string_view, kIndexCount> kIndexNames{
    "NDWI", "WRI", "NDVI", "AWEI", "MNDWI", "SR", "PI", "RNDVI", "FDI"};

constexpr std::size_t index_of(IndexName i) { return static_cast<std::size_t>(i); }

// Closed namespace of the 19 features: the ten bands followed by the nine
// indices. Values 0-9 coincide with MsiBand.
enum class Feature : std::uint8_t {
  Blue, Green, Red, RedEdge1, RedEdge2, RedEdge3, NIR1, NIR2, SWIR1, SWIR2,
  NDWI, WRI, NDVI, AWEI, MNDWI, SR, PI, RNDVI, FDI,
};

inline constexpr std::size_t kFeatureCount = kBandCount + kIndexCount;

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f); }
constexpr bool is_band(Feature f) { return index_of(f) < kBandCount; }
constexpr Feature feature_of(MsiBand b) { return static_cast<Feature>(index_of(b)); }
constexpr Feature feature_of(IndexName i) {
  return static_cast<Feature>(kBandCount + index_of(i));
}
constexpr MsiBand band_of(Feature f) { return static_cast<MsiBand>(index_of(f)); }
constexpr IndexName index_name_of(Feature f) {
  return static_cast<IndexName>(index_of(f) - kBandCount);
}

std::string_view to_string(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);

std::span<const Feature> all_features();
std::span<const Feature> band_features();
std::span<const Feature> index_features();

}  // namespace debris
