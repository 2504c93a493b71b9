#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "debris/bands.hpp"

namespace debris {

struct Raster {
  MsiBand band = MsiBand::Blue;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint16_t resolution_m = 10;
  std::vector<float> values;  // row-major

  float at(std::uint32_t row, std::uint32_t col) const { return values[row * width + col]; }
  float& at(std::uint32_t row, std::uint32_t col) { return values[row * width + col]; }
};

// Allocates a zero-filled raster after checking the dimensions.
Raster make_raster(MsiBand band, std::uint32_t width, std::uint32_t height,
                   std::uint16_t resolution_m);

enum class Resampler { Nearest, Bilinear, Cubic };

std::string_view to_string(Resampler method);
Resampler resampler_from_name(std::string_view name);  // throws Error(Config)

// 20 m -> 10 m upsampling. Output pixel i maps to source coordinate
// (i + 0.5) / 2 - 0.5; bilinear and cubic (Catmull-Rom) clamp at the edges.
Raster upsample_2x(const Raster& source, Resampler method);

Raster round_to_4dp(const Raster& raster);

// MDRS v1: magic, u16 version, u16 band code, u32 width, u32 height,
// u16 resolution_m, then width*height little-endian binary32 values.
void write_raster(const Raster& raster, const std::filesystem::path& path);
Raster read_raster(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_raster(const Raster& raster);
Raster decode_raster(const std::vector<std::uint8_t>& bytes);

}  // namespace debris
