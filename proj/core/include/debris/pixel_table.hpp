#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "debris/model.hpp"

namespace debris {

// Pixel-table CSV: pixel_id,source,scene_or_date,label,polymer,coverage_pct,
// B2..B12 and, when every record is indexed, NDWI..FDI. Empty cells mean
// absent or undefined; coverage_pct may read "partial".
void write_pixel_table(const Dataset& dataset, std::ostream& out);
void write_pixel_table(const Dataset& dataset, const std::filesystem::path& path);
std::string to_pixel_table(const Dataset& dataset);

// Parses and validates every row (Error Parse/Schema). Records keep the
// source column as written.
Dataset read_pixel_table(std::istream& in, std::string provenance = {});
Dataset read_pixel_table(const std::filesystem::path& path);
Dataset parse_pixel_table(std::string_view text);

}  // namespace debris
