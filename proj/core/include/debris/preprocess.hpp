#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include "debris/model.hpp"

namespace debris {

struct CleanReport {
  std::size_t dropped_total = 0;
  std::array<std::size_t, kClassCount> dropped_by_class{};
  std::size_t retained = 0;
};

struct CleanResult {
  Dataset dataset;
  CleanReport report;
};

// Keeps records whose nine indices are all defined, in input order.
// Throws Error(NotIndexed) if any record lacks computed indices.
CleanResult clean(const Dataset& dataset);

// {"dropped_by_class": {...}, "dropped_total": n, "retained": m}
std::string to_json(const CleanReport& report);

// Reads an observed pixel table; every record is marked Source::Observed.
Dataset ingest_pixel_table(const std::filesystem::path& path);

// Concatenates datasets in order. With remap_ids the output ids are 0..n-1;
// otherwise colliding ids raise Error(IdCollision).
Dataset merge(std::span<const Dataset> datasets, bool remap_ids = true);

}  // namespace debris
