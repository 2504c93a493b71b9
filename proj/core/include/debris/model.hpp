#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "debris/bands.hpp"

namespace debris {

enum class ClassLabel : std::uint8_t { Water, Sand, Coast, Plastic, Wood };
inline constexpr std::size_t kClassCount = 5;
inline constexpr std::array<ClassLabel, kClassCount> kAllClasses{
    ClassLabel::Water, ClassLabel::Sand, ClassLabel::Coast, ClassLabel::Plastic,
    ClassLabel::Wood};

std::string_view to_string(ClassLabel label);
std::optional<ClassLabel> class_from_name(std::string_view name);

// Plastic and Wood records carry polymer/coverage metadata.
constexpr bool is_target(ClassLabel label) {
  return label == ClassLabel::Plastic || label == ClassLabel::Wood;
}

enum class Source : std::uint8_t { Simulated, Observed };

std::string_view to_string(Source source);
std::optional<Source> source_from_name(std::string_view name);

enum class Polymer : std::uint8_t { PA6, PA66, PVC, LDPE, PET, PP, uNAPO, HDPE, None };
inline constexpr std::size_t kPolymerCount = 9;

std::string_view to_string(Polymer polymer);
std::optional<Polymer> polymer_from_name(std::string_view name);

// The six virgin polymers of the simulated campaign, in scene order.
inline constexpr std::array<Polymer, 6> kCampaignPolymers{
    Polymer::PA6, Polymer::PA66, Polymer::PVC,
    Polymer::LDPE, Polymer::PET, Polymer::PP};

using BandVector = std::array<double, kBandCount>;
// nullopt marks an index whose defining denominator was exactly zero.
using IndexVector = std::array<std::optional<double>, kIndexCount>;

struct PixelRecord {
  std::int64_t pixel_id = 0;
  Source source = Source::Simulated;
  std::string scene_or_date;
  ClassLabel label = ClassLabel::Water;
  std::optional<Polymer> polymer;
  // Plastic coverage in percent, (0, 100]. Observed targets of unknown
  // partial coverage have no value and coverage_partial set.
  std::optional<double> coverage_pct;
  bool coverage_partial = false;
  BandVector bands{};
  std::optional<IndexVector> indices;

  double band(MsiBand b) const { return bands[index_of(b)]; }
  bool has_indices() const { return indices.has_value(); }
  bool all_indices_defined() const;
};

// Throws Error(Schema) when the label/polymer/coverage combination or the band
// values violate the record invariants.
void validate(const PixelRecord& record);

struct Dataset {
  std::vector<PixelRecord> records;
  std::string provenance;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Throws Error(IdCollision) on duplicate pixel ids.
void check_unique_ids(const Dataset& dataset);

// Projects a record onto the requested features, in request order.
std::vector<double> feature_vector(const PixelRecord& record,
                                   std::span<const Feature> features);

// Row-major n x features.size() matrix over every record.
std::vector<double> feature_matrix(const Dataset& dataset,
                                   std::span<const Feature> features);

}  // namespace debris
