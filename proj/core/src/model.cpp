#include "debris/model.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "debris/error.hpp"

namespace debris {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::OutOfSpan: return "OutOfSpan";
    case ErrorKind::MissingFeature: return "MissingFeature";
    case ErrorKind::MissingMaterial: return "MissingMaterial";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::Resolution: return "ResolutionError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::NotIndexed: return "NotIndexed";
    case ErrorKind::IdCollision: return "IdCollision";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::NoEligibleCandidate: return "NoEligibleCandidate";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::FeatureSetMismatch: return "FeatureSetMismatch";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Error";
}

std::string_view to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::Water: return "Water";
    case ClassLabel::Sand: return "Sand";
    case ClassLabel::Coast: return "Coast";
    case ClassLabel::Plastic: return "Plastic";
    case ClassLabel::Wood: return "Wood";
  }
  return "?";
}

std::optional<ClassLabel> class_from_name(std::string_view name) {
  for (ClassLabel c : kAllClasses) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Source source) {
  return source == Source::Simulated ? "simulated" : "observed";
}

std::optional<Source> source_from_name(std::string_view name) {
  if (name == "simulated") return Source::Simulated;
  if (name == "observed") return Source::Observed;
  return std::nullopt;
}

std::string_view to_string(Polymer polymer) {
  switch (polymer) {
    case Polymer::PA6: return "PA6";
    case Polymer::PA66: return "PA66";
    case Polymer::PVC: return "PVC";
    case Polymer::LDPE: return "LDPE";
    case Polymer::PET: return "PET";
    case Polymer::PP: return "PP";
    case Polymer::uNAPO: return "uNAPO";
    case Polymer::HDPE: return "HDPE";
    case Polymer::None: return "none";
  }
  return "?";
}

std::optional<Polymer> polymer_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPolymerCount; ++i) {
    auto p = static_cast<Polymer>(i);
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

bool PixelRecord::all_indices_defined() const {
  if (!indices) return false;
  for (const auto& v : *indices) {
    if (!v) return false;
  }
  return true;
}

void validate(const PixelRecord& r) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::Schema, "pixel " + std::to_string(r.pixel_id) + ": " + what);
  };
  for (double v : r.bands) {
    if (!std::isfinite(v)) fail("non-finite band reflectance");
  }
  if (is_target(r.label)) {
    if (!r.polymer) fail("Plastic/Wood record without polymer");
    if (r.label == ClassLabel::Wood && *r.polymer != Polymer::None) {
      fail("Wood record must have polymer none");
    }
    if (r.label == ClassLabel::Plastic && *r.polymer == Polymer::None) {
      fail("Plastic record with polymer none");
    }
    if (r.coverage_pct && r.coverage_partial) fail("coverage both numeric and partial");
    if (!r.coverage_pct && !r.coverage_partial) fail("Plastic/Wood record without coverage");
    if (r.coverage_pct && !(*r.coverage_pct > 0.0 && *r.coverage_pct <= 100.0)) {
      fail("coverage_pct outside (0, 100]");
    }
  } else {
    if (r.polymer) fail(std::string(to_string(r.label)) + " record with polymer");
    if (r.coverage_pct || r.coverage_partial) {
      fail(std::string(to_string(r.label)) + " record with coverage");
    }
  }
  if (r.source == Source::Simulated &&
      (r.label == ClassLabel::Coast || r.label == ClassLabel::Wood)) {
    fail("simulated records use only Water, Sand and Plastic");
  }
  if (r.source == Source::Observed && r.label == ClassLabel::Sand) {
    fail("observed records use Coast, not Sand");
  }
}

void check_unique_ids(const Dataset& dataset) {
  std::unordered_set<std::int64_t> seen;
  seen.reserve(dataset.size());
  for (const auto& r : dataset.records) {
    if (!seen.insert(r.pixel_id).second) {
      throw Error(ErrorKind::IdCollision, "duplicate pixel_id " + std::to_string(r.pixel_id));
    }
  }
}

std::vector<double> feature_vector(const PixelRecord& record, std::span<const Feature> features) {
  std::vector<double> out;
  out.reserve(features.size());
  for (Feature f : features) {
    if (is_band(f)) {
      out.push_back(record.band(band_of(f)));
      continue;
    }
    if (!record.indices) {
      throw Error(ErrorKind::MissingFeature, std::string(to_string(f)) + " not computed");
    }
    const auto& v = (*record.indices)[index_of(index_name_of(f))];
    if (!v) {
      throw Error(ErrorKind::MissingFeature,
                  std::string(to_string(f)) + " undefined on pixel " +
                      std::to_string(record.pixel_id));
    }
    out.push_back(*v);
  }
  return out;
}

std::vector<double> feature_matrix(const Dataset& dataset, std::span<const Feature> features) {
  std::vector<double> out;
  out.reserve(dataset.size() * features.size());
  for (const auto& r : dataset.records) {
    auto row = feature_vector(r, features);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace debris
