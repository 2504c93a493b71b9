#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "debris/bands.hpp"
#include "debris/model.hpp"

namespace debris {

enum class MaterialKind { Polymer, Water, Sand, Wood };

std::string_view to_string(MaterialKind kind);

struct SpectralSample {
  double wavelength_nm;
  double reflectance;
};

struct SpectralSignature {
  std::string material_name;
  MaterialKind kind = MaterialKind::Polymer;
  std::vector<SpectralSample> samples;

  double min_wavelength() const { return samples.front().wavelength_nm; }
  double max_wavelength() const { return samples.back().wavelength_nm; }
};

// Throws Error(Domain) unless wavelengths strictly increase, there are at
// least two samples, reflectances lie in [0, 1] and the span covers every
// band centre (440-2250 nm).
void validate(const SpectralSignature& signature);

// Linear interpolation of the signature at the band's central wavelength.
// Throws Error(OutOfSpan) when the centre is outside the sampled range.
double band_reflectance(const SpectralSignature& signature, MsiBand band);
BandVector band_reflectances(const SpectralSignature& signature);

class SignatureLibrary {
 public:
  SignatureLibrary() = default;
  explicit SignatureLibrary(std::string provenance) : provenance_(std::move(provenance)) {}

  // Validates and inserts; replaces an existing material of the same name.
  void add(SpectralSignature signature);

  bool contains(std::string_view material) const;
  const SpectralSignature& at(std::string_view material) const;
  std::size_t size() const { return signatures_.size(); }
  const std::map<std::string, SpectralSignature, std::less<>>& signatures() const {
    return signatures_;
  }
  const std::string& provenance() const { return provenance_; }

 private:
  std::map<std::string, SpectralSignature, std::less<>> signatures_;
  std::string provenance_;
};

inline constexpr double kMinSpanNm = 440.0;
inline constexpr double kMaxSpanNm = 2250.0;

// Signature CSV: header material,kind,wavelength_nm,reflectance; rows of one
// material contiguous and wavelength-sorted.
SignatureLibrary load_library(const std::filesystem::path& path);
SignatureLibrary parse_library(std::string_view csv_text, std::string provenance = {});
void write_library(const SignatureLibrary& library, const std::filesystem::path& path);

// Deterministic synthetic library shipped with the artifact: the six campaign
// polymers plus uNAPO, HDPE, wood, water and sand sampled every 10 nm over
// 400-2500 nm. Generated by tools/gen_default_library.py.
const SignatureLibrary& builtin_default_library();

}  // namespace debris
