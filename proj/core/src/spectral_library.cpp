#include "debris/spectral_library.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "debris/error.hpp"
#include "debris/numeric.hpp"

namespace debris {

std::string_view to_string(MaterialKind kind) {
  switch (kind) {
    case MaterialKind::Polymer: return "polymer";
    case MaterialKind::Water: return "water";
    case MaterialKind::Sand: return "sand";
    case MaterialKind::Wood: return "wood";
  }
  return "polymer";
}

namespace {

std::optional<MaterialKind> kind_from_name(std::string_view s) {
  for (auto k : {MaterialKind::Polymer, MaterialKind::Water, MaterialKind::Sand, MaterialKind::Wood}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

}  // namespace

void validate(const SpectralSignature& sig) {
  const auto& name = sig.material_name;
  if (name.empty()) throw Error(ErrorKind::Domain, "signature without a material name");
  if (sig.samples.size() < 2) throw Error(ErrorKind::Domain, name + ": fewer than two samples");
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    const auto& s = sig.samples[i];
    if (!std::isfinite(s.wavelength_nm) || !std::isfinite(s.reflectance)) {
      throw Error(ErrorKind::Domain, name + ": non-finite sample");
    }
    if (s.reflectance < 0.0 || s.reflectance > 1.0) {
      throw Error(ErrorKind::Domain, name + ": reflectance " + format_double(s.reflectance) +
                                         " outside [0, 1]");
    }
    if (i > 0 && !(s.wavelength_nm > sig.samples[i - 1].wavelength_nm)) {
      throw Error(ErrorKind::Domain, name + ": wavelengths not strictly increasing at " +
                                         format_double(s.wavelength_nm));
    }
  }
  if (sig.min_wavelength() > kMinSpanNm || sig.max_wavelength() < kMaxSpanNm) {
    throw Error(ErrorKind::Domain, name + ": samples do not span 440-2250 nm");
  }
}

double band_reflectance(const SpectralSignature& sig, MsiBand band) {
  const double x = info(band).central_wavelength_nm;
  const auto& s = sig.samples;
  if (s.empty() || x < s.front().wavelength_nm || x > s.back().wavelength_nm) {
    throw Error(ErrorKind::OutOfSpan, sig.material_name + ": " + std::string(info(band).name) +
                                          " centre outside sampled range");
  }
  auto hi = std::lower_bound(s.begin(), s.end(), x,
                             [](const SpectralSample& a, double w) { return a.wavelength_nm < w; });
  if (hi->wavelength_nm == x) return hi->reflectance;
  auto lo = hi - 1;
  const double t = (x - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
  return lo->reflectance + (hi->reflectance - lo->reflectance) * t;
}

BandVector band_reflectances(const SpectralSignature& sig) {
  BandVector out{};
  for (std::size_t b = 0; b < kBandCount; ++b) out[b] = band_reflectance(sig, kAllBands[b]);
  return out;
}

void SignatureLibrary::add(SpectralSignature signature) {
  validate(signature);
  auto key = signature.material_name;
  signatures_.insert_or_assign(std::move(key), std::move(signature));
}

bool SignatureLibrary::contains(std::string_view material) const {
  return signatures_.find(material) != signatures_.end();
}

const SpectralSignature& SignatureLibrary::at(std::string_view material) const {
  auto it = signatures_.find(material);
  if (it == signatures_.end()) {
    throw Error(ErrorKind::MissingMaterial, "library has no material '" + std::string(material) + "'");
  }
  return it->second;
}

SignatureLibrary parse_library(std::string_view text, std::string provenance) {
  SignatureLibrary lib(std::move(provenance));
  std::vector<SpectralSignature> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  std::map<std::string, bool, std::less<>> closed;

  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
      if (line != "material,kind,wavelength_nm,reflectance") {
        throw Error(ErrorKind::Parse, "signature CSV header must be material,kind,wavelength_nm,reflectance");
      }
      header_seen = true;
      continue;
    }
    std::string_view cells[4];
    std::size_t n = 0, start = 0;
    for (;;) {
      auto comma = line.find(',', start);
      if (n == 4) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": too many cells");
      cells[n++] = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != 4 || cells[0].empty()) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 4 cells");
    }
    auto kind = kind_from_name(cells[1]);
    if (!kind) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown kind");
    SpectralSample s{};
    if (!parse_double(cells[2], s.wavelength_nm) || !parse_double(cells[3], s.reflectance)) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad number");
    }
    if (pending.empty() || pending.back().material_name != cells[0]) {
      if (closed.contains(cells[0])) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": rows for '" +
                                          std::string(cells[0]) + "' are not contiguous");
      }
      closed.emplace(std::string(cells[0]), true);
      pending.push_back({std::string(cells[0]), *kind, {}});
    } else if (pending.back().kind != *kind) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": kind changes within material");
    }
    pending.back().samples.push_back(s);
  }
  if (!header_seen) throw Error(ErrorKind::Parse, "empty signature CSV");
  for (auto& sig : pending) lib.add(std::move(sig));
  return lib;
}

SignatureLibrary load_library(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_library(text, path.string());
}

void write_library(const SignatureLibrary& library, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "material,kind,wavelength_nm,reflectance\n";
  for (const auto& [name, sig] : library.signatures()) {
    for (const auto& s : sig.samples) {
      out << name << ',' << to_string(sig.kind) << ',' << format_double(s.wavelength_nm) << ','
          << format_double(s.reflectance) << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace debris
