#include "debris/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "debris/error.hpp"
#include "debris/numeric.hpp"
#include "debris/parallel.hpp"
#include "debris/rng.hpp"

namespace debris {
namespace {

constexpr std::uint32_t kObjectsPerAxisRow = 8;
constexpr std::uint32_t kObjectsPerAxisCol = 16;
constexpr std::uint32_t kObjectStride = 7;
constexpr std::uint32_t kWaterRows10 = kGrid10 / 2;

bool is_campaign_coverage(double f) {
  return std::find(kCampaignCoverages.begin(), kCampaignCoverages.end(), f) !=
         kCampaignCoverages.end();
}

}  // namespace

void validate(const SceneSpec& spec) {
  if (!is_campaign_coverage(spec.coverage_fraction)) {
    throw Error(ErrorKind::Config, "coverage fraction must be one of 0.2, 0.4, 0.6, 0.8, 1.0");
  }
  if (spec.extent_m != kSceneExtentM) throw Error(ErrorKind::Config, "scene extent must be 1200 m");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw Error(ErrorKind::Config, "noise_sigma must be a finite value >= 0");
  }
  if (!spec.library) throw Error(ErrorKind::Config, "scene without a signature library");
  if (spec.polymer == Polymer::None) throw Error(ErrorKind::Config, "scene polymer cannot be none");
  for (std::string_view m : {to_string(spec.polymer), std::string_view("water"), std::string_view("sand")}) {
    if (!spec.library->contains(m)) {
      throw Error(ErrorKind::MissingMaterial, "library has no material '" + std::string(m) + "'");
    }
  }
}

std::vector<ObjectPlacement> object_placements(double coverage_fraction) {
  std::vector<ObjectPlacement> out;
  out.reserve(2 * kObjectsPerAxisRow * kObjectsPerAxisCol);
  const double side = 10.0 * std::sqrt(coverage_fraction);
  for (std::uint32_t half : {0u, kWaterRows10}) {
    for (std::uint32_t i = 0; i < kObjectsPerAxisRow; ++i) {
      for (std::uint32_t j = 0; j < kObjectsPerAxisCol; ++j) {
        out.push_back({half + 3 + kObjectStride * i, 3 + kObjectStride * j, side});
      }
    }
  }
  return out;
}

std::string scene_id_for(Polymer polymer, double coverage_fraction) {
  return std::string(to_string(polymer)) + "_" + format_double(round_to_4dp(100.0 * coverage_fraction));
}

std::vector<SceneSpec> make_campaign(std::shared_ptr<const SignatureLibrary> library,
                                     std::span<const Polymer> polymers,
                                     std::span<const double> coverages, double noise_sigma,
                                     std::uint64_t seed) {
  std::vector<SceneSpec> specs;
  std::uint64_t stream = 0;
  for (auto p : polymers) {
    for (double f : coverages) {
      SceneSpec s;
      s.scene_id = scene_id_for(p, f);
      s.polymer = p;
      s.coverage_fraction = f;
      s.library = library;
      s.noise_sigma = noise_sigma;
      s.seed = derive_seed(seed, stream++);
      validate(s);
      specs.push_back(std::move(s));
    }
  }
  return specs;
}

std::vector<SceneSpec> default_campaign(std::shared_ptr<const SignatureLibrary> library,
                                        std::uint64_t seed) {
  return make_campaign(std::move(library), kCampaignPolymers, kCampaignCoverages, 0.0, seed);
}

LabeledRasterStack build_scene(const SceneSpec& spec) {
  validate(spec);
  const auto& lib = *spec.library;
  const BandVector plastic = band_reflectances(lib.at(to_string(spec.polymer)));
  const BandVector water = band_reflectances(lib.at("water"));
  const BandVector sand = band_reflectances(lib.at("sand"));

  LabeledRasterStack st;
  st.scene_id = spec.scene_id;
  st.polymer = spec.polymer;
  st.coverage_fraction = spec.coverage_fraction;

  const std::size_t n10 = std::size_t{kGrid10} * kGrid10;
  const std::size_t n20 = std::size_t{kGrid20} * kGrid20;
  st.coverage_10m.assign(n10, 0.0);
  st.coverage_20m.assign(n20, 0.0);
  st.labels_10m.resize(n10);
  st.labels_20m.resize(n20);

  // Objects sit inside one 10 m cell, so a 20 m cell holds a quarter of it.
  for (const auto& o : object_placements(spec.coverage_fraction)) {
    st.coverage_10m[std::size_t{o.row} * kGrid10 + o.col] = spec.coverage_fraction;
    st.coverage_20m[std::size_t{o.row / 2} * kGrid20 + o.col / 2] += spec.coverage_fraction / 4.0;
  }
  for (std::uint32_t r = 0; r < kGrid10; ++r) {
    for (std::uint32_t c = 0; c < kGrid10; ++c) {
      const std::size_t i = std::size_t{r} * kGrid10 + c;
      st.labels_10m[i] = st.coverage_10m[i] > 0.0 ? ClassLabel::Plastic
                         : r < kWaterRows10      ? ClassLabel::Water
                                                 : ClassLabel::Sand;
    }
  }
  for (std::uint32_t r = 0; r < kGrid20; ++r) {
    for (std::uint32_t c = 0; c < kGrid20; ++c) {
      const std::size_t i = std::size_t{r} * kGrid20 + c;
      st.labels_20m[i] = st.coverage_20m[i] > 0.0 ? ClassLabel::Plastic
                         : r < kGrid20 / 2       ? ClassLabel::Water
                                                 : ClassLabel::Sand;
    }
  }

  Rng rng(spec.seed);
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const auto band = kAllBands[b];
    const bool fine = kBands[b].native_resolution_m == 10;
    const std::uint32_t n = fine ? kGrid10 : kGrid20;
    const auto& cover = fine ? st.coverage_10m : st.coverage_20m;
    Raster ras = make_raster(band, n, n, static_cast<std::uint16_t>(kBands[b].native_resolution_m));
    for (std::uint32_t r = 0; r < n; ++r) {
      const double substrate = r < n / 2 ? water[b] : sand[b];
      for (std::uint32_t c = 0; c < n; ++c) {
        const double f = cover[std::size_t{r} * n + c];
        double v = f * plastic[b] + (1.0 - f) * substrate;
        if (spec.noise_sigma > 0.0) v += spec.noise_sigma * rng.normal();
        ras.at(r, c) = static_cast<float>(round_to_4dp(std::clamp(v, 0.0, 1.0)));
      }
    }
    st.rasters[b] = std::move(ras);
  }
  return st;
}

std::vector<LabeledRasterStack> build_campaign(std::span<const SceneSpec> specs) {
  std::vector<LabeledRasterStack> out(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) { out[i] = build_scene(specs[i]); });
  return out;
}

Dataset campaign_dataset(std::span<const LabeledRasterStack> stacks, Resampler resampler) {
  if (stacks.empty()) throw Error(ErrorKind::ShapeMismatch, "campaign_dataset needs at least one scene");
  const std::size_t n10 = std::size_t{kGrid10} * kGrid10;
  std::vector<std::vector<PixelRecord>> per_scene(stacks.size());

  parallel_for(stacks.size(), [&](std::size_t s) {
    const auto& st = stacks[s];
    if (st.labels_10m.size() != n10 || st.coverage_10m.size() != n10) {
      throw Error(ErrorKind::ShapeMismatch, st.scene_id + ": label grid is not 120x120");
    }
    std::array<Raster, kBandCount> fine;
    for (std::size_t b = 0; b < kBandCount; ++b) {
      const auto& r = st.rasters[b];
      if (r.resolution_m == 20) {
        if (r.width != kGrid20 || r.height != kGrid20) {
          throw Error(ErrorKind::ShapeMismatch, st.scene_id + ": 20 m raster is not 60x60");
        }
        fine[b] = upsample_2x(r, resampler);
      } else {
        fine[b] = r;
      }
      if (fine[b].width != kGrid10 || fine[b].height != kGrid10) {
        throw Error(ErrorKind::ShapeMismatch, st.scene_id + ": 10 m raster is not 120x120");
      }
    }
    auto& recs = per_scene[s];
    recs.resize(n10);
    for (std::size_t i = 0; i < n10; ++i) {
      auto& rec = recs[i];
      rec.pixel_id = static_cast<std::int64_t>(s * n10 + i);
      rec.source = Source::Simulated;
      rec.scene_or_date = st.scene_id;
      rec.label = st.labels_10m[i];
      if (rec.label == ClassLabel::Plastic) {
        rec.polymer = st.polymer;
        rec.coverage_pct = round_to_4dp(100.0 * st.coverage_10m[i]);
      }
      for (std::size_t b = 0; b < kBandCount; ++b) {
        rec.bands[b] = round_to_4dp(static_cast<double>(fine[b].values[i]));
      }
    }
  });

  Dataset d;
  d.provenance = "simulated campaign (" + std::string(to_string(resampler)) + ")";
  d.records.reserve(stacks.size() * n10);
  for (auto& v : per_scene) {
    std::move(v.begin(), v.end(), std::back_inserter(d.records));
  }
  return d;
}

std::string labels_csv(const LabeledRasterStack& st) {
  std::string out = "row,col,label,polymer,coverage_pct\n";
  for (std::uint32_t r = 0; r < kGrid10; ++r) {
    for (std::uint32_t c = 0; c < kGrid10; ++c) {
      const std::size_t i = std::size_t{r} * kGrid10 + c;
      out += std::to_string(r);
      out += ',';
      out += std::to_string(c);
      out += ',';
      out += to_string(st.labels_10m[i]);
      out += ',';
      if (st.labels_10m[i] == ClassLabel::Plastic) {
        out += to_string(st.polymer);
        out += ',';
        out += format_double(round_to_4dp(100.0 * st.coverage_10m[i]));
      } else {
        out += ',';
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace debris
