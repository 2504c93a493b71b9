#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "debris/error.hpp"
#include "debris/scene_sim.hpp"
#include "unit/helpers.hpp"

using namespace debris;

namespace {

std::map<ClassLabel, std::size_t> tally(const std::vector<ClassLabel>& labels) {
  std::map<ClassLabel, std::size_t> m;
  for (auto l : labels) ++m[l];
  return m;
}

SceneSpec one_scene(std::shared_ptr<const SignatureLibrary> lib, Polymer p, double f,
                    double noise = 0.0) {
  const Polymer ps[] = {p};
  const double fs[] = {f};
  return make_campaign(std::move(lib), ps, fs, noise, 0).front();
}

}  // namespace

TEST_CASE("default campaign specs") {
  auto lib = std::shared_ptr<const SignatureLibrary>(testutil::flat_library());
  auto specs = default_campaign(lib, 0);
  CHECK(specs.size() == 30);
  CHECK(std::count_if(specs.begin(), specs.end(), [](const SceneSpec& s) { return s.polymer == Polymer::PET; }) == 5);
  CHECK(specs.front().scene_id == "PA6_20");
  CHECK(specs.back().scene_id == "PP_100");
  auto again = default_campaign(lib, 0);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CHECK(specs[i].scene_id == again[i].scene_id);
    CHECK(specs[i].seed == again[i].seed);
  }
  CHECK(default_campaign(lib, 1).front().seed != specs.front().seed);

  auto partial = std::make_shared<SignatureLibrary>(*testutil::flat_library());
  SignatureLibrary no_pp;
  for (const auto& [name, sig] : partial->signatures()) {
    if (name != "PP") no_pp.add(sig);
  }
  try {
    default_campaign(std::make_shared<const SignatureLibrary>(no_pp), 0);
    FAIL("expected MissingMaterial");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingMaterial);
  }
}

TEST_CASE("spec validation") {
  auto lib = std::shared_ptr<const SignatureLibrary>(testutil::flat_library());
  auto s = one_scene(lib, Polymer::PET, 0.4);
  CHECK_NOTHROW(validate(s));
  s.coverage_fraction = 0.5;
  CHECK_THROWS_AS(validate(s), Error);
  s = one_scene(lib, Polymer::PET, 0.4);
  s.noise_sigma = -1.0;
  CHECK_THROWS_AS(validate(s), Error);
  s = one_scene(lib, Polymer::PET, 0.4);
  s.extent_m = 1000;
  CHECK_THROWS_AS(validate(s), Error);
}

TEST_CASE("object placements") {
  auto objs = object_placements(0.64);
  REQUIRE(objs.size() == 256);
  std::set<std::pair<std::uint32_t, std::uint32_t>> cells10, cells20;
  for (const auto& o : objs) {
    CHECK(o.side_m == doctest::Approx(8.0));
    cells10.insert({o.row, o.col});
    cells20.insert({o.row / 2, o.col / 2});
    CHECK(o.row != 59);
    CHECK(o.row != 60);
  }
  CHECK(cells10.size() == 256);
  CHECK(cells20.size() == 256);
}

TEST_CASE("linear mixing and label counts") {
  auto lib = std::shared_ptr<const SignatureLibrary>(testutil::flat_library(0.5, 0.05, 0.3));
  auto st = build_scene(one_scene(lib, Polymer::PVC, 0.6));

  auto c10 = tally(st.labels_10m);
  CHECK(c10[ClassLabel::Plastic] == 256);
  CHECK(c10[ClassLabel::Water] == 7072);
  CHECK(c10[ClassLabel::Sand] == 7072);
  auto c20 = tally(st.labels_20m);
  CHECK(c20[ClassLabel::Plastic] == 256);
  CHECK(c20[ClassLabel::Water] == 1672);
  CHECK(c20[ClassLabel::Sand] == 1672);

  const auto& blue = st.raster(MsiBand::Blue);
  CHECK(blue.width == 120);
  CHECK(blue.at(3, 3) == 0.32f);            // 0.6 * 0.5 + 0.4 * 0.05
  CHECK(blue.at(63, 3) == 0.42f);           // 0.6 * 0.5 + 0.4 * 0.3
  CHECK(blue.at(0, 0) == 0.05f);
  const auto& swir = st.raster(MsiBand::SWIR1);
  CHECK(swir.width == 60);
  CHECK(swir.at(1, 1) == 0.1175f);          // 0.15 * 0.5 + 0.85 * 0.05

  const double mass = std::accumulate(st.coverage_10m.begin(), st.coverage_10m.end(), 0.0);
  CHECK(mass == doctest::Approx(256 * 0.6));
  for (std::uint32_t r = 0; r < 120; ++r) {
    for (std::uint32_t c = 0; c < 120; ++c) {
      const double f10 = st.coverage_10m[r * 120 + c];
      if (f10 > 0) CHECK(st.coverage_20m[(r / 2) * 60 + c / 2] == doctest::Approx(f10 / 4));
    }
  }
}

TEST_CASE("full coverage reproduces the polymer exactly") {
  auto lib = std::shared_ptr<const SignatureLibrary>(testutil::flat_library(0.4321, 0.05, 0.3));
  auto st = build_scene(one_scene(lib, Polymer::LDPE, 1.0));
  for (auto b : {MsiBand::Blue, MsiBand::Green, MsiBand::Red, MsiBand::NIR1}) {
    const auto& r = st.raster(b);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      if (st.labels_10m[i] == ClassLabel::Plastic) CHECK(r.values[i] == 0.4321f);
    }
  }
}

TEST_CASE("scene determinism and noise") {
  auto lib = std::shared_ptr<const SignatureLibrary>(testutil::flat_library());
  auto spec = one_scene(lib, Polymer::PET, 0.2, 0.01);
  auto a = build_scene(spec);
  auto b = build_scene(spec);
  auto clean = build_scene(one_scene(lib, Polymer::PET, 0.2));
  bool differs = false;
  for (std::size_t k = 0; k < kBandCount; ++k) {
    CHECK(a.rasters[k].values == b.rasters[k].values);
    differs = differs || a.rasters[k].values != clean.rasters[k].values;
    for (float v : a.rasters[k].values) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
  CHECK(differs);
}

TEST_CASE("campaign dataset assembly") {
  auto lib = std::shared_ptr<const SignatureLibrary>(testutil::flat_library());
  std::vector<LabeledRasterStack> stacks{build_scene(one_scene(lib, Polymer::PA6, 0.8))};
  auto d = campaign_dataset(stacks, Resampler::Bilinear);
  REQUIRE(d.size() == 14400);
  CHECK(d.records[0].pixel_id == 0);
  CHECK(d.records[14399].pixel_id == 14399);
  std::size_t plastic = 0;
  for (const auto& r : d.records) {
    if (r.label != ClassLabel::Plastic) continue;
    ++plastic;
    CHECK(r.polymer == Polymer::PA6);
    CHECK(r.coverage_pct == doctest::Approx(80.0));
    CHECK(r.scene_or_date == "PA6_80");
  }
  CHECK(plastic == 256);
  CHECK_THROWS_AS(campaign_dataset(std::span<const LabeledRasterStack>{}, Resampler::Bilinear), Error);

  stacks[0].rasters[0].values.pop_back();
  stacks[0].rasters[0].height = 119;
  CHECK_THROWS_AS(campaign_dataset(stacks, Resampler::Bilinear), Error);
}

TEST_CASE("labels csv") {
  auto lib = std::shared_ptr<const SignatureLibrary>(testutil::flat_library());
  auto st = build_scene(one_scene(lib, Polymer::PET, 0.2));
  auto csv = labels_csv(st);
  CHECK(csv.rfind("row,col,label,polymer,coverage_pct\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 14401);
  CHECK(csv.find("3,3,Plastic,PET,20\n") != std::string::npos);
}
