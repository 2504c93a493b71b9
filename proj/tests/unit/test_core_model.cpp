#include <algorithm>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "debris/error.hpp"
#include "debris/indices.hpp"
#include "debris/pixel_table.hpp"
#include "unit/helpers.hpp"

using namespace debris;
using testutil::record;

TEST_CASE("band table") {
  CHECK(kBands.size() == 10);
  int ten = 0;
  for (const auto& b : kBands) {
    CHECK(band_from_sentinel_code(b.sentinel_code) == b.band);
    CHECK(band_from_name(b.name) == b.band);
    if (b.native_resolution_m == 10) ++ten;
  }
  CHECK(ten == 4);
  CHECK(info(MsiBand::NIR1).central_wavelength_nm == 835.1);
  CHECK(info(MsiBand::SWIR2).central_wavelength_nm == 2202.4);
  CHECK(info(MsiBand::Red).native_resolution_m == 10);
  CHECK(info(MsiBand::NIR2).native_resolution_m == 20);
  CHECK(all_features().size() == 19);
  CHECK(feature_from_name("FDI") == Feature::FDI);
  CHECK_FALSE(feature_from_name("B13").has_value());
}

TEST_CASE("feature_vector projects in request order") {
  auto r = record(1, ClassLabel::Water, 0.2);
  r.bands[index_of(MsiBand::Blue)] = 0.1;
  const Feature one[] = {Feature::Blue};
  CHECK(feature_vector(r, one) == std::vector<double>{0.1});

  auto flat = record(2, ClassLabel::Water, 0.2);
  auto v = feature_vector(flat, band_features());
  CHECK(v == std::vector<double>(10, 0.2));

  r = compute_all(r);
  const Feature fwd[] = {Feature::NDWI, Feature::Blue, Feature::SR};
  const Feature rev[] = {Feature::SR, Feature::Blue, Feature::NDWI};
  auto a = feature_vector(r, fwd);
  auto b = feature_vector(r, rev);
  std::reverse(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("feature_vector rejects missing or undefined indices") {
  auto r = record(1, ClassLabel::Water);
  const Feature ndwi[] = {Feature::NDWI};
  CHECK_THROWS_AS(feature_vector(r, ndwi), Error);
  r.bands[index_of(MsiBand::Green)] = 0.0;
  r.bands[index_of(MsiBand::NIR1)] = 0.0;
  r = compute_all(r);
  REQUIRE_FALSE(r.indices->at(index_of(IndexName::NDWI)).has_value());
  try {
    feature_vector(r, ndwi);
    FAIL("expected MissingFeature");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingFeature);
  }
}

TEST_CASE("record invariants") {
  auto kind_of = [](const PixelRecord& r) {
    try {
      validate(r);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Config;  // sentinel for "accepted"
  };
  auto w = record(1, ClassLabel::Water);
  CHECK(kind_of(w) == ErrorKind::Config);
  w.polymer = Polymer::PET;
  CHECK(kind_of(w) == ErrorKind::Schema);

  auto p = record(2, ClassLabel::Plastic);
  CHECK(kind_of(p) == ErrorKind::Config);
  p.coverage_pct = 0.0;
  CHECK(kind_of(p) == ErrorKind::Schema);
  p.coverage_pct = 100.5;
  CHECK(kind_of(p) == ErrorKind::Schema);
  p.coverage_pct.reset();
  CHECK(kind_of(p) == ErrorKind::Schema);
  p.coverage_partial = true;
  CHECK(kind_of(p) == ErrorKind::Config);

  auto n = record(3, ClassLabel::Sand);
  n.bands[0] = std::numeric_limits<double>::infinity();
  CHECK(kind_of(n) == ErrorKind::Schema);

  auto coast = record(4, ClassLabel::Coast);
  CHECK(kind_of(coast) == ErrorKind::Schema);  // simulated records never use Coast
  coast.source = Source::Observed;
  CHECK(kind_of(coast) == ErrorKind::Config);

  Dataset d;
  d.records = {record(7, ClassLabel::Water), record(7, ClassLabel::Sand)};
  CHECK_THROWS_AS(check_unique_ids(d), Error);
}

TEST_CASE("pixel table round trip") {
  Dataset d;
  auto a = record(10, ClassLabel::Water, 0.0123);
  a.bands[3] = 0.1 + 0.2;  // not exactly representable as a short decimal
  auto b = record(11, ClassLabel::Plastic, 0.31);
  b.polymer = Polymer::PVC;
  b.coverage_pct = 60.0;
  auto c = record(12, ClassLabel::Sand, 1.0 / 3.0);
  d.records = {a, b, c};

  const std::string text = to_pixel_table(d);
  CHECK(text.rfind("pixel_id,source,scene_or_date,label,polymer,coverage_pct,B2,B3,B4,B5,B6,B7,B8,B8A,B11,B12\n", 0) == 0);
  Dataset back = parse_pixel_table(text);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.records[i].pixel_id == d.records[i].pixel_id);
    CHECK(back.records[i].label == d.records[i].label);
    CHECK(back.records[i].bands == d.records[i].bands);
  }
  CHECK(to_pixel_table(back) == text);

  Dataset indexed;
  for (const auto& r : d.records) indexed.records.push_back(compute_all(r));
  indexed.records[0].bands[index_of(MsiBand::Red)] = 0.0;  // SR undefined
  indexed.records[0] = compute_all(indexed.records[0]);
  const std::string t2 = to_pixel_table(indexed);
  CHECK(t2.find(",NDWI,WRI,NDVI,AWEI,MNDWI,SR,PI,RNDVI,FDI\n") != std::string::npos);
  Dataset back2 = parse_pixel_table(t2);
  CHECK_FALSE(back2.records[0].indices->at(index_of(IndexName::SR)).has_value());
  CHECK(back2.records[1].indices == indexed.records[1].indices);
  CHECK(to_pixel_table(back2) == t2);
}

TEST_CASE("pixel table partial coverage and errors") {
  auto p = record(1, ClassLabel::Plastic, 0.2);
  p.source = Source::Observed;
  p.scene_or_date = "2021-06-01";
  p.coverage_pct.reset();
  p.coverage_partial = true;
  Dataset d;
  d.records = {p};
  const std::string text = to_pixel_table(d);
  CHECK(text.find(",partial,") != std::string::npos);
  auto back = parse_pixel_table(text);
  CHECK(back.records[0].coverage_partial);
  CHECK_FALSE(back.records[0].coverage_pct.has_value());

  auto kind_of = [](const std::string& t) {
    try {
      parse_pixel_table(t);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Config;
  };
  const std::string header =
      "pixel_id,source,scene_or_date,label,polymer,coverage_pct,B2,B3,B4,B5,B6,B7,B8,B8A,B11,B12\n";
  const std::string bands = ",0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1\n";
  CHECK(kind_of(header + "1,simulated,s,Water,," + bands) == ErrorKind::Config);
  CHECK(kind_of(header + "1,simulated,s,Water,PET," + bands) == ErrorKind::Schema);
  CHECK(kind_of(header + "1,simulated,s,Plastic,PET,0" + bands) == ErrorKind::Schema);
  CHECK(kind_of(header + "1,simulated,s,Lake,," + bands) == ErrorKind::Schema);
  CHECK(kind_of(header + "x,simulated,s,Water,," + bands) == ErrorKind::Parse);
  CHECK(kind_of(header + "1,simulated,s,Water,,,0.1\n") == ErrorKind::Parse);
  CHECK(kind_of("pixel_id,source,scene_or_date,label,polymer,coverage_pct,B2,B3\n") ==
        ErrorKind::Schema);
  CHECK(kind_of(header + "1,simulated,s,Water,," + bands + "1,simulated,s,Sand,," + bands) ==
        ErrorKind::IdCollision);
}
