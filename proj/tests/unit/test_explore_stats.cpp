#include <cmath>
#include <random>

#include "doctest.h"
#include "debris/error.hpp"
#include "debris/explore_stats.hpp"
#include "debris/indices.hpp"
#include "ks_oracle.hpp"
#include "unit/helpers.hpp"

using namespace debris;

TEST_CASE("ks examples") {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  auto same = ks_two_sample(a, a);
  CHECK(same.d_statistic == 0.0);
  CHECK(same.p_value == 1.0);
  auto apart = ks_two_sample(a, b);
  CHECK(apart.d_statistic == 1.0);
  CHECK(apart.n == 3);
  CHECK(apart.p_value == doctest::Approx(2 * (std::exp(-3.0) - std::exp(-12.0) + std::exp(-27.0))).epsilon(1e-9));
  CHECK(apart.p_value == doctest::Approx(0.09957).epsilon(1e-4));
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, b), Error);
  CHECK(kolmogorov_q(0.0) == 1.0);
  CHECK(kolmogorov_q(10.0) == 0.0);
}

TEST_CASE("ks against the direct oracle") {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<int> size(1, 40), level(0, 12);
    std::vector<double> xs(size(gen)), ys(size(gen));
    for (double& x : xs) x = 0.25 * level(gen);
    for (double& y : ys) y = 0.25 * level(gen) + 0.5;
    auto r = ks_two_sample(xs, ys);
    CHECK(r.d_statistic == doctest::Approx(oracle::ks_d(xs, ys)).epsilon(1e-12));
    CHECK(std::abs(r.p_value - oracle::ks_p(xs, ys)) < 1e-6);
    auto s = ks_two_sample(ys, xs);
    CHECK(s.d_statistic == r.d_statistic);
    CHECK(s.p_value == r.p_value);
    std::vector<double> ex, ey;
    for (double x : xs) ex.push_back(std::exp(x));
    for (double y : ys) ey.push_back(std::exp(y));
    CHECK(ks_two_sample(ex, ey).d_statistic == r.d_statistic);
  }
}

TEST_CASE("ks p decreases in d") {
  double last = 1.1;
  for (double lambda = 0.05; lambda < 3.0; lambda += 0.05) {
    const double q = kolmogorov_q(lambda);
    CHECK(q <= last);
    last = q;
  }
}

namespace {

Dataset line_dataset(std::size_t n) {
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = testutil::record(static_cast<std::int64_t>(i), i % 2 ? ClassLabel::Water : ClassLabel::Sand);
    for (std::size_t b = 0; b < kBandCount; ++b) r.bands[b] = 0.05 + 0.01 * i + 0.002 * b * (i % 3);
    r.bands[index_of(MsiBand::Green)] = 0.9 - 0.01 * i;  // exact negation of Blue up to offset
    r.bands[index_of(MsiBand::Blue)] = 0.01 * i;
    d.records.push_back(compute_all(r));
  }
  return d;
}

}  // namespace

TEST_CASE("pearson matrix") {
  auto d = line_dataset(12);
  auto m = pearson_matrix(d, all_features());
  REQUIRE(m.dim() == 19);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    CHECK(m.at(i, i) == 1.0);
    for (std::size_t j = 0; j < m.dim(); ++j) {
      CHECK(m.at(i, j) == m.at(j, i));
      CHECK(std::abs(m.at(i, j)) <= 1.0);
    }
  }
  CHECK(m.between(Feature::Blue, Feature::Green) == doctest::Approx(-1.0));
  CHECK(m.between(Feature::NDVI, Feature::RNDVI) == doctest::Approx(-1.0));

  // positive affine transforms leave r unchanged, negative ones flip the sign
  auto t = d;
  for (auto& r : t.records) r.bands[index_of(MsiBand::Red)] = 3.0 * r.bands[index_of(MsiBand::Red)] + 1.0;
  auto mt = pearson_matrix(t, band_features());
  auto mb = pearson_matrix(d, band_features());
  CHECK(mt.between(Feature::Red, Feature::NIR1) == doctest::Approx(mb.between(Feature::Red, Feature::NIR1)));
  for (auto& r : t.records) r.bands[index_of(MsiBand::Red)] = -r.bands[index_of(MsiBand::Red)];
  CHECK(pearson_matrix(t, band_features()).between(Feature::Red, Feature::NIR1) ==
        doctest::Approx(-mb.between(Feature::Red, Feature::NIR1)));

  auto c = d;
  for (auto& r : c.records) r.bands[index_of(MsiBand::SWIR2)] = 0.4;
  auto mc = pearson_matrix(c, band_features());
  CHECK(mc.constant_features == std::vector<Feature>{Feature::SWIR2});
  CHECK(mc.between(Feature::SWIR2, Feature::Blue) == 0.0);
  CHECK(mc.between(Feature::SWIR2, Feature::SWIR2) == 1.0);

  auto per = pearson_matrix(d, band_features(), ClassLabel::Water);
  CHECK(per.dim() == 10);
  CHECK_THROWS_AS(pearson_matrix(d, band_features(), ClassLabel::Plastic), Error);
}

TEST_CASE("quantiles and summaries") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.25) == 1.75);
  CHECK(quantile_sorted(v, 0.5) == 2.5);
  CHECK(quantile_sorted(v, 0.75) == 3.25);
  auto s = summarize(std::vector<double>{5});
  CHECK(s.min == 5);
  CHECK(s.q1 == 5);
  CHECK(s.median == 5);
  CHECK(s.q3 == 5);
  CHECK(s.max == 5);
  CHECK(summarize(std::vector<double>{2, 2, 2}).std == 0.0);
  CHECK(summarize(std::vector<double>{1, 3}).std == 1.0);  // population

  auto d = line_dataset(9);
  auto cs = class_summary(d, all_features());
  CHECK(cs.per_class.size() == 2);
  CHECK(cs.empty_classes.size() == 3);
  for (const auto& [label, sums] : cs.per_class) {
    for (const auto& f : sums) {
      CHECK(f.min <= f.q1);
      CHECK(f.q1 <= f.median);
      CHECK(f.median <= f.q3);
      CHECK(f.q3 <= f.max);
    }
  }
}

TEST_CASE("mean signatures") {
  Dataset d;
  d.records = {testutil::record(1, ClassLabel::Sand, 0.2), testutil::record(2, ClassLabel::Sand, 0.4)};
  auto m = mean_signature(d, ClassLabel::Sand);
  for (double v : m) CHECK(v == doctest::Approx(0.3));
  CHECK(mean_signature(d, ClassLabel::Sand).size() == 10);
  try {
    mean_signature(d, ClassLabel::Water);
    FAIL("expected EmptySelection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptySelection);
  }
  auto p = testutil::record(3, ClassLabel::Plastic, 0.6);
  p.coverage_pct = 40.0;
  auto q = testutil::record(4, ClassLabel::Plastic, 0.8);
  q.coverage_pct = 60.0;
  d.records.push_back(p);
  d.records.push_back(q);
  CHECK(mean_signature(d, ClassLabel::Plastic, 50.0)[0] == doctest::Approx(0.8));
  CHECK(mean_signature(d, ClassLabel::Plastic)[0] == doctest::Approx(0.7));
  CHECK(mean_signature(d, ClassLabel::Sand, 50.0)[0] == doctest::Approx(0.3));
}

TEST_CASE("explore report") {
  auto d = line_dataset(10);
  auto other = line_dataset(8);
  auto json = explore_report_json(d, &other);
  for (auto key : {"\"class_summary\"", "\"correlation\"", "\"mean_signatures\"", "\"ks\"", "\"conventions\""}) {
    CHECK(json.find(key) != std::string::npos);
  }
  CHECK(explore_report_json(d) == explore_report_json(d));
}
