#include "debris/explore_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>

#include "debris/error.hpp"
#include "json_util.hpp"

namespace debris {

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double sum = 0.0;
  if (lambda < 1.0) {
    // The alternating series cancels badly for small lambda; use the
    // equivalent Jacobi theta form of the CDF instead.
    const double pi = std::numbers::pi;
    for (long k = 1;; ++k) {
      const double j = static_cast<double>(2 * k - 1);
      const double term = std::exp(-j * j * pi * pi / (8.0 * lambda * lambda));
      sum += term;
      if (term < 1e-17) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  for (long k = 1;; ++k) {
    const double term = std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) * lambda * lambda);
    if (term < 1e-17) break;
    sum += (k % 2 == 1) ? term : -term;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw Error(ErrorKind::EmptySample, "KS test needs two nonempty samples");
  std::vector<double> a(xs.begin(), xs.end()), b(ys.begin(), ys.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult r;
  r.d_statistic = d;
  r.n = a.size();
  r.m = b.size();
  r.p_value = kolmogorov_q(d * std::sqrt(n * m / (n + m)));
  return r;
}

double CorrelationMatrix::between(Feature a, Feature b) const {
  auto ia = std::find(features.begin(), features.end(), a);
  auto ib = std::find(features.begin(), features.end(), b);
  if (ia == features.end() || ib == features.end()) {
    throw Error(ErrorKind::MissingFeature, "feature not in correlation matrix");
  }
  return at(static_cast<std::size_t>(ia - features.begin()), static_cast<std::size_t>(ib - features.begin()));
}

namespace {

bool defined_for(const PixelRecord& r, std::span<const Feature> features) {
  for (auto f : features) {
    if (is_band(f)) continue;
    if (!r.indices || !(*r.indices)[index_of(index_name_of(f))]) return false;
  }
  return true;
}

double value_of(const PixelRecord& r, Feature f) {
  if (is_band(f)) return r.bands[index_of(band_of(f))];
  return *(*r.indices)[index_of(index_name_of(f))];
}

std::optional<double> maybe_value(const PixelRecord& r, Feature f) {
  if (is_band(f)) return r.bands[index_of(band_of(f))];
  if (!r.indices) return std::nullopt;
  return (*r.indices)[index_of(index_name_of(f))];
}

}  // namespace

CorrelationMatrix pearson_matrix(const Dataset& dataset, std::span<const Feature> features,
                                 std::optional<ClassLabel> class_filter) {
  const std::size_t p = features.size();
  std::vector<double> x;
  std::size_t n = 0;
  for (const auto& r : dataset.records) {
    if (class_filter && r.label != *class_filter) continue;
    if (!defined_for(r, features)) continue;
    for (auto f : features) x.push_back(value_of(r, f));
    ++n;
  }
  if (n < 2) throw Error(ErrorKind::TooFewSamples, "correlation needs at least two records");

  std::vector<double> mean(p, 0.0), lo(p, std::numeric_limits<double>::infinity()),
      hi(p, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      const double v = x[i * p + a];
      mean[a] += v;
      lo[a] = std::min(lo[a], v);
      hi[a] = std::max(hi[a], v);
    }
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  std::vector<double> cov(p * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &x[i * p];
    for (std::size_t a = 0; a < p; ++a) {
      const double da = row[a] - mean[a];
      for (std::size_t b = a; b < p; ++b) cov[a * p + b] += da * (row[b] - mean[b]);
    }
  }

  CorrelationMatrix cm;
  cm.features.assign(features.begin(), features.end());
  cm.entries.assign(p * p, 0.0);
  std::vector<bool> constant(p);
  for (std::size_t a = 0; a < p; ++a) {
    constant[a] = lo[a] == hi[a] || !(cov[a * p + a] > 0.0);
    if (constant[a]) cm.constant_features.push_back(features[a]);
  }
  for (std::size_t a = 0; a < p; ++a) {
    cm.entries[a * p + a] = 1.0;
    for (std::size_t b = a + 1; b < p; ++b) {
      double r = 0.0;
      if (!constant[a] && !constant[b]) {
        r = cov[a * p + b] / std::sqrt(cov[a * p + a] * cov[b * p + b]);
        r = std::clamp(r, -1.0, 1.0);
      }
      cm.entries[a * p + b] = r;
      cm.entries[b * p + a] = r;
    }
  }
  return cm;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::EmptySample, "quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * t;
}

FeatureSummary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySample, "summary of an empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  FeatureSummary out;
  double sum = 0.0;
  for (double v : s) sum += v;
  out.mean = sum / static_cast<double>(s.size());
  double ss = 0.0;
  for (double v : s) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(s.size()));
  out.min = s.front();
  out.max = s.back();
  out.q1 = quantile_sorted(s, 0.25);
  out.median = quantile_sorted(s, 0.5);
  out.q3 = quantile_sorted(s, 0.75);
  return out;
}

ClassSummary class_summary(const Dataset& dataset, std::span<const Feature> features) {
  if (dataset.empty()) throw Error(ErrorKind::EmptySample, "class summary of an empty dataset");
  ClassSummary cs;
  cs.features.assign(features.begin(), features.end());
  for (auto c : kAllClasses) {
    std::vector<std::vector<double>> cols(features.size());
    bool any = false;
    for (const auto& r : dataset.records) {
      if (r.label != c) continue;
      any = true;
      for (std::size_t f = 0; f < features.size(); ++f) {
        if (auto v = maybe_value(r, features[f])) cols[f].push_back(*v);
      }
    }
    if (!any) {
      cs.empty_classes.push_back(c);
      continue;
    }
    auto& out = cs.per_class[c];
    for (auto& col : cols) {
      if (col.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.push_back({nan, nan, nan, nan, nan, nan, nan});
      } else {
        out.push_back(summarize(col));
      }
    }
  }
  return cs;
}

BandVector mean_signature(const Dataset& dataset, ClassLabel label,
                          std::optional<double> min_coverage_pct) {
  BandVector sum{};
  std::size_t n = 0;
  for (const auto& r : dataset.records) {
    if (r.label != label) continue;
    if (min_coverage_pct && is_target(label) &&
        (!r.coverage_pct || *r.coverage_pct < *min_coverage_pct)) {
      continue;
    }
    for (std::size_t b = 0; b < kBandCount; ++b) sum[b] += r.bands[b];
    ++n;
  }
  if (n == 0) {
    throw Error(ErrorKind::EmptySelection, "no " + std::string(to_string(label)) + " records selected");
  }
  for (auto& v : sum) v /= static_cast<double>(n);
  return sum;
}

namespace {

using detail::Json;
using detail::num;

std::span<const Feature> report_features(const Dataset& d) {
  bool indexed = !d.empty();
  for (const auto& r : d.records) indexed = indexed && r.has_indices();
  return indexed ? all_features() : band_features();
}

Json matrix_json(const CorrelationMatrix& cm) {
  Json names = Json::array(), rows = Json::array(), constant = Json::array();
  for (auto f : cm.features) names.push_back(std::string(to_string(f)));
  for (std::size_t i = 0; i < cm.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < cm.dim(); ++j) row.push_back(num(cm.at(i, j)));
    rows.push_back(row);
  }
  for (auto f : cm.constant_features) constant.push_back(std::string(to_string(f)));
  return Json{{"features", names}, {"matrix", rows}, {"constant_features", constant}};
}

Json bands_json(const BandVector& v) {
  Json j = Json::object();
  for (std::size_t b = 0; b < kBandCount; ++b) j[std::string(kBands[b].sentinel_code)] = num(v[b]);
  return j;
}

std::vector<double> column(const Dataset& d, Feature f, std::optional<ClassLabel> c) {
  std::vector<double> out;
  for (const auto& r : d.records) {
    if (c && r.label != *c) continue;
    if (auto v = maybe_value(r, f)) out.push_back(*v);
  }
  return out;
}

Json ks_table(const Dataset& a, const Dataset& b, std::span<const Feature> features,
              std::optional<ClassLabel> c) {
  Json t = Json::object();
  for (auto f : features) {
    auto xa = column(a, f, c), xb = column(b, f, c);
    if (xa.empty() || xb.empty()) continue;
    auto r = ks_two_sample(xa, xb);
    t[std::string(to_string(f))] =
        Json{{"d", num(r.d_statistic)}, {"p", num(r.p_value)}, {"n", r.n}, {"m", r.m}};
  }
  return t;
}

std::size_t class_count(const Dataset& d, ClassLabel c) {
  return static_cast<std::size_t>(std::count_if(d.records.begin(), d.records.end(),
                                                [c](const PixelRecord& r) { return r.label == c; }));
}

}  // namespace

std::string explore_report_json(const Dataset& dataset, const Dataset* other) {
  if (dataset.empty()) throw Error(ErrorKind::EmptySample, "explore on an empty dataset");
  auto features = report_features(dataset);
  Json j;
  j["records"] = dataset.size();
  j["provenance"] = dataset.provenance;
  j["conventions"] = Json{{"std", "population"}, {"quantile", "inclusive_linear"},
                          {"ks_p_value", "asymptotic"}};

  Json counts = Json::object();
  for (auto c : kAllClasses) counts[std::string(to_string(c))] = class_count(dataset, c);
  j["class_counts"] = counts;

  auto cs = class_summary(dataset, features);
  Json summaries = Json::object();
  for (const auto& [c, rows] : cs.per_class) {
    Json per = Json::object();
    for (std::size_t f = 0; f < features.size(); ++f) {
      const auto& s = rows[f];
      per[std::string(to_string(features[f]))] =
          Json{{"mean", num(s.mean)}, {"std", num(s.std)},       {"min", num(s.min)},
               {"q1", num(s.q1)},     {"median", num(s.median)}, {"q3", num(s.q3)},
               {"max", num(s.max)}};
    }
    summaries[std::string(to_string(c))] = per;
  }
  j["class_summary"] = summaries;
  Json empty = Json::array();
  for (auto c : cs.empty_classes) empty.push_back(std::string(to_string(c)));
  j["empty_classes"] = empty;

  Json corr = Json::object();
  corr["all"] = matrix_json(pearson_matrix(dataset, features));
  Json per_class = Json::object();
  for (auto c : kAllClasses) {
    if (class_count(dataset, c) < 2) continue;
    try {
      per_class[std::string(to_string(c))] = matrix_json(pearson_matrix(dataset, features, c));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TooFewSamples) throw;
    }
  }
  corr["per_class"] = per_class;
  j["correlation"] = corr;

  Json sigs = Json::object();
  for (auto c : kAllClasses) {
    if (class_count(dataset, c) == 0) continue;
    sigs[std::string(to_string(c))] = bands_json(mean_signature(dataset, c));
    if (is_target(c)) {
      try {
        sigs[std::string(to_string(c)) + "_coverage_ge_50"] = bands_json(mean_signature(dataset, c, 50.0));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptySelection) throw;
      }
    }
  }
  j["mean_signatures"] = sigs;

  if (other) {
    auto shared = features;
    if (report_features(*other).size() < shared.size()) shared = band_features();
    Json ks = Json::object();
    ks["all"] = ks_table(dataset, *other, shared, std::nullopt);
    Json ks_class = Json::object();
    for (auto c : kAllClasses) {
      if (class_count(dataset, c) == 0 || class_count(*other, c) == 0) continue;
      ks_class[std::string(to_string(c))] = ks_table(dataset, *other, shared, c);
    }
    ks["per_class"] = ks_class;
    ks["other_provenance"] = other->provenance;
    j["ks"] = ks;
  }
  return detail::dump(j);
}

}  // namespace debris
