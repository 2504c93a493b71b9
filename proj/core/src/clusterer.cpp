#include "debris/clusterer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "debris/error.hpp"
#include "debris/parallel.hpp"
#include "debris/rng.hpp"
#include "json_util.hpp"

namespace debris {
namespace {

// Fixed block size: reductions are summed per block and then in block order,
// so results never depend on the worker count.
constexpr std::size_t kBlock = 8192;

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(std::span<const double> centroids, std::size_t k, std::span<const double> x,
                    double* best_out = nullptr) {
  const std::size_t dim = x.size();
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    const double dj = sq_dist(centroids.subspan(j * dim, dim), x);
    if (dj < bd) {
      bd = dj;
      best = j;
    }
  }
  if (best_out) *best_out = bd;
  return best;
}

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

struct AssignStats {
  std::vector<double> sums;  // k x dim
  std::vector<std::size_t> counts;
  double inertia = 0.0;
};

AssignStats assign(MatrixView x, std::span<const double> c, std::size_t k, std::vector<std::uint32_t>& labels,
                   std::vector<double>& dist) {
  const std::size_t n = x.rows(), dim = x.cols, nb = block_count(n);
  std::vector<AssignStats> part(nb);
  parallel_for(nb, [&](std::size_t b) {
    auto& p = part[b];
    p.sums.assign(k * dim, 0.0);
    p.counts.assign(k, 0);
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      double d = 0.0;
      const auto j = nearest(c, k, x.row(i), &d);
      labels[i] = static_cast<std::uint32_t>(j);
      dist[i] = d;
      p.inertia += d;
      ++p.counts[j];
      auto row = x.row(i);
      for (std::size_t f = 0; f < dim; ++f) p.sums[j * dim + f] += row[f];
    }
  });
  AssignStats total;
  total.sums.assign(k * dim, 0.0);
  total.counts.assign(k, 0);
  for (const auto& p : part) {
    total.inertia += p.inertia;
    for (std::size_t j = 0; j < k; ++j) total.counts[j] += p.counts[j];
    for (std::size_t i = 0; i < k * dim; ++i) total.sums[i] += p.sums[i];
  }
  return total;
}

std::vector<double> plus_plus(MatrixView x, std::size_t k, Rng& rng, bool& degenerate) {
  const std::size_t n = x.rows(), dim = x.cols;
  std::vector<double> c;
  c.reserve(k * dim);
  auto first = x.row(rng.below(n));
  c.insert(c.end(), first.begin(), first.end());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(x.row(i), first);
  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > r) {
          pick = i;
          break;
        }
      }
      if (pick == n) {  // rounding left r past the last positive weight
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      degenerate = true;
      pick = rng.below(n);
    }
    auto row = x.row(pick);
    c.insert(c.end(), row.begin(), row.end());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(x.row(i), row));
  }
  return c;
}

}  // namespace

KMeansModel kmeans_fit(MatrixView x, const KMeansConfig& cfg) {
  if (cfg.k == 0) throw Error(ErrorKind::Config, "k must be positive");
  if (x.cols == 0 || x.values.size() % x.cols != 0) {
    throw Error(ErrorKind::DimensionMismatch, "matrix size is not a multiple of its column count");
  }
  const std::size_t n = x.rows(), dim = x.cols, k = cfg.k;
  if (n < k) throw Error(ErrorKind::TooFewRows, "fewer rows than clusters");
  for (double v : x.values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::DegenerateInput, "non-finite value in clustering input");
  }

  KMeansModel m;
  m.k = k;
  m.dim = dim;
  m.config = cfg;
  Rng rng(derive_seed(cfg.seed, k));
  m.centroids = plus_plus(x, k, rng, m.degenerate);

  std::vector<std::uint32_t> labels(n);
  std::vector<double> dist(n);
  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    auto st = assign(x, m.centroids, k, labels, dist);
    m.inertia_history.push_back(st.inertia);

    std::vector<double> next(k * dim);
    for (std::size_t j = 0; j < k; ++j) {
      if (st.counts[j] == 0) continue;
      for (std::size_t f = 0; f < dim; ++f) {
        next[j * dim + f] = st.sums[j * dim + f] / static_cast<double>(st.counts[j]);
      }
    }
    // Empty clusters take the point farthest from its current centroid.
    bool reseeded = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (st.counts[j] != 0) continue;
      std::size_t far = n;
      double fd = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (st.counts[labels[i]] > 1 && dist[i] > fd) {
          fd = dist[i];
          far = i;
        }
      }
      if (far == n) {
        m.degenerate = true;
        auto row = x.row(0);
        std::copy(row.begin(), row.end(), next.begin() + static_cast<std::ptrdiff_t>(j * dim));
        continue;
      }
      reseeded = true;
      --st.counts[labels[far]];
      labels[far] = static_cast<std::uint32_t>(j);
      st.counts[j] = 1;
      dist[far] = 0.0;
      auto row = x.row(far);
      std::copy(row.begin(), row.end(), next.begin() + static_cast<std::ptrdiff_t>(j * dim));
    }
    // Centroids of clusters that lost a point to reseeding are recomputed.
    std::vector<double> sums(k * dim, 0.0);
    if (reseeded) {
      std::vector<std::size_t> counts(k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        ++counts[labels[i]];
        auto row = x.row(i);
        for (std::size_t f = 0; f < dim; ++f) sums[labels[i] * dim + f] += row[f];
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        for (std::size_t f = 0; f < dim; ++f) next[j * dim + f] = sums[j * dim + f] / static_cast<double>(counts[j]);
      }
    }

    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      shift = std::max(shift, std::sqrt(sq_dist(std::span<const double>(next).subspan(j * dim, dim),
                                                m.centroid(j))));
    }
    m.centroids = std::move(next);
    m.iterations = iter + 1;
    if (shift < cfg.tol) {
      m.converged = true;
      break;
    }
  }
  auto final_stats = assign(x, m.centroids, k, labels, dist);
  m.inertia = final_stats.inertia;
  m.inertia_history.push_back(m.inertia);
  return m;
}

std::size_t kmeans_predict(const KMeansModel& model, std::span<const double> x) {
  if (x.size() != model.dim) throw Error(ErrorKind::DimensionMismatch, "vector dimension does not match model");
  return nearest(model.centroids, model.k, x);
}

std::vector<std::size_t> kmeans_assign(const KMeansModel& model, MatrixView x) {
  if (x.cols != model.dim) throw Error(ErrorKind::DimensionMismatch, "matrix dimension does not match model");
  std::vector<std::size_t> out(x.rows());
  parallel_for(block_count(x.rows()), [&](std::size_t b) {
    const std::size_t end = std::min(x.rows(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) out[i] = nearest(model.centroids, model.k, x.row(i));
  });
  return out;
}

double kmeans_inertia(const KMeansModel& model, MatrixView x) {
  if (x.cols != model.dim) throw Error(ErrorKind::DimensionMismatch, "matrix dimension does not match model");
  const std::size_t nb = block_count(x.rows());
  std::vector<double> part(nb, 0.0);
  parallel_for(nb, [&](std::size_t b) {
    const std::size_t end = std::min(x.rows(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      double d = 0.0;
      nearest(model.centroids, model.k, x.row(i), &d);
      part[b] += d;
    }
  });
  return std::accumulate(part.begin(), part.end(), 0.0);
}

std::vector<double> model_space(const KMeansModel& model, std::span<const double> raw) {
  std::vector<double> out(raw.begin(), raw.end());
  if (model.scale_mean.empty()) return out;
  const std::size_t d = model.scale_mean.size();
  if (raw.size() % d != 0) throw Error(ErrorKind::DimensionMismatch, "matrix dimension does not match scaling");
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t f = i % d;
    const double s = model.scale_std[f] > 0.0 ? model.scale_std[f] : 1.0;
    out[i] = (out[i] - model.scale_mean[f]) / s;
  }
  return out;
}

std::string coverage_bucket(const PixelRecord& r) {
  if (r.coverage_partial) return "partial";
  if (!r.coverage_pct) return "";
  const double b = std::clamp(std::ceil(*r.coverage_pct / 20.0 - 1e-9), 1.0, 5.0) * 20.0;
  return std::to_string(static_cast<int>(b));
}

ClusterReport compose_report(const KMeansModel& model, const Dataset& dataset, const FeatureSet& fs) {
  if (fs.features != model.features || fs.id != model.feature_set) {
    throw Error(ErrorKind::FeatureSetMismatch, "model was fitted on a different feature set");
  }
  const auto raw = feature_matrix(dataset, fs.features);
  const auto xs = model_space(model, raw);
  ClusterReport rep;
  rep.feature_set = fs.id;
  rep.k = model.k;
  rep.total = dataset.size();
  rep.assignments = kmeans_assign(model, MatrixView{xs, fs.features.size()});
  rep.clusters.resize(model.k);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& r = dataset.records[i];
    auto& c = rep.clusters[rep.assignments[i]];
    ++c.size;
    ++c.by_class[std::string(to_string(r.label))];
    ++c.by_scene[r.scene_or_date];
    if (r.polymer) ++c.by_polymer[std::string(to_string(*r.polymer))];
    if (r.label == ClassLabel::Plastic) {
      auto bucket = coverage_bucket(r);
      if (!bucket.empty()) ++c.by_coverage[bucket];
    }
  }
  for (auto& c : rep.clusters) {
    c.share_of_total = rep.total ? static_cast<double>(c.size) / static_cast<double>(rep.total) : 0.0;
  }
  return rep;
}

namespace {

std::size_t count_of(const std::map<std::string, std::size_t>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

TrendFlags trend_flags(const ClusterReport& report) {
  TrendFlags t;
  const auto& cl = report.clusters;
  if (cl.empty() || report.total == 0) return t;
  std::vector<std::size_t> order(cl.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cl[a].size > cl[b].size; });
  const std::size_t d1 = order[0];
  const std::size_t d2 = order.size() > 1 ? order[1] : order[0];
  const std::size_t both = cl[d1].size + (d2 != d1 ? cl[d2].size : 0);
  t.two_cluster_share = static_cast<double>(both) / static_cast<double>(report.total);

  const std::string water(to_string(ClassLabel::Water));
  const std::string sand(to_string(ClassLabel::Sand));
  const std::string coast(to_string(ClassLabel::Coast));
  const bool d2_wetter = count_of(cl[d2].by_class, water) > count_of(cl[d1].by_class, water);
  const std::size_t wc = d2_wetter ? d2 : d1;
  const std::size_t sc = d2_wetter ? d1 : d2;

  for (const auto& c : cl) {
    if (count_of(c.by_class, water) > 0 &&
        (count_of(c.by_class, sand) > 0 || count_of(c.by_class, coast) > 0)) {
      t.water_sand_never_merged = false;
    }
  }

  std::size_t low = 0, low_in = 0;
  for (std::size_t j = 0; j < cl.size(); ++j) {
    for (const char* b : {"20", "40", "60"}) {
      const auto n = count_of(cl[j].by_coverage, b);
      low += n;
      if (j == d1 || j == d2) low_in += n;
    }
  }
  t.low_coverage_absorbed = low ? static_cast<double>(low_in) / static_cast<double>(low) : 1.0;

  std::map<std::string, std::size_t> totals;
  for (const auto& c : cl) {
    for (const auto& [p, n] : c.by_polymer) totals[p] += n;
  }
  double ldpe_out = -1.0, other_out = -1.0;
  for (const auto& [p, n] : totals) {
    auto poly = polymer_from_name(p);
    if (!poly || *poly == Polymer::None || n == 0) continue;
    const auto in_w = count_of(cl[wc].by_polymer, p);
    const auto in_s = wc == sc ? 0 : count_of(cl[sc].by_polymer, p);
    t.polymer_affinity[*poly] = in_w > in_s ? "water" : in_s > in_w ? "sand" : "tie";
    const double outside = 1.0 - static_cast<double>(count_of(cl[d1].by_polymer, p) +
                                                     (d2 != d1 ? count_of(cl[d2].by_polymer, p) : 0)) /
                                     static_cast<double>(n);
    if (*poly == Polymer::LDPE) {
      ldpe_out = outside;
    } else {
      other_out = std::max(other_out, outside);
    }
  }
  t.ldpe_isolation = ldpe_out > 0.0 && ldpe_out >= other_out;
  return t;
}

TrendSummary trend_checks(std::span<const ClusterReport> reports, const Dataset& dataset) {
  TrendSummary s;
  if (reports.empty()) return s;
  for (const auto& r : reports) {
    if (r.total != dataset.size()) {
      throw Error(ErrorKind::DimensionMismatch, "cluster report does not cover the dataset");
    }
    s.per_report.push_back(trend_flags(r));
  }
  auto& o = s.overall;
  o = s.per_report.front();
  for (std::size_t i = 1; i < s.per_report.size(); ++i) {
    const auto& t = s.per_report[i];
    o.two_cluster_share = std::min(o.two_cluster_share, t.two_cluster_share);
    o.low_coverage_absorbed = std::min(o.low_coverage_absorbed, t.low_coverage_absorbed);
    o.ldpe_isolation = o.ldpe_isolation && t.ldpe_isolation;
    o.water_sand_never_merged = o.water_sand_never_merged && t.water_sand_never_merged;
    for (auto& [p, a] : o.polymer_affinity) {
      auto it = t.polymer_affinity.find(p);
      if (it == t.polymer_affinity.end() || it->second != a) a = "mixed";
    }
  }
  return s;
}

namespace {

using detail::Json;
using detail::num;

Json names_json(std::span<const Feature> fs) {
  Json j = Json::array();
  for (auto f : fs) j.push_back(std::string(to_string(f)));
  return j;
}

Json counts_json(const std::map<std::string, std::size_t>& m, std::size_t size) {
  Json j = Json::object();
  for (const auto& [key, n] : m) {
    j[key] = Json{{"count", n}, {"pct", num(size ? 100.0 * static_cast<double>(n) / static_cast<double>(size) : 0.0)}};
  }
  return j;
}

Json flags_json(const TrendFlags& t) {
  Json aff = Json::object();
  for (const auto& [p, a] : t.polymer_affinity) aff[std::string(to_string(p))] = a;
  return Json{{"two_cluster_share", num(t.two_cluster_share)},
              {"low_coverage_absorbed", num(t.low_coverage_absorbed)},
              {"polymer_affinity", aff},
              {"ldpe_isolation", t.ldpe_isolation},
              {"water_sand_never_merged", t.water_sand_never_merged}};
}

template <typename T>
std::vector<T> get_vec(const Json& j, const char* key) {
  return j.at(key).get<std::vector<T>>();
}

}  // namespace

std::string to_json(const KMeansModel& m) {
  Json centroids = Json::array();
  for (std::size_t j = 0; j < m.k; ++j) {
    auto c = m.centroid(j);
    centroids.push_back(std::vector<double>(c.begin(), c.end()));
  }
  Json history = Json::array();
  for (double v : m.inertia_history) history.push_back(num(v));
  Json j{{"k", m.k},
         {"dim", m.dim},
         {"centroids", centroids},
         {"inertia", num(m.inertia)},
         {"inertia_history", history},
         {"iterations", m.iterations},
         {"converged", m.converged},
         {"degenerate", m.degenerate},
         {"config", Json{{"k", m.config.k}, {"seed", m.config.seed}, {"tol", m.config.tol}, {"max_iter", m.config.max_iter}}},
         {"feature_set", std::string(to_string(m.feature_set))},
         {"features", names_json(m.features)}};
  if (m.scale_mean.empty()) {
    j["scaling"] = nullptr;
  } else {
    j["scaling"] = Json{{"mean", m.scale_mean}, {"std", m.scale_std}};
  }
  return detail::dump(j);
}

KMeansModel model_from_json(const std::string& text) {
  try {
    const auto j = Json::parse(text);
    KMeansModel m;
    m.k = j.at("k").get<std::size_t>();
    m.dim = j.at("dim").get<std::size_t>();
    for (const auto& c : j.at("centroids")) {
      auto v = c.get<std::vector<double>>();
      if (v.size() != m.dim) throw Error(ErrorKind::Schema, "centroid dimension mismatch");
      m.centroids.insert(m.centroids.end(), v.begin(), v.end());
    }
    if (m.centroids.size() != m.k * m.dim || m.k == 0) throw Error(ErrorKind::Schema, "centroid count mismatch");
    m.inertia = j.at("inertia").get<double>();
    m.inertia_history = get_vec<double>(j, "inertia_history");
    m.iterations = j.at("iterations").get<std::size_t>();
    m.converged = j.at("converged").get<bool>();
    m.degenerate = j.at("degenerate").get<bool>();
    const auto& cfg = j.at("config");
    m.config = {cfg.at("k").get<std::size_t>(), cfg.at("seed").get<std::uint64_t>(), cfg.at("tol").get<double>(),
                cfg.at("max_iter").get<std::size_t>()};
    m.feature_set = feature_set_from_name(j.at("feature_set").get<std::string>());
    for (const auto& name : get_vec<std::string>(j, "features")) {
      auto f = feature_from_name(name);
      if (!f) throw Error(ErrorKind::Schema, "unknown feature '" + name + "' in model");
      m.features.push_back(*f);
    }
    if (m.features.size() != m.dim) throw Error(ErrorKind::Schema, "feature list does not match model dimension");
    if (!j.at("scaling").is_null()) {
      m.scale_mean = get_vec<double>(j.at("scaling"), "mean");
      m.scale_std = get_vec<double>(j.at("scaling"), "std");
      if (m.scale_mean.size() != m.dim || m.scale_std.size() != m.dim) {
        throw Error(ErrorKind::Schema, "scaling vectors do not match model dimension");
      }
    }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("bad model JSON: ") + e.what());
  }
}

namespace {

Json report_json(const ClusterReport& r) {
  Json clusters = Json::array();
  for (std::size_t j = 0; j < r.clusters.size(); ++j) {
    const auto& c = r.clusters[j];
    std::size_t plastic = 0, targets = 0;
    for (const auto& [key, n] : c.by_coverage) plastic += n;
    for (const auto& [key, n] : c.by_polymer) targets += n;
    clusters.push_back(Json{{"index", j},
                            {"size", c.size},
                            {"share_of_total", num(c.share_of_total)},
                            {"by_class", counts_json(c.by_class, c.size)},
                            {"by_polymer", counts_json(c.by_polymer, targets)},
                            {"by_coverage", counts_json(c.by_coverage, plastic)},
                            {"by_scene", counts_json(c.by_scene, c.size)}});
  }
  return Json{{"feature_set", std::string(to_string(r.feature_set))}, {"k", r.k}, {"total", r.total},
              {"clusters", clusters}};
}

}  // namespace

std::string to_json(const ClusterReport& report) { return detail::dump(report_json(report)); }

std::string to_json(const TrendSummary& summary, std::span<const ClusterReport> reports) {
  Json runs = Json::array();
  for (std::size_t i = 0; i < summary.per_report.size() && i < reports.size(); ++i) {
    auto j = flags_json(summary.per_report[i]);
    j["feature_set"] = std::string(to_string(reports[i].feature_set));
    j["k"] = reports[i].k;
    runs.push_back(j);
  }
  return detail::dump(Json{{"overall", flags_json(summary.overall)}, {"runs", runs}});
}

}  // namespace debris
