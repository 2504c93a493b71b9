#include "debris/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>

#include "debris/clusterer.hpp"
#include "debris/error.hpp"
#include "debris/explore_stats.hpp"
#include "debris/indices.hpp"
#include "debris/pixel_table.hpp"
#include "debris/preprocess.hpp"
#include "debris/scene_sim.hpp"
#include "json_util.hpp"

namespace debris {

using detail::Json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::TooFewRows:
    case ErrorKind::DegenerateInput:
    case ErrorKind::EmptySample:
    case ErrorKind::TooFewSamples:
    case ErrorKind::SingleClass:
    case ErrorKind::NoEligibleCandidate:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::EmptySelection:
      return kExitNumeric;
    default:
      return kExitUsage;
  }
}

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::Io, "cannot create directory " + dir.string());
  }
}

void ensure_parent(const std::filesystem::path& file) {
  if (file.has_parent_path()) ensure_dir(file.parent_path());
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, what + ": " + e.what());
  }
}

// Config form used for the digest and the manifest; output_dir is left out
// so that the same run written to two places yields identical artifacts.
Json canonical(const RunConfig& c) {
  Json polymers = Json::array(), sets = Json::array();
  for (auto p : c.polymers) polymers.push_back(std::string(to_string(p)));
  for (auto s : c.feature_sets) sets.push_back(std::string(to_string(s)));
  Json covs = Json::array();
  for (double f : c.coverages) covs.push_back(detail::num(f));
  return Json{{"seed", c.seed},
              {"library_path", c.library_path ? Json(c.library_path->generic_string()) : Json(nullptr)},
              {"polymers", polymers},
              {"coverages", covs},
              {"noise_sigma", detail::num(c.noise_sigma)},
              {"resampler", std::string(to_string(c.resampler))},
              {"feature_sets", sets},
              {"k_values", c.k_values},
              {"scaling", c.scaling}};
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  const Json j = parse_json(text, "config");
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::set<std::string> known{"seed",     "library_path", "polymers", "coverages",
                                           "noise_sigma", "resampler", "feature_sets", "k_values",
                                           "scaling",  "output_dir"};
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.contains(key)) config_error("unknown config key '" + key + "'");
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) config_error("seed must be a non-negative integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("library_path") && !j["library_path"].is_null()) {
      c.library_path = j["library_path"].get<std::string>();
    }
    if (j.contains("polymers")) {
      c.polymers.clear();
      for (const auto& p : j["polymers"]) {
        auto poly = polymer_from_name(p.get<std::string>());
        if (!poly || *poly == Polymer::None) config_error("unknown polymer " + p.dump());
        c.polymers.push_back(*poly);
      }
      if (c.polymers.empty()) config_error("polymers must not be empty");
    }
    if (j.contains("coverages")) {
      c.coverages.clear();
      for (const auto& f : j["coverages"]) {
        const double v = f.get<double>();
        if (std::find(kCampaignCoverages.begin(), kCampaignCoverages.end(), v) == kCampaignCoverages.end()) {
          config_error("coverage must be one of 0.2, 0.4, 0.6, 0.8, 1.0");
        }
        c.coverages.push_back(v);
      }
      if (c.coverages.empty()) config_error("coverages must not be empty");
    }
    if (j.contains("noise_sigma")) {
      c.noise_sigma = j["noise_sigma"].get<double>();
      if (!(c.noise_sigma >= 0.0) || !std::isfinite(c.noise_sigma)) config_error("noise_sigma must be >= 0");
    }
    if (j.contains("resampler")) c.resampler = resampler_from_name(j["resampler"].get<std::string>());
    if (j.contains("feature_sets")) {
      c.feature_sets.clear();
      for (const auto& s : j["feature_sets"]) c.feature_sets.push_back(feature_set_from_name(s.get<std::string>()));
      if (c.feature_sets.empty()) config_error("feature_sets must not be empty");
    }
    if (j.contains("k_values")) {
      c.k_values.clear();
      for (const auto& k : j["k_values"]) {
        if (!k.is_number_unsigned() || k.get<std::size_t>() == 0) config_error("k values must be positive integers");
        c.k_values.push_back(k.get<std::size_t>());
      }
      if (c.k_values.empty()) config_error("k_values must not be empty");
    }
    if (j.contains("scaling")) c.scaling = j["scaling"].get<bool>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  } catch (const Json::exception& e) {
    config_error(std::string("bad config value: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_text(path)); }

std::string to_json(const RunConfig& config) {
  Json j = canonical(config);
  j["output_dir"] = config.output_dir.generic_string();
  return detail::dump(j);
}

std::string config_digest(const RunConfig& config) {
  const std::string text = canonical(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::shared_ptr<const SignatureLibrary> library_for(const RunConfig& config) {
  if (config.library_path) return std::make_shared<const SignatureLibrary>(load_library(*config.library_path));
  return std::make_shared<const SignatureLibrary>(builtin_default_library());
}

SimulateOutputs cmd_simulate(const RunConfig& config) {
  auto lib = library_for(config);
  const auto specs = make_campaign(lib, config.polymers, config.coverages, config.noise_sigma, config.seed);
  const auto stacks = build_campaign(specs);
  const auto dataset = campaign_dataset(stacks, config.resampler);

  const auto root = config.output_dir;
  ensure_dir(root / "rasters");
  ensure_dir(root / "labels");
  SimulateOutputs out;
  Json scenes = Json::array();
  for (std::size_t s = 0; s < stacks.size(); ++s) {
    const auto& st = stacks[s];
    Json files = Json::array();
    for (const auto& r : st.rasters) {
      const auto name = st.scene_id + "_" + std::string(info(r.band).sentinel_code) + ".mdrs";
      write_raster(r, root / "rasters" / name);
      files.push_back("rasters/" + name);
      ++out.rasters;
    }
    write_text(root / "labels" / (st.scene_id + ".csv"), labels_csv(st));
    auto tally = [](const std::vector<ClassLabel>& labels) {
      Json t = Json::object();
      for (auto c : {ClassLabel::Water, ClassLabel::Sand, ClassLabel::Plastic}) {
        t[std::string(to_string(c))] = std::count(labels.begin(), labels.end(), c);
      }
      return t;
    };
    scenes.push_back(Json{{"scene_id", st.scene_id},
                          {"polymer", std::string(to_string(st.polymer))},
                          {"coverage_fraction", detail::num(st.coverage_fraction)},
                          {"seed", specs[s].seed},
                          {"rasters", files},
                          {"labels", "labels/" + st.scene_id + ".csv"},
                          {"labels_10m", tally(st.labels_10m)},
                          {"labels_20m", tally(st.labels_20m)}});
  }
  out.dataset_csv = root / "campaign.csv";
  write_pixel_table(dataset, out.dataset_csv);

  Json counts = Json::object();
  for (auto c : {ClassLabel::Water, ClassLabel::Sand, ClassLabel::Plastic}) {
    counts[std::string(to_string(c))] = std::count_if(dataset.records.begin(), dataset.records.end(),
                                                      [c](const PixelRecord& r) { return r.label == c; });
  }
  out.manifest = root / "manifest.json";
  write_text(out.manifest, detail::dump(Json{{"config", canonical(config)},
                                             {"config_digest", config_digest(config)},
                                             {"library", lib->provenance()},
                                             {"scenes", scenes},
                                             {"raster_count", out.rasters},
                                             {"records", dataset.size()},
                                             {"class_counts", counts},
                                             {"dataset", "campaign.csv"}}));
  out.scenes = stacks.size();
  out.records = dataset.size();
  return out;
}

void cmd_indices(const std::filesystem::path& in, const std::filesystem::path& out) {
  const auto d = compute_all(read_pixel_table(in));
  ensure_parent(out);
  write_pixel_table(d, out);
}

void cmd_clean(const std::filesystem::path& in, const std::filesystem::path& out,
               const std::filesystem::path& report) {
  const auto result = clean(read_pixel_table(in));
  ensure_parent(out);
  ensure_parent(report);
  write_pixel_table(result.dataset, out);
  write_text(report, to_json(result.report));
}

void cmd_explore(const std::filesystem::path& in, const std::optional<std::filesystem::path>& compare,
                 const std::filesystem::path& report) {
  const auto d = read_pixel_table(in);
  std::optional<Dataset> other;
  if (compare) other = read_pixel_table(*compare);
  ensure_parent(report);
  write_text(report, explore_report_json(d, other ? &*other : nullptr));
}

namespace {

Dataset only_classes(const Dataset& d, std::initializer_list<ClassLabel> keep) {
  Dataset out;
  out.provenance = d.provenance;
  for (const auto& r : d.records) {
    if (std::find(keep.begin(), keep.end(), r.label) != keep.end()) out.records.push_back(r);
  }
  return out;
}

void require_indices(const Dataset& d) {
  for (const auto& r : d.records) {
    if (!r.has_indices()) {
      throw Error(ErrorKind::NotIndexed, "input lacks index columns; run `indices` first");
    }
  }
}

}  // namespace

void cmd_select_features(const std::filesystem::path& in, const std::filesystem::path& out,
                         const SelectOptions& options) {
  const auto d = read_pixel_table(in);
  require_indices(d);
  ForestConfig cfg;
  cfg.n_trees = options.n_trees;
  cfg.max_depth = options.max_depth;
  cfg.seed = options.seed;

  auto full = fit_forest(d, all_features(), cfg);
  full.label = "full";
  Json reports = Json::array();
  reports.push_back(Json::parse(to_json(full)));
  const auto wp = only_classes(d, {ClassLabel::Water, ClassLabel::Plastic});
  try {
    auto sub = fit_forest(wp, all_features(), cfg);
    sub.label = "water_plastic";
    reports.push_back(Json::parse(to_json(sub)));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingleClass) throw;
  }

  const auto corr = pearson_matrix(d, all_features());
  std::vector<CorrelationMatrix> per_class;
  for (auto c : kAllClasses) {
    const auto n = std::count_if(d.records.begin(), d.records.end(), [c](const PixelRecord& r) { return r.label == c; });
    if (n >= 2) per_class.push_back(pearson_matrix(d, all_features(), c));
  }
  const auto sets = build_feature_sets(full, corr, per_class);
  Json jsets = Json::object();
  bool relaxed = false;
  for (const auto& s : sets) {
    Json names = Json::array();
    for (auto f : s.features) names.push_back(std::string(to_string(f)));
    jsets[std::string(to_string(s.id))] = names;
    if (s.id == FeatureSetId::D) relaxed = s.relaxed;
  }
  ensure_parent(out);
  write_text(out, detail::dump(Json{{"reports", reports},
                                    {"feature_sets", jsets},
                                    {"set_d_gate", Json{{"threshold", kCorrelationGate}, {"relaxed", relaxed}}}}));
}

FeatureSet resolve_feature_set(FeatureSetId id, const std::optional<std::filesystem::path>& file) {
  if (id != FeatureSetId::D) return fixed_feature_set(id);
  if (!file) throw Error(ErrorKind::Config, "feature set D needs --feature-sets <select-features output>");
  const auto j = parse_json(read_text(*file), file->string());
  FeatureSet s;
  s.id = FeatureSetId::D;
  try {
    for (const auto& name : j.at("feature_sets").at("D")) {
      auto f = feature_from_name(name.get<std::string>());
      if (!f) throw Error(ErrorKind::Schema, "unknown feature " + name.dump());
      s.features.push_back(*f);
    }
    s.relaxed = j.at("set_d_gate").at("relaxed").get<bool>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("bad feature-set file: ") + e.what());
  }
  if (s.features.size() != 4) throw Error(ErrorKind::Schema, "feature set D must have 4 features");
  return s;
}

void cmd_cluster(const std::filesystem::path& in, const std::filesystem::path& out, const ClusterOptions& options) {
  const auto d = read_pixel_table(in);
  const auto fs = resolve_feature_set(options.feature_set, options.feature_sets_file);
  const auto raw = feature_matrix(d, fs.features);
  const std::size_t dim = fs.features.size();

  KMeansModel scale;
  if (options.scaling) {
    const std::size_t n = d.size();
    if (n == 0) throw Error(ErrorKind::TooFewRows, "empty dataset");
    scale.scale_mean.assign(dim, 0.0);
    scale.scale_std.assign(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t f = 0; f < dim; ++f) scale.scale_mean[f] += raw[i * dim + f];
    }
    for (auto& m : scale.scale_mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t f = 0; f < dim; ++f) {
        const double dv = raw[i * dim + f] - scale.scale_mean[f];
        scale.scale_std[f] += dv * dv;
      }
    }
    for (auto& s : scale.scale_std) s = std::sqrt(s / static_cast<double>(n));
  }
  const auto xs = model_space(scale, raw);
  KMeansConfig kc;
  kc.k = options.k;
  kc.seed = options.seed;
  auto model = kmeans_fit(MatrixView{xs, dim}, kc);
  model.feature_set = fs.id;
  model.features = fs.features;
  model.scale_mean = scale.scale_mean;
  model.scale_std = scale.scale_std;

  const auto report = compose_report(model, d, fs);
  const auto flags = trend_flags(report);
  TrendSummary summary{flags, {flags}};
  ensure_parent(out);
  write_text(out, detail::dump(Json{{"model", Json::parse(to_json(model))},
                                    {"report", Json::parse(to_json(report))},
                                    {"trends", Json::parse(to_json(summary, std::span(&report, 1)))}}));
}

void cmd_report(const std::vector<std::filesystem::path>& models, const std::filesystem::path& in,
                const std::filesystem::path& out, std::optional<FeatureSetId> expected_set) {
  if (models.empty()) throw Error(ErrorKind::Config, "report needs at least one model file");
  const auto d = read_pixel_table(in);
  std::vector<ClusterReport> reports;
  Json jreports = Json::array();
  for (const auto& path : models) {
    const auto j = parse_json(read_text(path), path.string());
    const auto model = model_from_json(j.contains("model") ? j["model"].dump() : j.dump());
    if (expected_set && model.feature_set != *expected_set) {
      throw Error(ErrorKind::FeatureSetMismatch, path.string() + ": model was fitted on set " +
                                                     std::string(to_string(model.feature_set)));
    }
    FeatureSet fs{model.feature_set, model.features, false};
    reports.push_back(compose_report(model, d, fs));
    jreports.push_back(Json::parse(to_json(reports.back())));
  }
  const auto summary = trend_checks(reports, d);
  ensure_parent(out);
  write_text(out, detail::dump(Json{{"reports", jreports}, {"trends", Json::parse(to_json(summary, reports))}}));
}

}  // namespace debris
