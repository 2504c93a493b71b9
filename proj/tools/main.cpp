// debris-spectra: command-line front end for the simulation and analysis pipeline.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "debris/error.hpp"
#include "debris/parallel.hpp"
#include "debris/pipeline.hpp"

namespace {

using debris::Error;
using debris::ErrorKind;

std::size_t env_threads() {
  if (const char* v = std::getenv("DEBRIS_SPECTRA_THREADS")) {
    try {
      const long n = std::stol(v);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring DEBRIS_SPECTRA_THREADS=" << v << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated Sentinel-2 marine debris campaign and spectral analysis pipeline",
               "debris-spectra"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "Seed (overrides the config)");
  app.add_option("--out", out, "Output directory (simulate) or file (other commands)");
  app.add_option("--threads", threads, "Worker threads; never changes results")->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "Build the simulated campaign: rasters, labels, pixel table");
  std::vector<std::string> polymers;
  std::vector<double> coverages;
  std::optional<double> noise;
  std::optional<std::string> resampler, library;
  sim->add_option("--polymer", polymers, "Restrict to these polymers");
  sim->add_option("--coverage", coverages, "Restrict to these coverage fractions");
  sim->add_option("--noise", noise, "Gaussian noise sigma (reflectance units)");
  sim->add_option("--resampler", resampler, "nearest | bilinear | cubic");
  sim->add_option("--library", library, "Signature CSV to use instead of the built-in library");

  std::string in, report;
  std::optional<std::string> compare;

  auto* idx = app.add_subcommand("indices", "Append the nine radiometric indices to a pixel table");
  idx->add_option("--in", in, "Input pixel table")->required();

  auto* cln = app.add_subcommand("clean", "Drop records with any undefined index");
  cln->add_option("--in", in, "Input pixel table")->required();
  cln->add_option("--report", report, "Clean report JSON")->required();

  auto* exp = app.add_subcommand("explore", "KS tests, correlations, class summaries, mean signatures");
  exp->add_option("--in", in, "Input pixel table")->required();
  exp->add_option("--compare", compare, "Second pixel table for KS comparisons");

  auto* sel = app.add_subcommand("select-features", "Random-forest importances and feature sets A-D");
  debris::SelectOptions sel_opts;
  sel->add_option("--in", in, "Indexed, cleaned pixel table")->required();
  sel->add_option("--n-trees", sel_opts.n_trees, "Trees in the forest")->check(CLI::PositiveNumber);
  sel->add_option("--max-depth", sel_opts.max_depth, "Tree depth")->check(CLI::PositiveNumber);

  auto* clu = app.add_subcommand("cluster", "K-Means on one feature set");
  debris::ClusterOptions clu_opts;
  std::string set_name = "B";
  std::optional<std::string> sets_file;
  bool scaling_flag = false;
  clu->add_option("--in", in, "Indexed, cleaned pixel table")->required();
  clu->add_option("--feature-set", set_name, "A | B | C | D");
  clu->add_option("--feature-sets", sets_file, "select-features output (needed for D)");
  clu->add_option("-k,--k", clu_opts.k, "Number of clusters")->check(CLI::PositiveNumber);
  clu->add_flag("--scaling", scaling_flag, "z-score features before clustering");

  auto* rep = app.add_subcommand("report", "Recompose cluster reports from saved models and check trends");
  std::vector<std::string> models;
  std::optional<std::string> expect_set;
  rep->add_option("--model", models, "Model or cluster output JSON (repeatable)")->required();
  rep->add_option("--in", in, "Pixel table the models are applied to")->required();
  rep->add_option("--expect-set", expect_set, "Fail unless every model uses this feature set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : debris::kExitUsage;
  }

  try {
    debris::set_thread_count(threads ? *threads : env_threads());
    debris::RunConfig cfg;
    if (config_path) cfg = debris::load_run_config(*config_path);
    if (seed) cfg.seed = *seed;

    auto need_out = [&]() -> std::string {
      if (!out) throw Error(ErrorKind::Config, "--out is required for this command");
      return *out;
    };

    if (*sim) {
      if (out) cfg.output_dir = *out;
      if (!polymers.empty()) {
        cfg.polymers.clear();
        for (const auto& p : polymers) {
          auto poly = debris::polymer_from_name(p);
          if (!poly || *poly == debris::Polymer::None) throw Error(ErrorKind::Config, "unknown polymer " + p);
          cfg.polymers.push_back(*poly);
        }
      }
      if (!coverages.empty()) cfg.coverages = coverages;
      if (noise) cfg.noise_sigma = *noise;
      if (resampler) cfg.resampler = debris::resampler_from_name(*resampler);
      if (library) cfg.library_path = *library;
      const auto res = debris::cmd_simulate(cfg);
      std::cout << "scenes " << res.scenes << ", rasters " << res.rasters << ", records " << res.records
                << " -> " << res.dataset_csv.string() << "\n";
    } else if (*idx) {
      debris::cmd_indices(in, need_out());
    } else if (*cln) {
      debris::cmd_clean(in, need_out(), report);
    } else if (*exp) {
      std::optional<std::filesystem::path> cmp;
      if (compare) cmp = *compare;
      debris::cmd_explore(in, cmp, need_out());
    } else if (*sel) {
      sel_opts.seed = cfg.seed;
      debris::cmd_select_features(in, need_out(), sel_opts);
    } else if (*clu) {
      clu_opts.feature_set = debris::feature_set_from_name(set_name);
      if (sets_file) clu_opts.feature_sets_file = *sets_file;
      clu_opts.seed = cfg.seed;
      clu_opts.scaling = scaling_flag || cfg.scaling;
      debris::cmd_cluster(in, need_out(), clu_opts);
    } else if (*rep) {
      std::vector<std::filesystem::path> paths(models.begin(), models.end());
      std::optional<debris::FeatureSetId> expected;
      if (expect_set) expected = debris::feature_set_from_name(*expect_set);
      debris::cmd_report(paths, in, need_out(), expected);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << debris::to_string(e.kind()) << "): " << e.what() << "\n";
    return debris::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return debris::kExitNumeric;
  }
  return debris::kExitOk;
}
