#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "debris/error.hpp"
#include "debris/feature_select.hpp"
#include "debris/model.hpp"
#include "debris/raster.hpp"
#include "debris/spectral_library.hpp"

namespace debris {

// Exit-code contract of the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitNumeric = 4,
};

int exit_code_for(ErrorKind kind);

struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> library_path;
  std::vector<Polymer> polymers{kCampaignPolymers.begin(), kCampaignPolymers.end()};
  std::vector<double> coverages{0.2, 0.4, 0.6, 0.8, 1.0};
  double noise_sigma = 0.0;
  Resampler resampler = Resampler::Bilinear;
  std::vector<FeatureSetId> feature_sets{FeatureSetId::A, FeatureSetId::B, FeatureSetId::C,
                                         FeatureSetId::D};
  std::vector<std::size_t> k_values{3, 4, 5};
  bool scaling = false;
  std::filesystem::path output_dir = "out";
};

// Parses a JSON config; unknown keys and invalid values raise Error(Config).
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string to_json(const RunConfig& config);
// FNV-1a 64 over the canonical JSON form, as 16 hex digits.
std::string config_digest(const RunConfig& config);

struct SimulateOutputs {
  std::filesystem::path dataset_csv;
  std::filesystem::path manifest;
  std::size_t scenes = 0;
  std::size_t rasters = 0;
  std::size_t records = 0;
};

// Writes rasters/<scene>_<code>.mdrs, labels/<scene>.csv, campaign.csv and
// manifest.json under config.output_dir.
SimulateOutputs cmd_simulate(const RunConfig& config);

void cmd_indices(const std::filesystem::path& in, const std::filesystem::path& out);
void cmd_clean(const std::filesystem::path& in, const std::filesystem::path& out,
               const std::filesystem::path& report);
void cmd_explore(const std::filesystem::path& in, const std::optional<std::filesystem::path>& compare,
                 const std::filesystem::path& report);

struct SelectOptions {
  std::size_t n_trees = 100;
  std::uint64_t seed = 0;
  std::size_t max_depth = 3;
};

// Runs the forest on the full dataset and on the Water+Plastic subset and
// writes both importance reports plus the A-D feature sets as one JSON file.
void cmd_select_features(const std::filesystem::path& in, const std::filesystem::path& out,
                         const SelectOptions& options);

struct ClusterOptions {
  FeatureSetId feature_set = FeatureSetId::B;
  std::optional<std::filesystem::path> feature_sets_file;  // needed for set D
  std::size_t k = 3;
  std::uint64_t seed = 0;
  bool scaling = false;
};

void cmd_cluster(const std::filesystem::path& in, const std::filesystem::path& out,
                 const ClusterOptions& options);

// Recomputes reports for persisted models against a dataset and writes the
// trend summary. When expected_set is given every model must match it.
void cmd_report(const std::vector<std::filesystem::path>& models, const std::filesystem::path& in,
                const std::filesystem::path& out, std::optional<FeatureSetId> expected_set);

// Resolves a feature set id; D is read from a select-features output file.
FeatureSet resolve_feature_set(FeatureSetId id,
                               const std::optional<std::filesystem::path>& feature_sets_file);

std::shared_ptr<const SignatureLibrary> library_for(const RunConfig& config);

}  // namespace debris
