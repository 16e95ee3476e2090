#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcbr24/experiments.hpp"
#include "mcbr24/providers.hpp"

namespace mcbr {

// Everything the command-line tool needs. Defaults follow the evaluation
// protocol (10 runs, 30 held-out cases, k = 1..5).
struct RunConfig {
  std::filesystem::path repository = "data/repository.jsonl";
  std::string images = "images";  // relative to the repository file
  std::filesystem::path output = "reports";
  std::filesystem::path model = "data/latent_model.txt";

  int runs = 10;
  int holdout = 30;
  std::vector<int> ks{1, 2, 3, 4, 5};
  std::uint64_t seed = 2024;

  TrainOptions train;

  SimilarityMode retrieval_mode = SimilarityMode::kLatent;
  std::vector<double> retrieval_weights{1.0};
  int k = 5;

  std::vector<QueryKind> kinds{QueryKind::kNC, QueryKind::kGC, QueryKind::kTC};
  SimilarityMode context_mode = SimilarityMode::kLatent;

  std::string provider = "tip-follower";  // tip-follower | oracle | null | remote
  std::string endpoint;
  std::string provider_model;
  std::string api_key_env = "OPENAI_API_KEY";
  int concurrency = 4;
  int timeout_s = 60;
  int retries = 3;

  double codec_noise = 0.0;
};

// Flat dotted keys, e.g. {"experiment.runs": 10, "provider.name": "remote"}.
// Throws ConfigError on unknown keys, wrong types or invalid values.
void apply_config_json(RunConfig& config, const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Checks cross-field constraints. Throws ConfigError.
void validate(const RunConfig& config);

ExperimentConfig experiment_config(const RunConfig& config);
RemoteProviderConfig remote_provider_config(const RunConfig& config);
std::unique_ptr<Provider> make_provider(const RunConfig& config);

}  // namespace mcbr
