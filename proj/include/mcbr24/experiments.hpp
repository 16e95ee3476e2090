#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcbr24/case_repository.hpp"
#include "mcbr24/latent_model.hpp"
#include "mcbr24/metrics.hpp"
#include "mcbr24/providers.hpp"
#include "mcbr24/query.hpp"
#include "mcbr24/retrieval.hpp"

namespace mcbr {

struct ExperimentConfig {
  int runs = 10;
  int holdout = 30;
  std::vector<int> ks{1, 2, 3, 4, 5};
  std::uint64_t seed = 2024;
  TrainOptions train;
  std::vector<SimilarityMode> modes{SimilarityMode::kFeatures, SimilarityMode::kLatent};
  std::vector<RelevanceScheme> schemes{RelevanceScheme::kSCO, RelevanceScheme::kSCD};
  std::vector<QueryKind> kinds{QueryKind::kNC, QueryKind::kGC, QueryKind::kTC};
  // Similarity used to pick the TC context case.
  SimilarityMode context_mode = SimilarityMode::kLatent;
  // In-flight provider calls per run.
  int concurrency = 4;
  // Replaces the trained latent column when set (e.g. a label-vector oracle).
  std::function<LatentVector(const Case&)> latent_override;
};

nlohmann::json to_json(const ExperimentConfig& config);

// Seed for stream `stream` of run `run`: splitmix64 of
// master + (2 * run + stream + 1) * golden-ratio constant. Stream 0 draws the
// holdout, stream 1 initializes training.
std::uint64_t derive_seed(std::uint64_t master, int run, int stream);

// `count` distinct positions in [0, n), drawn by a partial Fisher-Yates
// shuffle with mt19937_64 and rejection sampling (portable across
// standard libraries). Returned in ascending order.
std::vector<std::size_t> sample_holdout(std::size_t n, std::size_t count, std::uint64_t seed);

// One run's split and trained model, shared by both experiments.
struct RunSetup {
  int run = 0;
  std::vector<std::size_t> holdout;  // positions into the repository
  std::vector<std::size_t> pool;     // everything else
  std::set<std::string> holdout_ids;
  Repository indexed;  // the repository with a features (+ latent) index
  std::optional<LatentModel> model;
};

// Throws std::invalid_argument unless 0 < holdout < repository size.
RunSetup prepare_run(const Repository& repo, const ExperimentConfig& config, int run, bool need_latent);

struct RetrievalRow {
  int run = -1;  // -1 for aggregate rows
  RelevanceScheme scheme;
  SimilarityMode mode;
  RetrievalMetrics mean;
  std::optional<RetrievalMetrics> stddev;  // aggregate rows only
};

struct RetrievalReport {
  std::vector<RetrievalRow> per_run;
  std::vector<RetrievalRow> aggregate;

  const RetrievalRow& find(RelevanceScheme scheme, SimilarityMode mode) const;
};

RetrievalReport run_retrieval_experiment(const Repository& repo, const ExperimentConfig& config);

struct GenerationRow {
  int run = -1;
  QueryKind kind;
  GenerationMetrics metrics;
};

struct GenerationTranscript {
  int run;
  std::string case_id;
  QueryKind kind;
  std::string system;
  std::string user;
  std::optional<GenerationOutcome> outcome;  // empty when the provider errored
  std::string error;
};

struct GenerationReport {
  std::vector<GenerationRow> per_run;
  std::vector<GenerationRow> aggregate;  // pooled over runs
  std::vector<GenerationTranscript> transcripts;

  const GenerationRow& find(QueryKind kind) const;
};

GenerationReport run_generation_experiment(const Repository& repo, const ExperimentConfig& config,
                                           const Provider& provider);

// CSV + JSON reports (and transcripts for generation) under `dir`.
void write_retrieval_report(const RetrievalReport& report, const ExperimentConfig& config,
                            const std::filesystem::path& dir);
void write_generation_report(const GenerationReport& report, const ExperimentConfig& config,
                             const std::string& provider_name, const std::filesystem::path& dir);

}  // namespace mcbr
