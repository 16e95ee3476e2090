#include "mcbr24/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "mcbr24/errors.hpp"

namespace mcbr {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

std::vector<TrainingExample> training_set(const Repository& repo, const std::vector<std::size_t>& positions) {
  std::vector<TrainingExample> out;
  out.reserve(positions.size());
  for (std::size_t p : positions) {
    const Case& c = repo.cases()[p];
    out.push_back({model_input(c.puzzle), encode_labels(c.solutions)});
  }
  return out;
}

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json metrics_json(const RetrievalMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"ndcg", m.ndcg}, {"mrr", m.mrr}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json modes = json::array();
  for (auto m : c.modes) modes.push_back(std::string(to_string(m)));
  json schemes = json::array();
  for (auto s : c.schemes) schemes.push_back(std::string(to_string(s)));
  json kinds = json::array();
  for (auto k : c.kinds) kinds.push_back(std::string(to_string(k)));
  return {{"runs", c.runs},
          {"holdout", c.holdout},
          {"ks", c.ks},
          {"seed", c.seed},
          {"train", {{"learning_rate", c.train.learning_rate}, {"momentum", c.train.momentum}, {"epochs", c.train.epochs}}},
          {"modes", modes},
          {"schemes", schemes},
          {"kinds", kinds},
          {"context_mode", std::string(to_string(c.context_mode))},
          {"concurrency", c.concurrency},
          {"latent_override", static_cast<bool>(c.latent_override)}};
}

std::uint64_t derive_seed(std::uint64_t master, int run, int stream) {
  return splitmix64(master + static_cast<std::uint64_t>(2 * run + stream + 1) * 0x9E3779B97F4A7C15ULL);
}

std::vector<std::size_t> sample_holdout(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (count > n) throw std::invalid_argument("cannot hold out more cases than exist");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(count);
  std::sort(perm.begin(), perm.end());
  return perm;
}

RunSetup prepare_run(const Repository& repo, const ExperimentConfig& config, int run, bool need_latent) {
  if (config.holdout <= 0 || static_cast<std::size_t>(config.holdout) >= repo.size()) {
    throw std::invalid_argument("holdout must be positive and smaller than the repository (" +
                                std::to_string(repo.size()) + " cases)");
  }
  RunSetup s;
  s.run = run;
  s.holdout = sample_holdout(repo.size(), static_cast<std::size_t>(config.holdout), derive_seed(config.seed, run, 0));
  for (std::size_t i = 0, h = 0; i < repo.size(); ++i) {
    if (h < s.holdout.size() && s.holdout[h] == i) {
      ++h;
      s.holdout_ids.insert(repo.cases()[i].id);
    } else {
      s.pool.push_back(i);
    }
  }

  s.indexed = repo;
  s.indexed.detach_index();
  if (need_latent && config.latent_override) {
    std::vector<IndexEntry> entries;
    for (const Case& c : repo.cases()) {
      IndexEntry e = make_index_entry(c.puzzle, nullptr);
      e.latent = config.latent_override(c);
      entries.push_back(std::move(e));
    }
    s.indexed.attach_index(std::move(entries));
  } else if (need_latent) {
    s.model = train(training_set(repo, s.pool), config.train, derive_seed(config.seed, run, 1));
    s.indexed.build_index(&*s.model);
  } else {
    s.indexed.build_index(nullptr);
  }
  return s;
}

const RetrievalRow& RetrievalReport::find(RelevanceScheme scheme, SimilarityMode mode) const {
  for (const auto& r : aggregate) {
    if (r.scheme == scheme && r.mode == mode) return r;
  }
  throw std::out_of_range("no aggregate row for " + std::string(to_string(scheme)) + "/" + std::string(to_string(mode)));
}

RetrievalReport run_retrieval_experiment(const Repository& repo, const ExperimentConfig& config) {
  if (config.ks.empty()) throw std::invalid_argument("at least one k is required");
  const std::size_t max_k = static_cast<std::size_t>(*std::max_element(config.ks.begin(), config.ks.end()));
  const bool need_latent =
      std::find(config.modes.begin(), config.modes.end(), SimilarityMode::kLatent) != config.modes.end();

  RetrievalReport report;
  for (int run = 0; run < config.runs; ++run) {
    const RunSetup setup = prepare_run(repo, config, run, need_latent);
    const auto& cases = setup.indexed.cases();
    const auto& index = setup.indexed.index();

    for (SimilarityMode mode : config.modes) {
      std::vector<RetrievalMetrics> sums(config.schemes.size());
      for (std::size_t h : setup.holdout) {
        const RankedResult ranked = top_k(setup.indexed, index[h], max_k, mode, setup.holdout_ids);
        for (std::size_t si = 0; si < config.schemes.size(); ++si) {
          const RelevanceScheme scheme = config.schemes[si];
          std::size_t relevant_total = 0;
          for (std::size_t p : setup.pool) relevant_total += is_relevant(cases[h], cases[p], scheme) ? 1 : 0;
          std::vector<bool> flags;
          for (const RankedHit& hit : ranked.hits) flags.push_back(is_relevant(cases[h], *setup.indexed.find(hit.id), scheme));
          const RetrievalMetrics m = average_over_k(flags, relevant_total, config.ks);
          sums[si].precision += m.precision;
          sums[si].recall += m.recall;
          sums[si].f1 += m.f1;
          sums[si].ndcg += m.ndcg;
          sums[si].mrr += m.mrr;
        }
      }
      const double n = static_cast<double>(setup.holdout.size());
      for (std::size_t si = 0; si < config.schemes.size(); ++si) {
        RetrievalMetrics m = sums[si];
        m.precision /= n;
        m.recall /= n;
        m.f1 /= n;
        m.ndcg /= n;
        m.mrr /= n;
        report.per_run.push_back({run, config.schemes[si], mode, m, std::nullopt});
      }
    }
  }

  for (RelevanceScheme scheme : config.schemes) {
    for (SimilarityMode mode : config.modes) {
      std::vector<RetrievalMetrics> rows;
      for (const auto& r : report.per_run) {
        if (r.scheme == scheme && r.mode == mode) rows.push_back(r.mean);
      }
      const double n = static_cast<double>(rows.size());
      auto stat = [&](double RetrievalMetrics::*field, double& mean, double& sd) {
        mean = 0.0;
        for (const auto& r : rows) mean += r.*field;
        mean /= n;
        double ss = 0.0;
        for (const auto& r : rows) ss += (r.*field - mean) * (r.*field - mean);
        sd = rows.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      };
      RetrievalMetrics mean, sd;
      for (auto field : {&RetrievalMetrics::precision, &RetrievalMetrics::recall, &RetrievalMetrics::f1,
                         &RetrievalMetrics::ndcg, &RetrievalMetrics::mrr}) {
        stat(field, mean.*field, sd.*field);
      }
      report.aggregate.push_back({-1, scheme, mode, mean, sd});
    }
  }
  return report;
}

const GenerationRow& GenerationReport::find(QueryKind kind) const {
  for (const auto& r : aggregate) {
    if (r.kind == kind) return r;
  }
  throw std::out_of_range("no aggregate row for " + std::string(to_string(kind)));
}

GenerationReport run_generation_experiment(const Repository& repo, const ExperimentConfig& config,
                                           const Provider& provider) {
  const bool has_tc = std::find(config.kinds.begin(), config.kinds.end(), QueryKind::kTC) != config.kinds.end();
  const bool need_latent = has_tc && config.context_mode == SimilarityMode::kLatent;

  GenerationReport report;
  std::map<QueryKind, GenerationTally> pooled;
  for (int run = 0; run < config.runs; ++run) {
    const RunSetup setup = prepare_run(repo, config, run, need_latent);
    const auto& cases = setup.indexed.cases();

    struct Job {
      const Case* test;
      PromptBundle bundle;
    };
    std::vector<Job> jobs;
    for (std::size_t h : setup.holdout) {
      for (QueryKind kind : config.kinds) {
        const Case* context = nullptr;
        if (kind == QueryKind::kTC) {
          const RankedResult top =
              top_k(setup.indexed, setup.indexed.index()[h], 1, config.context_mode, setup.holdout_ids);
          context = setup.indexed.find(top.hits.front().id);
        }
        jobs.push_back({&cases[h], build_query(kind, cases[h].puzzle, context)});
      }
    }

    std::vector<GenerationTranscript> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        const Job& job = jobs[i];
        GenerationTranscript& t = results[i];
        t = {run, job.test->id, job.bundle.kind, job.bundle.system, job.bundle.user, std::nullopt, {}};
        try {
          t.outcome = generate(provider, job.bundle);
        } catch (const ProviderUnavailable& e) {
          t.error = e.what();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.concurrency, 1)), 1,
                                                        std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::map<QueryKind, GenerationTally> tallies;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto& t = results[i];
      GenerationTally& tally = tallies[t.kind];
      if (!t.outcome) {
        tally.add_errored();
        continue;
      }
      std::optional<bool> admissible;
      if (t.kind == QueryKind::kTC) {
        admissible = std::any_of(jobs[i].bundle.tips.begin(), jobs[i].bundle.tips.end(),
                                 [&](const Tip& tip) { return tip_admits_solution(jobs[i].bundle.puzzle, tip); });
      }
      tally.add(t.outcome->verdict == Verdict::kCorrect, admissible);
    }
    for (QueryKind kind : config.kinds) {
      report.per_run.push_back({run, kind, tallies[kind].metrics()});
      pooled[kind] += tallies[kind];
    }
    report.transcripts.insert(report.transcripts.end(), std::make_move_iterator(results.begin()),
                              std::make_move_iterator(results.end()));
  }
  for (QueryKind kind : config.kinds) report.aggregate.push_back({-1, kind, pooled[kind].metrics()});
  return report;
}

// ---------------------------------------------------------------------------
// Reports

void write_retrieval_report(const RetrievalReport& report, const ExperimentConfig& config,
                            const std::filesystem::path& dir) {
  std::string csv = "row,run,labeling,similarity,precision,recall,f1,ndcg,mrr,precision_sd,recall_sd,f1_sd,ndcg_sd,mrr_sd\n";
  auto add_row = [&](const RetrievalRow& r) {
    csv += r.run < 0 ? "aggregate," : "run,";
    csv += (r.run < 0 ? std::string() : std::to_string(r.run)) + ",";
    csv += std::string(to_string(r.scheme)) + "," + std::string(to_string(r.mode));
    for (double v : {r.mean.precision, r.mean.recall, r.mean.f1, r.mean.ndcg, r.mean.mrr}) csv += "," + format_metric(v);
    if (r.stddev) {
      const auto& s = *r.stddev;
      for (double v : {s.precision, s.recall, s.f1, s.ndcg, s.mrr}) csv += "," + format_metric(v);
    } else {
      csv += ",,,,,";
    }
    csv += "\n";
  };
  json runs = json::array();
  for (const auto& r : report.per_run) {
    add_row(r);
    runs.push_back({{"run", r.run},
                    {"labeling", std::string(to_string(r.scheme))},
                    {"similarity", std::string(to_string(r.mode))},
                    {"metrics", metrics_json(r.mean)}});
  }
  json aggregate = json::array();
  for (const auto& r : report.aggregate) {
    add_row(r);
    aggregate.push_back({{"labeling", std::string(to_string(r.scheme))},
                         {"similarity", std::string(to_string(r.mode))},
                         {"mean", metrics_json(r.mean)},
                         {"stddev", metrics_json(r.stddev.value_or(RetrievalMetrics{}))}});
  }
  const json doc = {{"metadata", {{"experiment", "retrieval"}, {"generated_at", timestamp_utc()}}},
                    {"config", to_json(config)},
                    {"runs", runs},
                    {"aggregate", aggregate}};
  write_file(dir / "retrieval.csv", csv);
  write_file(dir / "retrieval.json", doc.dump(2) + "\n");
}

void write_generation_report(const GenerationReport& report, const ExperimentConfig& config,
                             const std::string& provider_name, const std::filesystem::path& dir) {
  std::string csv = "row,run,query,accuracy,faithfulness,negative_rejection,scored,errored\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_metric(*v) : std::string(); };
  auto row_json = [&](const GenerationRow& r) {
    return json{{"query", std::string(to_string(r.kind))},
                {"accuracy", r.metrics.accuracy},
                {"faithfulness", optional_json(r.metrics.faithfulness)},
                {"negative_rejection", optional_json(r.metrics.negative_rejection)},
                {"scored", r.metrics.scored},
                {"errored", r.metrics.errored_count}};
  };
  json runs = json::array();
  json aggregate = json::array();
  for (const auto* rows : {&report.per_run, &report.aggregate}) {
    for (const auto& r : *rows) {
      csv += r.run < 0 ? std::string("aggregate,") : "run," + std::to_string(r.run);
      csv += "," + std::string(to_string(r.kind)) + "," + format_metric(r.metrics.accuracy) + "," +
             opt(r.metrics.faithfulness) + "," + opt(r.metrics.negative_rejection) + "," +
             std::to_string(r.metrics.scored) + "," + std::to_string(r.metrics.errored_count) + "\n";
      json j = row_json(r);
      if (r.run >= 0) {
        j["run"] = r.run;
        runs.push_back(std::move(j));
      } else {
        aggregate.push_back(std::move(j));
      }
    }
  }
  const json doc = {{"metadata", {{"experiment", "generation"}, {"generated_at", timestamp_utc()}}},
                    {"config", to_json(config)},
                    {"provider", provider_name},
                    {"runs", runs},
                    {"aggregate", aggregate}};
  write_file(dir / "generation.csv", csv);
  write_file(dir / "generation.json", doc.dump(2) + "\n");

  for (const auto& t : report.transcripts) {
    char run_dir[16];
    std::snprintf(run_dir, sizeof run_dir, "run-%02d", t.run);
    json j = {{"case_id", t.case_id}, {"query", std::string(to_string(t.kind))}, {"system", t.system}, {"user", t.user}};
    if (t.outcome) {
      j["response"] = t.outcome->raw_response;
      j["parsed_answer"] = t.outcome->parsed_answer ? json(*t.outcome->parsed_answer) : json(nullptr);
      j["verdict"] = std::string(to_string(t.outcome->verdict));
    } else {
      j["error"] = t.error;
    }
    write_file(dir / "transcripts" / run_dir / (t.case_id + "-" + std::string(to_string(t.kind)) + ".json"),
               j.dump(2) + "\n");
  }
}

}  // namespace mcbr
