// mcbr24: command-line front end for the Math-24 case-based RAG pipeline.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcbr24/card_codec.hpp"
#include "mcbr24/case_repository.hpp"
#include "mcbr24/config.hpp"
#include "mcbr24/errors.hpp"
#include "mcbr24/experiments.hpp"
#include "mcbr24/features.hpp"
#include "mcbr24/math24.hpp"
#include "mcbr24/query.hpp"
#include "mcbr24/retrieval.hpp"

namespace {

using namespace mcbr;

// Flag values that override the config file when given.
struct Overrides {
  std::optional<std::string> repository, output, model, provider, endpoint, provider_model, api_key_env, context_mode;
  std::optional<int> runs, holdout, epochs, concurrency;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::optional<std::vector<int>> ks;
};

RunConfig resolve(const std::string& config_path, const Overrides& o) {
  RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
  if (o.repository) c.repository = *o.repository;
  if (o.output) c.output = *o.output;
  if (o.model) c.model = *o.model;
  if (o.provider) c.provider = *o.provider;
  if (o.endpoint) c.endpoint = *o.endpoint;
  if (o.provider_model) c.provider_model = *o.provider_model;
  if (o.api_key_env) c.api_key_env = *o.api_key_env;
  if (o.context_mode) c.context_mode = parse_similarity_mode(*o.context_mode);
  if (o.runs) c.runs = *o.runs;
  if (o.holdout) c.holdout = *o.holdout;
  if (o.epochs) c.train.epochs = *o.epochs;
  if (o.concurrency) c.concurrency = *o.concurrency;
  if (o.seed) c.seed = *o.seed;
  if (o.noise) c.codec_noise = *o.noise;
  if (o.ks) c.ks = *o.ks;
  validate(c);
  return c;
}

Puzzle puzzle_from(const std::vector<int>& n) { return Puzzle::from_unsorted({n[0], n[1], n[2], n[3]}); }

std::string categories_of(const Case& c) {
  std::string out;
  for (const Solution& s : c.solutions) {
    if (!out.empty()) out += " ";
    out += s.category.name() + "@(" + std::to_string(s.large_positions[0]) + "," +
           std::to_string(s.large_positions[1]) + ")";
  }
  return out;
}

std::string pct(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%6.2f", 100.0 * v);
  return buf;
}

// Index over `repo` in `mode`, loading the trained model when needed.
Repository indexed_repository(const RunConfig& c, SimilarityMode mode) {
  Repository repo = load(c.repository);
  if (mode == SimilarityMode::kLatent) {
    const LatentModel model = LatentModel::load(c.model);
    repo.build_index(&model);
  } else {
    repo.build_index(nullptr);
  }
  return repo;
}

int cmd_build_repo(const RunConfig& c) {
  BuildOptions options;
  options.image_dir = c.images;
  const Repository repo = build_math24_repository(options);
  write_case_images(repo, c.repository.parent_path());
  save(repo, c.repository);
  std::cout << "built " << repo.size() << " cases -> " << c.repository.string() << "\n";
  return 0;
}

int cmd_solve(const std::vector<int>& numbers) {
  const Puzzle p = puzzle_from(numbers);
  const auto general = solve_general(p);
  std::cout << "puzzle " << p.text() << ": " << general.size() << " distinct solution(s)\n";
  for (const Expr& e : general) std::cout << "  " << e.to_string() << " = 24\n";
  const auto restricted = solve_restricted(p);
  std::cout << "two-pair decompositions: " << restricted.size() << "\n";
  for (const Solution& s : restricted) {
    std::cout << "  " << s.category.name() << " large at (" << s.large_positions[0] << "," << s.large_positions[1]
              << "): " << s.expression << " = 24\n";
  }
  return 0;
}

int cmd_render(const RunConfig& c, const std::vector<int>& numbers, const std::string& out, std::uint64_t noise_seed) {
  RenderOptions options;
  options.noise_density = c.codec_noise;
  options.noise_seed = noise_seed;
  write_pgm(render(puzzle_from(numbers), options), out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_recognize(const std::string& path) {
  std::cout << recognize(read_pgm(path)) << "\n";
  return 0;
}

int cmd_features(const std::vector<int>& numbers) {
  const Puzzle p = puzzle_from(numbers);
  const FeatureVector f = extract_features(p);
  std::cout << "puzzle " << p.text() << "\n";
  std::cout << "targets        ";
  for (int t : kPairTargets) std::printf("%3d", t);
  std::cout << "\nglobal         ";
  std::fflush(stdout);
  for (int v : f.global_counts) std::printf("%3d", v);
  for (std::size_t pos = 0; pos < f.per_position_counts.size(); ++pos) {
    std::printf("\nposition %zu (%2d) ", pos + 1, p.at(static_cast<int>(pos) + 1));
    for (int v : f.per_position_counts[pos]) std::printf("%3d", v);
  }
  std::printf("\n");
  const LabelVector labels = encode_labels(solve_restricted(p));
  for (const Category& cat : kCategories) {
    std::printf("label %-7s [", cat.name().c_str());
    const auto bits = labels.batch(cat.id);
    for (std::size_t i = 0; i < bits.size(); ++i) std::printf(i ? ",%d" : "%d", bits[i]);
    std::printf("]\n");
  }
  return 0;
}

int cmd_train(const RunConfig& c) {
  Repository repo = load(c.repository);
  std::vector<TrainingExample> data;
  for (const Case& k : repo.cases()) data.push_back({model_input(k.puzzle), encode_labels(k.solutions)});
  TrainReport report;
  const LatentModel model = train(data, c.train, c.seed, &report);
  if (!c.model.parent_path().empty()) std::filesystem::create_directories(c.model.parent_path());
  model.save(c.model);
  repo.build_index(&model);
  save(repo, c.repository);
  std::printf("trained on %zu cases: loss %.6f -> %.6f\n", data.size(), report.initial_loss, report.final_loss);
  std::cout << "model -> " << c.model.string() << "\n";
  return 0;
}

int cmd_retrieve(const RunConfig& c, const std::vector<int>& numbers, int k, SimilarityMode mode, bool include_self) {
  const Puzzle p = puzzle_from(numbers);
  const Repository repo = indexed_repository(c, mode);
  std::optional<LatentModel> model;
  if (mode == SimilarityMode::kLatent) model = LatentModel::load(c.model);
  const IndexEntry query = make_index_entry(p, model ? &*model : nullptr);
  std::set<std::string> exclude;
  if (!include_self) exclude.insert(p.id());
  const RankedResult result = top_k(repo, query, static_cast<std::size_t>(k), mode, exclude);
  for (std::size_t i = 0; i < result.hits.size(); ++i) {
    const Case& hit = *repo.find(result.hits[i].id);
    std::printf("%zu  %s  %.6f  %s\n", i + 1, hit.puzzle.text().c_str(), result.hits[i].score, categories_of(hit).c_str());
  }
  if (result.short_result) std::cout << "(fewer than " << k << " candidates available)\n";
  return 0;
}

int cmd_query(const RunConfig& c, const std::vector<int>& numbers, QueryKind kind, bool with_system) {
  const Puzzle p = puzzle_from(numbers);
  std::optional<Repository> repo;
  const Case* context = nullptr;
  if (kind == QueryKind::kTC) {
    repo = indexed_repository(c, c.context_mode);
    std::optional<LatentModel> model;
    if (c.context_mode == SimilarityMode::kLatent) model = LatentModel::load(c.model);
    const IndexEntry q = make_index_entry(p, model ? &*model : nullptr);
    const RankedResult top = top_k(*repo, q, 1, c.context_mode, {p.id()});
    if (top.hits.empty()) throw Error("repository has no candidate case for the TC context");
    context = repo->find(top.hits.front().id);
  }
  const PromptBundle bundle = build_query(kind, p, context);
  if (with_system) std::cout << bundle.system << "\n\n";
  std::cout << bundle.user << "\n";
  return 0;
}

int cmd_eval_retrieval(const RunConfig& c) {
  const Repository repo = load(c.repository);
  const ExperimentConfig e = experiment_config(c);
  const RetrievalReport report = run_retrieval_experiment(repo, e);
  write_retrieval_report(report, e, c.output);
  std::cout << "labeling similarity  precision  recall      f1    ndcg     mrr   (%, mean over " << c.runs << " runs)\n";
  for (const auto& r : report.aggregate) {
    std::printf("%-8s %-10s    %s  %s  %s  %s  %s\n", std::string(to_string(r.scheme)).c_str(),
                std::string(to_string(r.mode)).c_str(), pct(r.mean.precision).c_str(), pct(r.mean.recall).c_str(),
                pct(r.mean.f1).c_str(), pct(r.mean.ndcg).c_str(), pct(r.mean.mrr).c_str());
  }
  std::cout << "report -> " << (c.output / "retrieval.csv").string() << "\n";
  return 0;
}

int cmd_eval_generation(const RunConfig& c) {
  const Repository repo = load(c.repository);
  const ExperimentConfig e = experiment_config(c);
  const auto provider = make_provider(c);
  const GenerationReport report = run_generation_experiment(repo, e, *provider);
  write_generation_report(report, e, provider->name(), c.output);
  auto opt = [](const std::optional<double>& v) { return v ? pct(*v) : std::string("     -"); };
  std::cout << "query  accuracy  faithfulness  neg.rejection  errored   (" << provider->name() << ")\n";
  for (const auto& r : report.aggregate) {
    std::printf("%-5s    %s        %s         %s  %7zu\n", std::string(to_string(r.kind)).c_str(),
                pct(r.metrics.accuracy).c_str(), opt(r.metrics.faithfulness).c_str(),
                opt(r.metrics.negative_rejection).c_str(), r.metrics.errored_count);
  }
  std::cout << "report -> " << (c.output / "generation.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Math-24 case-based retrieval-augmented generation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides o;
  app.add_option("--config", config_path, "JSON config file with flat dotted keys");
  app.add_option("--repository", o.repository, "repository JSONL path");
  app.add_option("--output", o.output, "report directory");
  app.add_option("--model", o.model, "latent model checkpoint path");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--runs", o.runs, "experiment runs");
  app.add_option("--holdout", o.holdout, "held-out cases per run");
  app.add_option("--ks", o.ks, "cutoffs averaged over");
  app.add_option("--epochs", o.epochs, "training epochs");
  app.add_option("--noise", o.noise, "salt-and-pepper density for render");
  app.add_option("--context-mode", o.context_mode, "similarity used to pick the TC context (features|latent)");

  std::vector<int> numbers;
  auto add_numbers = [&](CLI::App* sub) {
    sub->add_option("numbers", numbers, "four card values")->expected(4)->required()->check(CLI::Range(1, 13));
  };

  auto* build = app.add_subcommand("build-repo", "build the case repository and card images");
  auto* solve = app.add_subcommand("solve", "list solutions of a puzzle");
  add_numbers(solve);

  std::string out_path;
  std::uint64_t noise_seed = 0;
  auto* render_cmd = app.add_subcommand("render", "render a puzzle card to PGM");
  add_numbers(render_cmd);
  render_cmd->add_option("-o,--out", out_path, "output PGM path")->required();
  render_cmd->add_option("--noise-seed", noise_seed, "seed for the noise pattern");

  std::string image_path;
  auto* recognize_cmd = app.add_subcommand("recognize", "read the puzzle off a PGM card");
  recognize_cmd->add_option("path", image_path, "PGM image")->required();

  auto* features = app.add_subcommand("features", "show features and labels of a puzzle");
  add_numbers(features);

  auto* train_cmd = app.add_subcommand("train", "train the latent model on the whole repository");

  int k = 5;
  std::string mode_text = "latent";
  bool include_self = false;
  auto* retrieve = app.add_subcommand("retrieve", "top-k similar cases");
  add_numbers(retrieve);
  retrieve->add_option("--k", k, "number of cases")->check(CLI::PositiveNumber);
  retrieve->add_option("--mode", mode_text, "features|latent")->check(CLI::IsMember({"features", "latent"}));
  retrieve->add_flag("--include-self", include_self, "allow the identical puzzle in the results");

  std::string kind_text = "NC";
  bool with_system = false;
  auto* query = app.add_subcommand("query", "print the prompt for a puzzle");
  add_numbers(query);
  query->add_option("--kind", kind_text, "NC|GC|TC")->check(CLI::IsMember({"NC", "GC", "TC"}, CLI::ignore_case));
  query->add_flag("--system", with_system, "also print the system prompt");

  auto* eval_retrieval = app.add_subcommand("eval-retrieval", "run the retrieval experiment");

  std::optional<int> concurrency;
  auto* eval_generation = app.add_subcommand("eval-generation", "run the generation experiment");
  eval_generation->add_option("--provider", o.provider, "tip-follower|oracle|null|remote");
  eval_generation->add_option("--endpoint", o.endpoint, "chat completions URL (remote)");
  eval_generation->add_option("--provider-model", o.provider_model, "model name (remote)");
  eval_generation->add_option("--api-key-env", o.api_key_env, "environment variable holding the API key");
  eval_generation->add_option("--concurrency", o.concurrency, "in-flight requests per run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    const RunConfig c = resolve(config_path, o);
    if (*build) return cmd_build_repo(c);
    if (*solve) return cmd_solve(numbers);
    if (*render_cmd) return cmd_render(c, numbers, out_path, noise_seed);
    if (*recognize_cmd) return cmd_recognize(image_path);
    if (*features) return cmd_features(numbers);
    if (*train_cmd) return cmd_train(c);
    if (*retrieve) return cmd_retrieve(c, numbers, k, parse_similarity_mode(mode_text), include_self);
    if (*query) return cmd_query(c, numbers, parse_query_kind(kind_text), with_system);
    if (*eval_retrieval) return cmd_eval_retrieval(c);
    if (*eval_generation) return cmd_eval_generation(c);
  } catch (const std::exception& e) {
    std::cerr << "mcbr24: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
