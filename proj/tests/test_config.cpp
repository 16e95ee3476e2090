#include <doctest.h>

#include <fstream>

#include "mcbr24/config.hpp"
#include "mcbr24/errors.hpp"

using namespace mcbr;
using nlohmann::json;

TEST_SUITE("config") {
  TEST_CASE("defaults follow the evaluation protocol") {
    const RunConfig c;
    CHECK(c.runs == 10);
    CHECK(c.holdout == 30);
    CHECK(c.ks == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(c.context_mode == SimilarityMode::kLatent);
    CHECK(c.concurrency == 4);
    CHECK_NOTHROW(validate(c));
  }

  TEST_CASE("flat dotted keys") {
    RunConfig c;
    apply_config_json(c, json::parse(R"({
      "paths.repository": "x/repo.jsonl",
      "experiment.runs": 3,
      "experiment.ks": [1, 3],
      "experiment.seed": 7,
      "train.epochs": 10,
      "retrieval.mode": "features",
      "generation.kinds": ["nc", "TC"],
      "generation.context_mode": "features",
      "provider.name": "remote",
      "provider.endpoint": "http://localhost:8000/v1/chat/completions",
      "provider.model": "m",
      "provider.api_key_env": "MY_KEY",
      "codec.noise": 0.02
    })"));
    CHECK(c.repository == "x/repo.jsonl");
    CHECK(c.runs == 3);
    CHECK(c.ks == std::vector<int>{1, 3});
    CHECK(c.seed == 7);
    CHECK(c.train.epochs == 10);
    CHECK(c.retrieval_mode == SimilarityMode::kFeatures);
    CHECK(c.kinds == std::vector<QueryKind>{QueryKind::kNC, QueryKind::kTC});
    CHECK(c.api_key_env == "MY_KEY");
    CHECK(c.codec_noise == 0.02);
    CHECK(remote_provider_config(c).api_key_env == "MY_KEY");
    const ExperimentConfig e = experiment_config(c);
    CHECK(e.runs == 3);
    CHECK(e.seed == 7);
    CHECK(e.context_mode == SimilarityMode::kFeatures);
  }

  TEST_CASE("bad configs") {
    RunConfig c;
    CHECK_THROWS_AS(apply_config_json(c, json::parse(R"({"experiment.rnus": 3})")), ConfigError);
    CHECK_THROWS_AS(apply_config_json(c, json::parse(R"({"experiment.runs": "three"})")), ConfigError);
    CHECK_THROWS_AS(apply_config_json(c, json::parse(R"({"retrieval.mode": "bm25"})")), ConfigError);
    CHECK_THROWS_AS(apply_config_json(c, json::parse(R"({"provider.api_key": "sk-123"})")), ConfigError);
    CHECK_THROWS_AS(apply_config_json(c, json::parse(R"([1, 2])")), ConfigError);

    RunConfig w;
    w.retrieval_weights = {0.5, 0.5};
    CHECK_THROWS_AS(validate(w), ConfigError);
    w.retrieval_weights = {0.9};
    CHECK_THROWS_AS(validate(w), ConfigError);
    RunConfig k;
    k.ks = {0};
    CHECK_THROWS_AS(validate(k), ConfigError);
  }

  TEST_CASE("config files") {
    const auto dir = std::filesystem::temp_directory_path() / "mcbr24_config_tests";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "ok.json") << R"({"experiment.holdout": 12})";
    CHECK(load_config(dir / "ok.json").holdout == 12);
    std::ofstream(dir / "bad.json") << "{";
    CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "absent.json"), ConfigError);
  }

  TEST_CASE("provider selection") {
    RunConfig c;
    CHECK(make_provider(c)->name() == "tip-follower");
    c.provider = "remote";
    c.endpoint = "http://localhost:9/v1/chat/completions";
    c.provider_model = "m";
    CHECK(make_provider(c)->name() == "remote:m");
    c.provider = "nope";
    CHECK_THROWS_AS(make_provider(c), ConfigError);
  }
}
