#include "mcbr24/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "mcbr24/errors.hpp"

namespace mcbr {

using nlohmann::json;

namespace {

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

template <typename T, typename Parse>
std::vector<T> parse_list(const json& v, const std::string& key, Parse parse) {
  std::vector<T> out;
  for (const auto& s : get_as<std::vector<std::string>>(v, key)) {
    try {
      out.push_back(parse(s));
    } catch (const std::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return out;
}

SimilarityMode parse_mode(const json& v, const std::string& key) {
  try {
    return parse_similarity_mode(get_as<std::string>(v, key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"paths.repository", [](RunConfig& c, const json& v, const std::string& k) { c.repository = get_as<std::string>(v, k); }},
      {"paths.images", [](RunConfig& c, const json& v, const std::string& k) { c.images = get_as<std::string>(v, k); }},
      {"paths.output", [](RunConfig& c, const json& v, const std::string& k) { c.output = get_as<std::string>(v, k); }},
      {"paths.model", [](RunConfig& c, const json& v, const std::string& k) { c.model = get_as<std::string>(v, k); }},
      {"experiment.runs", [](RunConfig& c, const json& v, const std::string& k) { c.runs = get_as<int>(v, k); }},
      {"experiment.holdout", [](RunConfig& c, const json& v, const std::string& k) { c.holdout = get_as<int>(v, k); }},
      {"experiment.ks", [](RunConfig& c, const json& v, const std::string& k) { c.ks = get_as<std::vector<int>>(v, k); }},
      {"experiment.seed", [](RunConfig& c, const json& v, const std::string& k) { c.seed = get_as<std::uint64_t>(v, k); }},
      {"train.learning_rate",
       [](RunConfig& c, const json& v, const std::string& k) { c.train.learning_rate = get_as<double>(v, k); }},
      {"train.momentum", [](RunConfig& c, const json& v, const std::string& k) { c.train.momentum = get_as<double>(v, k); }},
      {"train.epochs", [](RunConfig& c, const json& v, const std::string& k) { c.train.epochs = get_as<int>(v, k); }},
      {"retrieval.mode", [](RunConfig& c, const json& v, const std::string& k) { c.retrieval_mode = parse_mode(v, k); }},
      {"retrieval.weights",
       [](RunConfig& c, const json& v, const std::string& k) { c.retrieval_weights = get_as<std::vector<double>>(v, k); }},
      {"retrieval.k", [](RunConfig& c, const json& v, const std::string& k) { c.k = get_as<int>(v, k); }},
      {"generation.kinds",
       [](RunConfig& c, const json& v, const std::string& k) { c.kinds = parse_list<QueryKind>(v, k, parse_query_kind); }},
      {"generation.context_mode",
       [](RunConfig& c, const json& v, const std::string& k) { c.context_mode = parse_mode(v, k); }},
      {"provider.name", [](RunConfig& c, const json& v, const std::string& k) { c.provider = get_as<std::string>(v, k); }},
      {"provider.endpoint", [](RunConfig& c, const json& v, const std::string& k) { c.endpoint = get_as<std::string>(v, k); }},
      {"provider.model",
       [](RunConfig& c, const json& v, const std::string& k) { c.provider_model = get_as<std::string>(v, k); }},
      {"provider.api_key_env",
       [](RunConfig& c, const json& v, const std::string& k) { c.api_key_env = get_as<std::string>(v, k); }},
      {"provider.concurrency", [](RunConfig& c, const json& v, const std::string& k) { c.concurrency = get_as<int>(v, k); }},
      {"provider.timeout_s", [](RunConfig& c, const json& v, const std::string& k) { c.timeout_s = get_as<int>(v, k); }},
      {"provider.retries", [](RunConfig& c, const json& v, const std::string& k) { c.retries = get_as<int>(v, k); }},
      {"codec.noise", [](RunConfig& c, const json& v, const std::string& k) { c.codec_noise = get_as<double>(v, k); }},
  };
  return table;
}

}  // namespace

void apply_config_json(RunConfig& config, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "provider.api_key") throw ConfigError("API keys do not belong in the config; set provider.api_key_env");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, value, key);
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  RunConfig config;
  apply_config_json(config, doc);
  return config;
}

void validate(const RunConfig& c) {
  if (c.runs < 1) throw ConfigError("experiment.runs must be at least 1");
  if (c.holdout < 1) throw ConfigError("experiment.holdout must be at least 1");
  if (c.ks.empty()) throw ConfigError("experiment.ks must not be empty");
  for (int k : c.ks) {
    if (k < 1) throw ConfigError("experiment.ks entries must be positive");
  }
  if (c.k < 1) throw ConfigError("retrieval.k must be positive");
  if (c.train.epochs < 0) throw ConfigError("train.epochs must not be negative");
  if (!(c.train.learning_rate > 0.0)) throw ConfigError("train.learning_rate must be positive");
  if (c.train.momentum < 0.0 || c.train.momentum >= 1.0) throw ConfigError("train.momentum must lie in [0, 1)");
  if (c.retrieval_weights.size() != 1) {
    throw ConfigError("retrieval.weights needs one weight per problem component (1 for Math-24)");
  }
  try {
    ComponentWeights{c.retrieval_weights};
  } catch (const WeightSumViolation& e) {
    throw ConfigError(std::string("retrieval.weights: ") + e.what());
  }
  if (c.kinds.empty()) throw ConfigError("generation.kinds must not be empty");
  if (c.concurrency < 1) throw ConfigError("provider.concurrency must be at least 1");
  if (c.timeout_s < 1) throw ConfigError("provider.timeout_s must be at least 1");
  if (c.retries < 0) throw ConfigError("provider.retries must not be negative");
  if (c.codec_noise < 0.0 || c.codec_noise > 1.0) throw ConfigError("codec.noise must lie in [0, 1]");
}

ExperimentConfig experiment_config(const RunConfig& c) {
  ExperimentConfig e;
  e.runs = c.runs;
  e.holdout = c.holdout;
  e.ks = c.ks;
  e.seed = c.seed;
  e.train = c.train;
  e.kinds = c.kinds;
  e.context_mode = c.context_mode;
  e.concurrency = c.concurrency;
  return e;
}

RemoteProviderConfig remote_provider_config(const RunConfig& c) {
  RemoteProviderConfig r;
  r.endpoint = c.endpoint;
  r.model = c.provider_model;
  r.api_key_env = c.api_key_env;
  r.timeout = std::chrono::seconds(c.timeout_s);
  r.retries = c.retries;
  r.transcript_dir = c.output / "transcripts";
  return r;
}

std::unique_ptr<Provider> make_provider(const RunConfig& c) {
  if (c.provider == "remote") return std::make_unique<RemoteProvider>(remote_provider_config(c));
  return make_mock_provider(c.provider);
}

}  // namespace mcbr
