#include "mcbr24/providers.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mcbr24/errors.hpp"

namespace mcbr {

using nlohmann::json;

ParsedPrompt parse_prompt(std::string_view user_text) {
  static const std::regex kPuzzle(R"(Solve the following Math-24 puzzle: ?\n([0-9 ]+)\n)");
  static const std::regex kTip(
      R"(a\) use the pair \((\d+), (\d+)\) to make (\d+)\..*\nb\) then use the remaining pair to make (\d+))");
  const std::string text(user_text);
  std::smatch m;
  if (!std::regex_search(text, m, kPuzzle)) throw Error("prompt does not contain a Math-24 question");
  ParsedPrompt out{Puzzle::parse(m[1].str()), {}};
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kTip); it != std::sregex_iterator(); ++it) {
    const auto& t = *it;
    out.tips.push_back({{std::stoi(t[1].str()), std::stoi(t[2].str())}, std::stoi(t[3].str()), std::stoi(t[4].str())});
  }
  return out;
}

namespace {

// Expression carrying out `tip` on `p`, trying the suggested pair first.
std::optional<std::string> carry_out(const Puzzle& p, const Tip& tip) {
  std::vector<std::array<int, 2>> pairs;
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      const std::array<int, 2> pos{i, j};
      if (p.at(i) == tip.suggested_pair[0] && p.at(j) == tip.suggested_pair[1]) {
        pairs.insert(pairs.begin(), pos);
      } else {
        pairs.push_back(pos);
      }
    }
  }
  for (const auto& [i, j] : pairs) {
    std::array<int, 2> rest{};
    for (int q = 1, n = 0; q <= 4; ++q) {
      if (q != i && q != j) rest[static_cast<std::size_t>(n++)] = p.at(q);
    }
    const auto large = pair_expression(p.at(i), p.at(j), tip.large_target);
    const auto small = pair_expression(rest[0], rest[1], tip.small_target);
    if (large && small) return *large + " * " + *small;
  }
  return std::nullopt;
}

}  // namespace

std::string TipFollowerProvider::complete(const PromptBundle& bundle) const {
  const ParsedPrompt prompt = parse_prompt(bundle.user);
  for (const Tip& tip : prompt.tips) {
    if (const auto expr = carry_out(prompt.puzzle, tip)) {
      return "Following the tip, I make " + std::to_string(tip.large_target) + " and " +
             std::to_string(tip.small_target) + ".\nFinal Answer: " + *expr + " = 24";
    }
  }
  const auto& n = prompt.puzzle.numbers();
  return "I will add the numbers up.\nFinal Answer: " + std::to_string(n[0]) + " + " + std::to_string(n[1]) + " + " +
         std::to_string(n[2]) + " = 24";
}

std::string OracleProvider::complete(const PromptBundle& bundle) const {
  const ParsedPrompt prompt = parse_prompt(bundle.user);
  const auto solutions = solve_general(prompt.puzzle);
  if (solutions.empty()) return "This puzzle has no solution.";
  return "Final Answer: " + solutions.front().to_string() + " = 24";
}

std::string NullProvider::complete(const PromptBundle&) const { return "no solution"; }

std::unique_ptr<Provider> make_mock_provider(std::string_view name) {
  if (name == "tip-follower") return std::make_unique<TipFollowerProvider>();
  if (name == "oracle") return std::make_unique<OracleProvider>();
  if (name == "null") return std::make_unique<NullProvider>();
  throw ConfigError("unknown provider '" + std::string(name) + "' (expected tip-follower, oracle, null or remote)");
}

// ---------------------------------------------------------------------------
// Remote chat completions

namespace {

std::mutex& transcript_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RemoteProvider::RemoteProvider(RemoteProviderConfig config) : config_(std::move(config)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, kUrl)) {
    throw ConfigError("provider endpoint must be an http(s) URL, got '" + config_.endpoint + "'");
  }
  base_url_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/v1/chat/completions";
  if (config_.model.empty()) throw ConfigError("remote provider needs a model name");
}

std::string RemoteProvider::request_body(const PromptBundle& bundle) const {
  const json body = {{"model", config_.model},
                     {"messages",
                      json::array({{{"role", "system"}, {"content", bundle.system}},
                                   {{"role", "user"}, {"content", bundle.user}}})},
                     {"temperature", 0},
                     {"n", 1}};
  return body.dump();
}

std::string RemoteProvider::complete(const PromptBundle& bundle) const {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (!key || !*key) throw ProviderUnavailable("environment variable " + config_.api_key_env + " is not set");

  const std::string body = request_body(bundle);
  httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};
  std::string last_error;
  auto backoff = config_.initial_backoff;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(base_url_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    const auto res = client.Post(path_, headers, body, "application/json");

    json log = {{"puzzle", bundle.puzzle.text()}, {"kind", std::string(to_string(bundle.kind))}, {"attempt", attempt},
                {"request", json::parse(body)}};
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      log["error"] = last_error;
    } else {
      log["status"] = res->status;
      log["response"] = res->body;
      if (res->status != 200) last_error = "HTTP " + std::to_string(res->status);
    }
    if (config_.transcript_dir) {
      std::lock_guard lock(transcript_mutex());
      std::filesystem::create_directories(*config_.transcript_dir);
      std::ofstream(*config_.transcript_dir / "http_log.jsonl", std::ios::app) << log.dump() << '\n';
    }
    if (!res || res->status != 200) continue;

    try {
      const json reply = json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      last_error = std::string("unexpected response body: ") + e.what();
    }
  }
  throw ProviderUnavailable("chat completion failed after " + std::to_string(config_.retries + 1) +
                            " attempts: " + last_error);
}

GenerationOutcome generate(const Provider& provider, const PromptBundle& bundle) {
  GenerationOutcome out;
  out.raw_response = provider.complete(bundle);
  out.parsed_answer = parse_final_answer(out.raw_response);
  out.verdict = out.parsed_answer ? validate_answer(bundle.puzzle, *out.parsed_answer) : Verdict::kMalformed;
  return out;
}

}  // namespace mcbr
