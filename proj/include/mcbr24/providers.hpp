#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "mcbr24/math24.hpp"
#include "mcbr24/query.hpp"

namespace mcbr {

// Something that answers a prompt bundle with free text, like an LLM.
// Implementations must be safe to call from several threads at once.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string name() const = 0;
  // Throws ProviderUnavailable when no answer could be obtained.
  virtual std::string complete(const PromptBundle& bundle) const = 0;
};

// Reads the puzzle and tips back out of the prompt text. Applies the first
// tip that can be carried out; otherwise answers with an expression that
// leaves out one number, so it is always wrong.
class TipFollowerProvider final : public Provider {
 public:
  std::string name() const override { return "tip-follower"; }
  std::string complete(const PromptBundle& bundle) const override;
};

// Answers with a brute-force solution.
class OracleProvider final : public Provider {
 public:
  std::string name() const override { return "oracle"; }
  std::string complete(const PromptBundle& bundle) const override;
};

// Never follows the answer convention.
class NullProvider final : public Provider {
 public:
  std::string name() const override { return "null"; }
  std::string complete(const PromptBundle& bundle) const override;
};

struct RemoteProviderConfig {
  // Full chat-completions URL, e.g. https://api.openai.com/v1/chat/completions
  std::string endpoint;
  std::string model;
  // Name of the environment variable holding the API key (never the key).
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::seconds timeout{60};
  int retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  // Request/response transcripts are written here when set.
  std::optional<std::filesystem::path> transcript_dir;
};

// OpenAI-compatible chat completions over HTTP(S): system + user message,
// temperature 0, one completion. Failed attempts are retried with
// exponential backoff.
class RemoteProvider final : public Provider {
 public:
  explicit RemoteProvider(RemoteProviderConfig config);
  std::string name() const override { return "remote:" + config_.model; }
  std::string complete(const PromptBundle& bundle) const override;

  // Request body sent for `bundle`.
  std::string request_body(const PromptBundle& bundle) const;

 private:
  RemoteProviderConfig config_;
  std::string base_url_;  // scheme://host[:port]
  std::string path_;
};

// Answer text recovered from a TC/GC/NC prompt by the mock providers.
struct ParsedPrompt {
  Puzzle puzzle;
  std::vector<Tip> tips;
};
ParsedPrompt parse_prompt(std::string_view user_text);

struct GenerationOutcome {
  std::string raw_response;
  std::optional<std::string> parsed_answer;
  Verdict verdict;
};

// Asks the provider, extracts the final answer and scores it against the
// bundle's puzzle. A missing answer scores Malformed.
GenerationOutcome generate(const Provider& provider, const PromptBundle& bundle);

std::unique_ptr<Provider> make_mock_provider(std::string_view name);  // tip-follower | oracle | null

}  // namespace mcbr
