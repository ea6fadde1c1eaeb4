#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace trajevo::llm {

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

// A named prompt text with `{placeholder}` slots.  Placeholder names match
// [A-Za-z0-9_-]+ between braces; anything else is literal text.
struct PromptTemplate {
  std::string name;
  std::string body;

  // Distinct placeholder names in order of first appearance.
  std::vector<std::string> placeholders() const;
};

using PlaceholderMap = std::map<std::string, std::string, std::less<>>;

// Substitutes every `{name}` in the template body with values.at(name).
// Substitution is single-pass: placeholder-like text inside substituted
// values is preserved literally, never expanded again.
// Throws Error(Errc::missing_placeholder) when a placeholder has no value.
std::string render(const PromptTemplate& tpl, const PlaceholderMap& values);

// The bundled prompt texts, loaded from the asset directory.
class PromptLibrary {
 public:
  // Template names understood by get().
  static const std::vector<std::string>& template_names();

  // Loads every template plus the supporting texts from the asset directory.
  static PromptLibrary load();

  // Looks up one of the eight chat templates by name.
  // Throws Error(Errc::config) for unknown names.
  const PromptTemplate& get(std::string_view name) const;

  // Fixed name of the heuristic entry point requested from the model.
  const std::string& function_name() const { return function_name_; }

  // One-line description of the prediction problem (fills {problem_description}).
  const std::string& problem_description() const { return problem_description_; }

  // Multi-line description of the required function contract (fills
  // {function_description}).
  const std::string& function_description() const { return function_description_; }

  // Background notes on the prediction domain, available for prompt packs
  // that want extra context.
  const std::string& external_knowledge() const { return external_knowledge_; }

  // Trivial constant-velocity heuristic used to seed the population.
  const std::string& seed_source() const { return seed_source_; }

  // "def predict_trajectory{version}(...)" with {version} filled in
  // (e.g. "_v0", "_v1", "_v2", or "" for the bare name).
  std::string signature(std::string_view version) const;

  // The task-description template rendered with the standard function name,
  // problem description, and function description.
  std::string task_description() const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
  std::string function_name_ = "predict_trajectory";
  std::string problem_description_;
  std::string function_description_;
  std::string function_signature_;
  std::string external_knowledge_;
  std::string seed_source_;
};

// Reflection texts longer than these budgets are cut at the word limit
// before they are stored or re-used in later prompts.
inline constexpr std::size_t kShortReflectionMaxWords = 200;
inline constexpr std::size_t kLongReflectionMaxWords = 20;

// Placeholder text used when a reflection request failed and crossover
// proceeds without one.
inline constexpr const char* kNoReflectionText = "(no reflection available)";

// ---------------------------------------------------------------------------
// Chat completion
// ---------------------------------------------------------------------------

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string text;
};

struct ChatRequest {
  std::string model;
  double temperature = 1.0;
  std::vector<ChatMessage> messages;
  // Free-form caller label (e.g. "init:3").  Never sent to a live endpoint;
  // deterministic offline providers fold it into their reply seed so repeated
  // identical prompts can still draw distinct variants.
  std::string tag;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t total_tokens = 0;
};

struct ChatResponse {
  std::string text;
  TokenUsage usage;
  double latency_s = 0.0;
};

// A chat-completion backend.  Implementations are safe to share across
// threads; each complete() call is independent.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Returns the contents of the first fenced code block (``` ... ```); an
// optional language tag after the opening fence is skipped.  Throws
// Error(Errc::no_code_block) when the text contains no closed fence pair.
std::string extract_code(const std::string& response_text);

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

// Replies with a fixed list of texts in request order; the (n+1)-th call
// after an n-entry script throws Error(Errc::script_exhausted).
class ScriptProvider : public ChatProvider {
 public:
  explicit ScriptProvider(std::vector<std::string> script);
  ChatResponse complete(const ChatRequest& request) override;

  std::size_t calls() const;

 private:
  std::vector<std::string> script_;
  mutable std::mutex mutex_;
  std::size_t next_ = 0;
};

// Deterministic offline stand-in for a live model.  Classifies each request
// from its prompt text (init / crossover / mutation / reflection) and
// produces a plausible reply: runnable heuristic variants for code requests
// (numeric constants drawn from a generator seeded by the request content and
// the base seed, so identical request sequences yield identical replies) and
// short hint texts for reflection requests.  Mutation replies perturb only
// numeric literals of the code quoted in the request.
class MutatorProvider : public ChatProvider {
 public:
  explicit MutatorProvider(std::uint64_t seed);
  ChatResponse complete(const ChatRequest& request) override;

  // The literal-perturbation pass applied to mutation requests (exposed for
  // direct testing): scales floating-point literals by U[0.5, 1.5]; when the
  // code has none, rescales an integer multiplier (`* 1` style) instead.
  static std::string perturb_numeric_literals(const std::string& code,
                                              std::uint64_t seed);

 private:
  std::uint64_t base_seed_;
};

// OpenAI-style chat-completions endpoint over HTTP(S).
struct HttpProviderConfig {
  std::string base_url;                     // e.g. "https://api.openai.com"
  std::string path = "/v1/chat/completions";
  std::string api_key;                      // empty -> no Authorization header
  int max_attempts = 3;                     // on 429 / 5xx / transport errors
  double backoff_initial_s = 1.0;           // doubles per retry
  double timeout_s = 120.0;                 // per request
};

// Reads TRAJEVO_API_KEY then OPENAI_API_KEY; empty string when unset.
std::string api_key_from_env();

class HttpProvider : public ChatProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);

  // Throws Error with code auth (401/403), rate_limited (429 after all
  // attempts), transport (connect failure / 5xx after all attempts),
  // or empty_response (2xx with no usable text).
  ChatResponse complete(const ChatRequest& request) override;

  const HttpProviderConfig& config() const { return config_; }

 private:
  HttpProviderConfig config_;
};

}  // namespace trajevo::llm
