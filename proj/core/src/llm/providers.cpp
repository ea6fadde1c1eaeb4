#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include <json.hpp>

#include "trajevo/error.hpp"
#include "trajevo/llm/gateway.hpp"
#include "trajevo/rng.hpp"
#include "trajevo/util/text.hpp"

namespace trajevo::llm {
namespace {

std::string concat_messages(const ChatRequest& request) {
  std::string all;
  for (const auto& message : request.messages) {
    all += message.role;
    all += '\n';
    all += message.text;
    all += '\n';
  }
  if (!request.tag.empty()) {
    all += "@tag:";
    all += request.tag;
    all += '\n';
  }
  return all;
}

TokenUsage estimate_usage(const ChatRequest& request, const std::string& reply) {
  TokenUsage usage;
  for (const auto& message : request.messages) {
    usage.prompt_tokens += static_cast<std::int64_t>(count_words(message.text));
  }
  usage.completion_tokens = static_cast<std::int64_t>(count_words(reply));
  usage.total_tokens = usage.prompt_tokens + usage.completion_tokens;
  return usage;
}

// Formats a value so Python reads it back as a float (never a bare int).
std::string fmt_float_literal(double value) {
  std::string text = fmt_g9(value);
  if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
      text.find("inf") == std::string::npos && text.find("nan") == std::string::npos) {
    text += ".0";
  }
  return text;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// A runnable heuristic in the shape the prompts request: sample 0 repeats the
// plain constant-velocity rollout, the rest add angular and positional noise.
std::string make_template_candidate(Rng& rng) {
  const std::string angle_scale = fmt_float_literal(rng.uniform(0.08, 0.6));
  const std::string noise_scale = fmt_float_literal(rng.uniform(0.004, 0.05));
  std::string code;
  code += "import numpy as np\n";
  code += "\n";
  code += "def predict_trajectory_v2(trajectory):\n";
  code += "    \"\"\"Generate 20 possible future trajectories.\"\"\"\n";
  code += "    num_agents = trajectory.shape[0]\n";
  code += "    angle_scale = " + angle_scale + "\n";
  code += "    noise_scale = " + noise_scale + "\n";
  code += "    damping = 1.0\n";
  code += "    samples = []\n";
  code += "    for k in range(20):\n";
  code += "        current = trajectory[:, -1, :]\n";
  code += "        velocity = (trajectory[:, -1, :] - trajectory[:, -2, :]) * damping\n";
  code += "        if k > 0:\n";
  code += "            angle = np.random.uniform(-angle_scale, angle_scale)\n";
  code += "            c = np.cos(angle)\n";
  code += "            s = np.sin(angle)\n";
  code += "            velocity = velocity @ np.array([[c, -s], [s, c]])\n";
  code += "        steps = []\n";
  code += "        for _ in range(12):\n";
  code += "            current = current + velocity\n";
  code += "            if k > 0:\n";
  code += "                current = current + np.random.normal(0.0, noise_scale, "
          "size=(num_agents, 2))\n";
  code += "            steps.append(current.copy())\n";
  code += "        samples.append(np.stack(steps, axis=1))\n";
  code += "    return np.stack(samples, axis=0)\n";
  return code;
}

std::string wrap_code_reply(const std::string& code) {
  return "Here is an improved heuristic.\n\n```python\n" + code + "\n```\n";
}

// Pulls the quoted base code out of a rendered mutation request: the block
// between "[Code]" and "[Code Results Analysis]", minus the signature line
// printed above the function.
std::string extract_mutation_base(const std::string& prompt) {
  const std::string open_marker = "[Code]\n";
  const std::string close_marker = "\n\n[Code Results Analysis]";
  const std::size_t open = prompt.find(open_marker);
  if (open == std::string::npos) return {};
  const std::size_t begin = open + open_marker.size();
  const std::size_t close = prompt.find(close_marker, begin);
  if (close == std::string::npos) return {};
  std::string block = prompt.substr(begin, close - begin);
  const std::size_t first_newline = block.find('\n');
  if (first_newline != std::string::npos &&
      block.compare(0, 4, "def ") == 0 &&
      block.find("def ", first_newline) != std::string::npos) {
    block.erase(0, first_newline + 1);  // drop the decorative signature line
  }
  return block;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScriptProvider
// ---------------------------------------------------------------------------

ScriptProvider::ScriptProvider(std::vector<std::string> script)
    : script_(std::move(script)) {}

ChatResponse ScriptProvider::complete(const ChatRequest& request) {
  const double start = monotonic_seconds();
  std::string reply;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (next_ >= script_.size()) {
      throw Error(Errc::script_exhausted,
                  "scripted provider has no reply for request " +
                      std::to_string(next_ + 1) + " (script has " +
                      std::to_string(script_.size()) + " entries)");
    }
    reply = script_[next_++];
  }
  ChatResponse response;
  response.text = reply;
  response.usage = estimate_usage(request, reply);
  response.latency_s = monotonic_seconds() - start;
  return response;
}

std::size_t ScriptProvider::calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return next_;
}

// ---------------------------------------------------------------------------
// MutatorProvider
// ---------------------------------------------------------------------------

MutatorProvider::MutatorProvider(std::uint64_t seed) : base_seed_(seed) {}

std::string MutatorProvider::perturb_numeric_literals(const std::string& code,
                                                      std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = code.size();

  // First pass: rescale every decimal literal with a fractional part.
  std::string out;
  out.reserve(n + 32);
  bool changed = false;
  std::size_t i = 0;
  while (i < n) {
    const char c = code[i];
    const char prev = (i == 0) ? '\0' : code[i - 1];
    if (std::isdigit(static_cast<unsigned char>(c)) && !ident_char(prev) && prev != '.') {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(code[j]))) ++j;
      if (j < n && code[j] == '.' && j + 1 < n &&
          std::isdigit(static_cast<unsigned char>(code[j + 1]))) {
        std::size_t k = j + 1;
        while (k < n && std::isdigit(static_cast<unsigned char>(code[k]))) ++k;
        const double value = std::strtod(code.substr(i, k - i).c_str(), nullptr);
        out += fmt_float_literal(value * rng.uniform(0.5, 1.5));
        changed = true;
        i = k;
        continue;
      }
    }
    out += c;
    ++i;
  }
  if (changed) return out;

  // Fallback for code with no fractional literals: rescale an integer used
  // as a multiplier (`x * 1` style), which keeps shapes and loops intact.
  out.clear();
  i = 0;
  while (i < n) {
    const char c = code[i];
    if (c == '*' && (i + 1 >= n || code[i + 1] != '*') && (i == 0 || code[i - 1] != '*')) {
      std::size_t j = i + 1;
      while (j < n && (code[j] == ' ' || code[j] == '\t')) ++j;
      if (j < n && std::isdigit(static_cast<unsigned char>(code[j]))) {
        std::size_t k = j;
        while (k < n && std::isdigit(static_cast<unsigned char>(code[k]))) ++k;
        if (k >= n || (!ident_char(code[k]) && code[k] != '.')) {
          const double value = std::strtod(code.substr(j, k - j).c_str(), nullptr);
          out.append(code, i, j - i);
          out += fmt_float_literal(value * rng.uniform(0.5, 1.5));
          i = k;
          continue;
        }
      }
    }
    out += c;
    ++i;
  }
  return out;
}

ChatResponse MutatorProvider::complete(const ChatRequest& request) {
  const double start = monotonic_seconds();
  const std::string prompt = concat_messages(request);
  const std::uint64_t content_seed =
      base_seed_ ^ std::stoull(sha256_hex(prompt).substr(0, 16), nullptr, 16);
  Rng rng(content_seed);

  std::string reply;
  if (prompt.find("[Code Results Analysis]") != std::string::npos) {
    const std::string base = extract_mutation_base(prompt);
    std::string mutated =
        base.empty() ? std::string() : perturb_numeric_literals(base, rng.next());
    if (mutated.empty() || mutated == base) {
      mutated = make_template_candidate(rng);
    }
    reply = wrap_code_reply(mutated);
  } else if (prompt.find("maximum of 200 words") != std::string::npos) {
    reply =
        "Keep one unperturbed constant-velocity sample so the best of the twenty "
        "never falls behind the trivial rollout, and spend the remaining samples on "
        "diversity: rotate the last velocity by small random angles and add per-step "
        "positional noise that grows with observed speed. A rotation scale near " +
        fmt_float_literal(rng.uniform(0.1, 0.5)) +
        " radians looked effective in the better version.";
  } else if (prompt.find("less than 20 words") != std::string::npos) {
    reply =
        "Keep one pure constant-velocity sample; diversify others with small "
        "angular and positional noise.";
  } else {
    // Initialization, crossover, and any other code-producing request.
    reply = wrap_code_reply(make_template_candidate(rng));
  }

  ChatResponse response;
  response.text = reply;
  response.usage = estimate_usage(request, reply);
  response.latency_s = monotonic_seconds() - start;
  return response;
}

// ---------------------------------------------------------------------------
// HttpProvider
// ---------------------------------------------------------------------------

std::string api_key_from_env() {
  if (const char* key = std::getenv("TRAJEVO_API_KEY"); key != nullptr && *key != '\0') {
    return key;
  }
  if (const char* key = std::getenv("OPENAI_API_KEY"); key != nullptr && *key != '\0') {
    return key;
  }
  return {};
}

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) {
    throw Error(Errc::config, "http provider requires a base_url");
  }
  if (config_.max_attempts < 1) {
    throw Error(Errc::config, "http provider max_attempts must be >= 1");
  }
}

ChatResponse HttpProvider::complete(const ChatRequest& request) {
  using nlohmann::json;

  json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["messages"] = json::array();
  for (const auto& message : request.messages) {
    body["messages"].push_back({{"role", message.role}, {"content", message.text}});
  }
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  const double start = monotonic_seconds();
  std::string last_detail;
  bool last_was_rate_limit = false;

  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    httplib::Client client(config_.base_url);
    const auto seconds = static_cast<time_t>(config_.timeout_s);
    const auto microseconds =
        static_cast<time_t>((config_.timeout_s - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, microseconds);
    client.set_read_timeout(seconds, microseconds);
    client.set_write_timeout(seconds, microseconds);

    auto result = client.Post(config_.path, headers, payload, "application/json");
    if (!result) {
      last_detail = "no response: " + httplib::to_string(result.error());
      last_was_rate_limit = false;
    } else {
      const int status = result->status;
      if (status == 401 || status == 403) {
        throw Error(Errc::auth,
                    "endpoint rejected credentials (HTTP " + std::to_string(status) + ")");
      }
      if (status == 429) {
        last_detail = "HTTP 429";
        last_was_rate_limit = true;
      } else if (status >= 500) {
        last_detail = "HTTP " + std::to_string(status);
        last_was_rate_limit = false;
      } else if (status >= 200 && status < 300) {
        json parsed = json::parse(result->body, nullptr, false);
        std::string content;
        ChatResponse response;
        if (parsed.is_object()) {
          if (auto choices = parsed.find("choices");
              choices != parsed.end() && choices->is_array() && !choices->empty()) {
            const auto& first = (*choices)[0];
            if (first.contains("message") && first["message"].contains("content") &&
                first["message"]["content"].is_string()) {
              content = first["message"]["content"].get<std::string>();
            } else if (first.contains("text") && first["text"].is_string()) {
              content = first["text"].get<std::string>();
            }
          }
          if (auto usage = parsed.find("usage"); usage != parsed.end() && usage->is_object()) {
            response.usage.prompt_tokens = usage->value("prompt_tokens", std::int64_t{0});
            response.usage.completion_tokens =
                usage->value("completion_tokens", std::int64_t{0});
            response.usage.total_tokens = usage->value("total_tokens", std::int64_t{0});
          }
        }
        if (content.empty()) {
          throw Error(Errc::empty_response,
                      "endpoint returned HTTP " + std::to_string(status) +
                          " with no completion text");
        }
        response.text = std::move(content);
        response.latency_s = monotonic_seconds() - start;
        return response;
      } else {
        throw Error(Errc::transport,
                    "endpoint returned HTTP " + std::to_string(status) + ": " +
                        result->body.substr(0, 256));
      }
    }

    if (attempt < config_.max_attempts && config_.backoff_initial_s > 0.0) {
      const double delay = config_.backoff_initial_s * static_cast<double>(1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
  }

  if (last_was_rate_limit) {
    throw Error(Errc::rate_limited,
                "rate limited after " + std::to_string(config_.max_attempts) + " attempts");
  }
  throw Error(Errc::transport, "request failed after " +
                                   std::to_string(config_.max_attempts) +
                                   " attempts: " + last_detail);
}

}  // namespace trajevo::llm
