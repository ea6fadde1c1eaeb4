#include "trajevo/llm/gateway.hpp"

#include <algorithm>

#include "trajevo/assets.hpp"
#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace trajevo::llm {
namespace {

bool is_placeholder_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-';
}

// Calls fn(name, begin, end) for every `{name}` span in the body, where
// [begin, end) covers the braces too.
template <typename Fn>
void for_each_placeholder(const std::string& body, Fn&& fn) {
  std::size_t i = 0;
  while (i < body.size()) {
    if (body[i] != '{') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < body.size() && is_placeholder_char(body[j])) ++j;
    if (j > i + 1 && j < body.size() && body[j] == '}') {
      fn(body.substr(i + 1, j - i - 1), i, j + 1);
      i = j + 1;
    } else {
      ++i;
    }
  }
}

std::string chomp(std::string text) {
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

}  // namespace

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> names;
  for_each_placeholder(body, [&](const std::string& name, std::size_t, std::size_t) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(name);
    }
  });
  return names;
}

std::string render(const PromptTemplate& tpl, const PlaceholderMap& values) {
  std::string out;
  out.reserve(tpl.body.size() + 256);
  std::size_t copied = 0;
  for_each_placeholder(tpl.body,
                       [&](const std::string& name, std::size_t begin, std::size_t end) {
                         out.append(tpl.body, copied, begin - copied);
                         auto it = values.find(name);
                         if (it == values.end()) {
                           throw Error(Errc::missing_placeholder,
                                       "no value for placeholder {" + name +
                                           "} in template " + tpl.name);
                         }
                         out += it->second;
                         copied = end;
                       });
  out.append(tpl.body, copied, tpl.body.size() - copied);
  return out;
}

const std::vector<std::string>& PromptLibrary::template_names() {
  static const std::vector<std::string> names = {
      "system_generator", "system_reflector",  "task_description",
      "init_population",  "crossover",         "short_reflection",
      "long_reflection",  "elitist_mutation",
  };
  return names;
}

PromptLibrary PromptLibrary::load() {
  PromptLibrary lib;
  for (const std::string& name : template_names()) {
    lib.templates_.emplace(
        name, PromptTemplate{name, chomp(load_asset("prompts/" + name + ".txt"))});
  }
  lib.problem_description_ = chomp(load_asset("prompts/problem_description.txt"));
  lib.function_description_ = chomp(load_asset("prompts/function_description.txt"));
  lib.function_signature_ = chomp(load_asset("prompts/function_signature.txt"));
  lib.external_knowledge_ = chomp(load_asset("prompts/external_knowledge.txt"));
  lib.seed_source_ = chomp(load_asset("seed/seed_function.py"));
  return lib;
}

const PromptTemplate& PromptLibrary::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(Errc::config, "unknown prompt template: " + std::string(name));
  }
  return it->second;
}

std::string PromptLibrary::signature(std::string_view version) const {
  PromptTemplate tpl{"function_signature", function_signature_};
  return render(tpl, {{"version", std::string(version)}});
}

std::string PromptLibrary::task_description() const {
  return render(get("task_description"),
                {{"function_name", function_name_},
                 {"problem_description", problem_description_},
                 {"function_description", function_description_}});
}

std::string extract_code(const std::string& response_text) {
  static const std::string fence = "```";
  const std::size_t open = response_text.find(fence);
  if (open == std::string::npos) {
    throw Error(Errc::no_code_block, "response contains no fenced code block");
  }
  const std::size_t after = open + fence.size();
  const std::size_t close = response_text.find(fence, after);
  if (close == std::string::npos) {
    throw Error(Errc::no_code_block, "fenced code block is not terminated");
  }
  const std::size_t nl = response_text.find('\n', after);
  std::size_t begin;
  if (nl != std::string::npos && nl < close) {
    begin = nl + 1;  // anything between the fence and the newline is a tag
  } else {
    // Single-line block: skip a leading language tag word if present.
    begin = after;
    std::size_t w = begin;
    while (w < close && is_placeholder_char(response_text[w])) ++w;
    const std::string tag = response_text.substr(begin, w - begin);
    if (tag == "python" || tag == "py") {
      while (w < close && (response_text[w] == ' ' || response_text[w] == '\t')) ++w;
      begin = w;
    }
  }
  if (begin > close) begin = close;
  std::string code = response_text.substr(begin, close - begin);
  if (!code.empty() && code.back() == '\n') code.pop_back();
  return code;
}

}  // namespace trajevo::llm
