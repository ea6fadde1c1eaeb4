#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "trajevo/assets.hpp"
#include "trajevo/error.hpp"
#include "trajevo/exec/runner.hpp"
#include "trajevo/llm/gateway.hpp"
#include "trajevo/util/text.hpp"

using namespace trajevo;
using namespace trajevo::llm;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code();
  }
  return Errc::internal;
}

std::vector<std::string> tokens_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

bool is_number_token(const std::string& token) {
  if (token.empty()) return false;
  char* end = nullptr;
  std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

// True when the two texts have identical word streams except that some
// numeric words were replaced by other numeric words.
bool differs_only_in_numbers(const std::string& a, const std::string& b,
                             std::size_t* diff_count = nullptr) {
  const auto ta = tokens_of(a);
  const auto tb = tokens_of(b);
  if (ta.size() != tb.size()) return false;
  std::size_t diffs = 0;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i] == tb[i]) continue;
    if (!is_number_token(ta[i]) || !is_number_token(tb[i])) return false;
    ++diffs;
  }
  if (diff_count != nullptr) *diff_count = diffs;
  return true;
}

bool python_compiles(const std::string& code) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "trajevo_llm_test";
  fs::create_directories(dir);
  static std::atomic<int> counter{0};
  const fs::path file = dir / ("snippet_" + std::to_string(counter.fetch_add(1)) + ".py");
  write_file(file.string(), code);
  exec::ProcessResult result = exec::run_process(
      {"python3", "-c",
       "import sys\ncompile(open(sys.argv[1]).read(), sys.argv[1], 'exec')",
       file.string()},
      "", 30.0, 1 << 20);
  return result.exit_code == 0;
}

PromptLibrary& library() {
  static PromptLibrary lib = PromptLibrary::load();
  return lib;
}

std::string render_init_prompt(const std::string& long_reflection) {
  PromptLibrary& lib = library();
  return render(lib.get("init_population"),
                {{"task_description", lib.task_description()},
                 {"seed_function", lib.seed_source()},
                 {"func_name", lib.function_name()},
                 {"initial_long-term_reflection", long_reflection}});
}

ChatRequest generator_request(const std::string& user_text) {
  PromptLibrary& lib = library();
  ChatRequest request;
  request.model = "offline-mock";
  request.temperature = 1.0;
  request.messages = {{"system", render(lib.get("system_generator"), {})},
                     {"user", user_text}};
  return request;
}

struct LocalEndpoint {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }

  ~LocalEndpoint() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
};

int unused_tcp_port() {
  const int sock = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(sock >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  REQUIRE(::bind(sock, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  socklen_t len = sizeof(addr);
  REQUIRE(::getsockname(sock, reinterpret_cast<sockaddr*>(&addr), &len) == 0);
  const int port = ntohs(addr.sin_port);
  ::close(sock);
  return port;
}

}  // namespace

TEST_CASE("placeholder substitution follows the value map") {
  const PromptTemplate tpl{"demo", "A {x} B {y} C {x}"};

  SUBCASE("complete map substitutes every slot") {
    CHECK(render(tpl, {{"x", "1"}, {"y", "2"}}) == "A 1 B 2 C 1");
  }
  SUBCASE("missing key raises the placeholder error") {
    CHECK(code_of([&] { render(tpl, {{"x", "1"}}); }) == Errc::missing_placeholder);
  }
  SUBCASE("template without slots renders unchanged") {
    const PromptTemplate flat{"flat", "no slots here"};
    CHECK(render(flat, {}) == flat.body);
  }
  SUBCASE("substituted values are never re-expanded") {
    CHECK(render(tpl, {{"x", "{y}"}, {"y", "2"}}) == "A {y} B 2 C {y}");
  }
  SUBCASE("distinct values give distinct outputs") {
    CHECK(render(tpl, {{"x", "1"}, {"y", "2"}}) !=
          render(tpl, {{"x", "1"}, {"y", "3"}}));
  }
  SUBCASE("hyphenated and unclosed brace forms") {
    const PromptTemplate hyphen{"h", "{long-term_hint} and {not closed"};
    CHECK(render(hyphen, {{"long-term_hint", "X"}}) == "X and {not closed");
    CHECK(hyphen.placeholders() == std::vector<std::string>{"long-term_hint"});
  }
}

TEST_CASE("template placeholder inventories") {
  PromptLibrary& lib = library();
  CHECK(lib.get("system_generator").placeholders().empty());
  CHECK(lib.get("system_reflector").placeholders().empty());
  CHECK(lib.get("task_description").placeholders() ==
        std::vector<std::string>{"function_name", "problem_description",
                                 "function_description"});
  CHECK(lib.get("init_population").placeholders() ==
        std::vector<std::string>{"task_description", "seed_function", "func_name",
                                 "initial_long-term_reflection"});
  CHECK(lib.get("crossover").placeholders() ==
        std::vector<std::string>{"task_description", "function_signature0",
                                 "worse_code", "function_signature1", "better_code",
                                 "short_term_reflection", "function_name"});
  CHECK(lib.get("short_reflection").placeholders() ==
        std::vector<std::string>{"func_name", "problem_desc", "func_desc",
                                 "worse_code", "stats_info_worse", "better_code",
                                 "stats_info_better"});
  CHECK(lib.get("long_reflection").placeholders() ==
        std::vector<std::string>{"function_name", "problem_description",
                                 "function_description", "worse_code",
                                 "better_code"});
  CHECK(lib.get("elitist_mutation").placeholders() ==
        std::vector<std::string>{"user_generator", "reflection", "func_signature1",
                                 "elitist_code", "stats_info_elitist", "func_name"});
  CHECK(code_of([&] { lib.get("nonexistent"); }) == Errc::config);
}

TEST_CASE("bundled prompt assets are pinned by hash") {
  const std::pair<const char*, const char*> pins[] = {
      {"prompts/system_generator.txt",
       "89ac0590de1196d1f26f5119744a963c4d5441bc835397fc950e752828bc8dc2"},
      {"prompts/system_reflector.txt",
       "468fbda7368fc02e185f751eaf755816e9248c4c7517cfafc67752e2c909a4aa"},
      {"prompts/task_description.txt",
       "83d330b5caf4787a6f4e4ac92500a2714bca90ff50e27d737c935e71c7021cce"},
      {"prompts/init_population.txt",
       "ed09d9e9f4172ca139fc50026e19b2c8995762827479c5dde41fe76b23ffb86a"},
      {"prompts/crossover.txt",
       "dd3d1ca5ae7127921824ab145cd18a4e03f9b27f3d7ae86944af7557c2d59647"},
      {"prompts/short_reflection.txt",
       "e51b5ada47b89180700758233a814f85c8e27cab23edb05bc57cd713fc60b37a"},
      {"prompts/long_reflection.txt",
       "0ba92ec7280b0f26a97dd3c37ba2abd74ff01e966c6a260d57e077cbe070532b"},
      {"prompts/elitist_mutation.txt",
       "dc158d6b5fb473627417f7727f5db5928471658d876da071d3a6348144ef7bdc"},
      {"prompts/function_signature.txt",
       "7a39c3959819baa3e9140785fd564b8eb6a2ec36ce6773d1b0b46e43ea8c3f39"},
      {"prompts/function_description.txt",
       "6ef222bfa86c60961871b39cc5f8ebaa4c8470714b8b39151a92a4023de72dee"},
      {"prompts/external_knowledge.txt",
       "df498ac56521be0891fd2f4ad6d275e19fc0298997c7a15046399fb1c34e862d"},
      {"seed/seed_function.py",
       "96e43dd68c9c954e06e10f4feb7e6d619753e98ef543d1528826645678afb0ba"},
  };
  for (const auto& [rel, digest] : pins) {
    CAPTURE(rel);
    CHECK(sha256_hex(read_file(asset_path(rel))) == digest);
  }
}

TEST_CASE("library composites") {
  PromptLibrary& lib = library();
  CHECK(lib.function_name() == "predict_trajectory");
  CHECK(lib.signature("_v1") ==
        "def predict_trajectory_v1(trajectory: np.ndarray) -> np.ndarray:");
  CHECK(lib.signature("") ==
        "def predict_trajectory(trajectory: np.ndarray) -> np.ndarray:");

  const std::string task = lib.task_description();
  CHECK(task.find("Write a predict_trajectory function for") == 0);
  CHECK(task.find(lib.function_description()) != std::string::npos);

  CHECK(lib.seed_source().find("def predict_trajectory(trajectory):") == 0);
  CHECK(lib.seed_source().find("velocity = trajectory[:, -1, :] - trajectory[:, -2, :]") !=
        std::string::npos);
  CHECK(lib.external_knowledge().find("Variable number of pedestrians") !=
        std::string::npos);
}

TEST_CASE("rendered prompts carry their section markers") {
  PromptLibrary& lib = library();

  const std::string crossover = render(
      lib.get("crossover"),
      {{"task_description", lib.task_description()},
       {"function_signature0", lib.signature("_v0")},
       {"worse_code", "WORSE_BODY"},
       {"function_signature1", lib.signature("_v1")},
       {"better_code", "BETTER_BODY"},
       {"short_term_reflection", "REFLECTION_BODY"},
       {"function_name", lib.function_name()}});
  CHECK(crossover.find("[Worse code]") != std::string::npos);
  CHECK(crossover.find("[Better code]") != std::string::npos);
  CHECK(crossover.find("[Reflection]\nREFLECTION_BODY") != std::string::npos);
  CHECK(crossover.find("WORSE_BODY") != std::string::npos);
  CHECK(crossover.find("BETTER_BODY") != std::string::npos);
  CHECK(crossover.find("`predict_trajectory_v2`") != std::string::npos);

  const std::string reflection = render(
      lib.get("short_reflection"),
      {{"func_name", lib.function_name()},
       {"problem_desc", lib.problem_description()},
       {"func_desc", lib.function_description()},
       {"worse_code", "WORSE_BODY"},
       {"stats_info_worse", "WORSE_STATS"},
       {"better_code", "BETTER_BODY"},
       {"stats_info_better", "BETTER_STATS"}});
  CHECK(reflection.find("[Worse code results analysis]") != std::string::npos);
  CHECK(reflection.find("[Better code results analysis]") != std::string::npos);
  CHECK(reflection.find("maximum of 200 words") != std::string::npos);

  const std::string mutation = render(
      lib.get("elitist_mutation"),
      {{"user_generator", lib.task_description()},
       {"reflection", "HINTS"},
       {"func_signature1", lib.signature("_v1")},
       {"elitist_code", "ELITE_BODY"},
       {"stats_info_elitist", "ELITE_STATS"},
       {"func_name", lib.function_name()}});
  CHECK(mutation.find("[Code Results Analysis]") != std::string::npos);
  CHECK(mutation.find("[Prior reflection]\nHINTS") != std::string::npos);
  CHECK(mutation.find("[Improved code]") != std::string::npos);

  const std::string init = render_init_prompt("");
  CHECK(init.find(library().seed_source()) != std::string::npos);
  CHECK(init.find("Be very creative") != std::string::npos);
}

TEST_CASE("code block extraction") {
  CHECK(extract_code("here\n```python\nX\n```\nbye") == "X");
  CHECK(extract_code("```\nplain\n```") == "plain");
  CHECK(extract_code("first\n```python\nA\n```\nthen\n```python\nB\n```") == "A");
  CHECK(extract_code("```python x = 1```") == "x = 1");
  CHECK(extract_code("```py\nimport numpy as np\ndef f():\n    pass\n```") ==
        "import numpy as np\ndef f():\n    pass");
  CHECK(code_of([] { extract_code("no fences at all"); }) == Errc::no_code_block);
  CHECK(code_of([] { extract_code("open only\n```python\nX"); }) == Errc::no_code_block);
}

TEST_CASE("reflection word budgets") {
  std::string long_text;
  for (int i = 0; i < 300; ++i) long_text += "w" + std::to_string(i) + " ";
  CHECK(count_words(truncate_words(long_text, kShortReflectionMaxWords)) == 200);
  CHECK(count_words(truncate_words(long_text, kLongReflectionMaxWords)) == 20);
  CHECK(truncate_words("short text", kShortReflectionMaxWords) == "short text");
}

TEST_CASE("scripted provider replays in request order") {
  ScriptProvider provider({"A", "B"});
  const ChatRequest request = generator_request("hello");

  ChatResponse first = provider.complete(request);
  CHECK(first.text == "A");
  CHECK(first.latency_s >= 0.0);
  CHECK(first.usage.prompt_tokens > 0);
  CHECK(first.usage.completion_tokens == 1);

  CHECK(provider.complete(request).text == "B");
  CHECK(provider.calls() == 2);
  CHECK(code_of([&] { provider.complete(request); }) == Errc::script_exhausted);
}

TEST_CASE("seeded mock mutator") {
  PromptLibrary& lib = library();

  SUBCASE("identical seeds give identical reply sequences") {
    MutatorProvider a(42);
    MutatorProvider b(42);
    const ChatRequest request = generator_request(render_init_prompt(""));
    CHECK(a.complete(request).text == b.complete(request).text);
    // Stateless content addressing: repeating the request repeats the reply.
    CHECK(a.complete(request).text == a.complete(request).text);
  }

  SUBCASE("different seeds vary the literals") {
    MutatorProvider a(1);
    MutatorProvider b(2);
    const ChatRequest request = generator_request(render_init_prompt(""));
    const std::string code_a = extract_code(a.complete(request).text);
    const std::string code_b = extract_code(b.complete(request).text);
    CHECK(code_a != code_b);
    std::size_t diffs = 0;
    CHECK(differs_only_in_numbers(code_a, code_b, &diffs));
    CHECK(diffs > 0);
  }

  SUBCASE("initialization replies are runnable heuristic variants") {
    MutatorProvider provider(7);
    const ChatRequest request = generator_request(render_init_prompt(""));
    const std::string code = extract_code(provider.complete(request).text);
    CHECK(code.find("def predict_trajectory_v2(") != std::string::npos);
    CHECK(code.find("import numpy as np") != std::string::npos);
    CHECK(python_compiles(code));
  }

  SUBCASE("mutation replies change only numeric literals of the base code") {
    MutatorProvider provider(7);
    const std::string base =
        extract_code(provider.complete(generator_request(render_init_prompt(""))).text);

    const std::string mutation_prompt = render(
        lib.get("elitist_mutation"),
        {{"user_generator", lib.task_description()},
         {"reflection", "try wider noise"},
         {"func_signature1", lib.signature("_v1")},
         {"elitist_code", base},
         {"stats_info_elitist", "k=0: 12 (60.0%)"},
         {"func_name", lib.function_name()}});
    const std::string mutated =
        extract_code(provider.complete(generator_request(mutation_prompt)).text);

    CHECK(mutated != base);
    std::size_t diffs = 0;
    CHECK(differs_only_in_numbers(base, mutated, &diffs));
    CHECK(diffs > 0);
    CHECK(python_compiles(mutated));
  }

  SUBCASE("literal perturbation on the bundled seed heuristic") {
    const std::string& seed = lib.seed_source();
    const std::string mutated = MutatorProvider::perturb_numeric_literals(seed, 99);
    CHECK(mutated != seed);
    std::size_t diffs = 0;
    CHECK(differs_only_in_numbers(seed, mutated, &diffs));
    CHECK(diffs > 0);
    CHECK(python_compiles("import numpy as np\n\n" + mutated));
  }

  SUBCASE("literal perturbation keeps scales within the sampling band") {
    const std::string code = "a = 0.2\nb = a * 0.5\nc = b + 10.0\n";
    const std::string mutated = MutatorProvider::perturb_numeric_literals(code, 3);
    const auto before = tokens_of(code);
    const auto after = tokens_of(mutated);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (before[i] == after[i]) continue;
      const double original = std::strtod(before[i].c_str(), nullptr);
      const double scaled = std::strtod(after[i].c_str(), nullptr);
      CHECK(scaled >= original * 0.5 - 1e-9);
      CHECK(scaled <= original * 1.5 + 1e-9);
    }
  }

  SUBCASE("reflection requests get prose within budget") {
    MutatorProvider provider(11);
    const std::string short_prompt = render(
        lib.get("short_reflection"),
        {{"func_name", lib.function_name()},
         {"problem_desc", lib.problem_description()},
         {"func_desc", lib.function_description()},
         {"worse_code", "W"},
         {"stats_info_worse", "k=0: 1 (100.0%)"},
         {"better_code", "B"},
         {"stats_info_better", "k=1: 1 (100.0%)"}});
    const std::string short_reply = provider.complete(generator_request(short_prompt)).text;
    CHECK(count_words(short_reply) <= kShortReflectionMaxWords);
    CHECK(short_reply.find("```") == std::string::npos);

    const std::string long_prompt = render(
        lib.get("long_reflection"),
        {{"function_name", lib.function_name()},
         {"problem_description", lib.problem_description()},
         {"function_description", lib.function_description()},
         {"worse_code", "W"},
         {"better_code", "B"}});
    const std::string long_reply = provider.complete(generator_request(long_prompt)).text;
    CHECK(count_words(long_reply) < kLongReflectionMaxWords);
  }
}

TEST_CASE("http provider") {
  const ChatRequest request = []{
    ChatRequest r;
    r.model = "test-model";
    r.temperature = 0.5;
    r.messages = {{"system", "sys text"}, {"user", "user text"}};
    return r;
  }();

  SUBCASE("round trip with credentials and usage") {
    LocalEndpoint endpoint;
    std::string seen_body;
    std::string seen_auth;
    endpoint.server.Post("/v1/chat/completions",
                         [&](const httplib::Request& req, httplib::Response& res) {
                           seen_body = req.body;
                           seen_auth = req.get_header_value("Authorization");
                           res.set_content(
                               R"({"choices":[{"message":{"role":"assistant","content":"Hello"}}],)"
                               R"("usage":{"prompt_tokens":12,"completion_tokens":3,"total_tokens":15}})",
                               "application/json");
                         });
    endpoint.start();

    HttpProviderConfig config;
    config.base_url = endpoint.url();
    config.api_key = "secret-key";
    config.backoff_initial_s = 0.0;
    HttpProvider provider(config);

    const ChatResponse response = provider.complete(request);
    CHECK(response.text == "Hello");
    CHECK(response.usage.prompt_tokens == 12);
    CHECK(response.usage.completion_tokens == 3);
    CHECK(response.usage.total_tokens == 15);
    CHECK(response.latency_s > 0.0);

    CHECK(seen_auth == "Bearer secret-key");
    const nlohmann::json sent = nlohmann::json::parse(seen_body);
    CHECK(sent["model"] == "test-model");
    CHECK(sent["temperature"].get<double>() == doctest::Approx(0.5));
    REQUIRE(sent["messages"].size() == 2);
    CHECK(sent["messages"][0]["role"] == "system");
    CHECK(sent["messages"][1]["content"] == "user text");
  }

  SUBCASE("persistent 429 exhausts retries") {
    LocalEndpoint endpoint;
    std::atomic<int> hits{0};
    endpoint.server.Post("/v1/chat/completions",
                         [&](const httplib::Request&, httplib::Response& res) {
                           hits.fetch_add(1);
                           res.status = 429;
                           res.set_content("slow down", "text/plain");
                         });
    endpoint.start();

    HttpProviderConfig config;
    config.base_url = endpoint.url();
    config.backoff_initial_s = 0.0;
    HttpProvider provider(config);
    CHECK(code_of([&] { provider.complete(request); }) == Errc::rate_limited);
    CHECK(hits.load() == 3);
  }

  SUBCASE("server errors retry then surface as transport") {
    LocalEndpoint endpoint;
    std::atomic<int> hits{0};
    endpoint.server.Post("/v1/chat/completions",
                         [&](const httplib::Request&, httplib::Response& res) {
                           hits.fetch_add(1);
                           res.status = 503;
                         });
    endpoint.start();

    HttpProviderConfig config;
    config.base_url = endpoint.url();
    config.backoff_initial_s = 0.0;
    HttpProvider provider(config);
    CHECK(code_of([&] { provider.complete(request); }) == Errc::transport);
    CHECK(hits.load() == 3);
  }

  SUBCASE("bad credentials fail fast") {
    LocalEndpoint endpoint;
    std::atomic<int> hits{0};
    endpoint.server.Post("/v1/chat/completions",
                         [&](const httplib::Request&, httplib::Response& res) {
                           hits.fetch_add(1);
                           res.status = 401;
                         });
    endpoint.start();

    HttpProviderConfig config;
    config.base_url = endpoint.url();
    config.backoff_initial_s = 0.0;
    HttpProvider provider(config);
    CHECK(code_of([&] { provider.complete(request); }) == Errc::auth);
    CHECK(hits.load() == 1);
  }

  SUBCASE("success with no completion text is an empty response") {
    LocalEndpoint endpoint;
    int variant = 0;
    endpoint.server.Post("/v1/chat/completions",
                         [&](const httplib::Request&, httplib::Response& res) {
                           if (variant == 0) {
                             res.set_content("", "application/json");
                           } else {
                             res.set_content(
                                 R"({"choices":[{"message":{"content":""}}]})",
                                 "application/json");
                           }
                         });
    endpoint.start();

    HttpProviderConfig config;
    config.base_url = endpoint.url();
    config.backoff_initial_s = 0.0;
    HttpProvider provider(config);
    CHECK(code_of([&] { provider.complete(request); }) == Errc::empty_response);
    variant = 1;
    CHECK(code_of([&] { provider.complete(request); }) == Errc::empty_response);
  }

  SUBCASE("unreachable endpoint is a transport error") {
    HttpProviderConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(unused_tcp_port());
    config.max_attempts = 2;
    config.backoff_initial_s = 0.0;
    config.timeout_s = 5.0;
    HttpProvider provider(config);
    CHECK(code_of([&] { provider.complete(request); }) == Errc::transport);
  }

  SUBCASE("configuration validation") {
    CHECK(code_of([] { HttpProvider provider(HttpProviderConfig{}); }) == Errc::config);
  }
}
