#include <doctest.h>

#include <filesystem>
#include <random>
#include <thread>
#include <vector>

#include "dlite/gateway.hpp"

using namespace dlite;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gwtest-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ModelConfig mock_config() {
  ModelConfig c;
  c.model = "mock";
  return c;
}

}  // namespace

TEST_CASE("prompt digest keys on model, temperature and prompt") {
  ModelConfig a = mock_config();
  CHECK(prompt_digest(a, "hello") == prompt_digest(a, "hello"));
  CHECK(prompt_digest(a, "hello") != prompt_digest(a, "world"));
  ModelConfig b = a;
  b.model = "other";
  CHECK(prompt_digest(a, "hello") != prompt_digest(b, "hello"));
  ModelConfig c = a;
  c.temperature = 0.7;
  CHECK(prompt_digest(a, "hello") != prompt_digest(c, "hello"));
  CHECK(prompt_digest(a, "hello").size() == 16);  // hex, filename-safe
}

TEST_CASE("model config serializes without any secret material") {
  ModelConfig c;
  c.endpoint = "https://example.invalid/v1/chat/completions";
  c.model = "m1";
  c.api_key_env = "EXAMPLE_KEY";
  c.temperature = 0.25;
  c.max_tokens = 77;
  nlohmann::json j = c.to_json();
  CHECK(j.dump().find("sk-") == std::string::npos);
  ModelConfig back = ModelConfig::from_json(j);
  CHECK(back.endpoint == c.endpoint);
  CHECK(back.model == c.model);
  CHECK(back.api_key_env == c.api_key_env);
  CHECK(back.temperature == c.temperature);
  CHECK(back.max_tokens == c.max_tokens);
}

TEST_CASE("exchange JSON round-trip") {
  Exchange ex;
  ex.prompt_hash = "abc";
  ex.prompt = "p";
  ex.response = "r";
  ex.model = "m";
  ex.timestamp = "2024-01-01T00:00:00Z";
  ex.latency_ms = 12;
  ex.prompt_tokens = 3;
  Exchange back = Exchange::from_json(ex.to_json());
  CHECK(back.prompt_hash == ex.prompt_hash);
  CHECK(back.response == ex.response);
  CHECK(back.prompt_tokens == ex.prompt_tokens);
  CHECK_FALSE(back.completion_tokens.has_value());
}

TEST_CASE("gateway caches responses and replays them verbatim") {
  TempDir dir;
  auto backend = std::make_shared<MockBackend>();
  backend->fixtures["ping"] = "pong";
  Gateway gw(dir.path.string(), false, backend);
  ModelConfig cfg = mock_config();

  Exchange first = gw.complete("ping", cfg);
  CHECK(first.response == "pong");
  CHECK_FALSE(first.from_cache);
  CHECK(backend->calls() == 1);

  Exchange second = gw.complete("ping", cfg);
  CHECK(second.response == "pong");
  CHECK(second.from_cache);
  CHECK(second.timestamp == first.timestamp);  // stored exchange, not a new one
  CHECK(backend->calls() == 1);

  // a second gateway over the same directory sees the entry
  Gateway gw2(dir.path.string(), true, nullptr);
  CHECK(gw2.complete("ping", cfg).response == "pong");
}

TEST_CASE("offline gateway raises on a cache miss") {
  TempDir dir;
  Gateway gw(dir.path.string(), true, std::make_shared<MockBackend>());
  CHECK_THROWS_AS(gw.complete("never seen", mock_config()), CacheOnlyMiss);
}

TEST_CASE("unmatched prompts get the mock default response") {
  TempDir dir;
  auto backend = std::make_shared<MockBackend>();
  Gateway gw(dir.path.string(), false, backend);
  CHECK(gw.complete("unmapped", mock_config()).response == "Unknown.");
}

TEST_CASE("rate limiter bounds concurrent backend calls") {
  TempDir dir;
  auto backend = std::make_shared<MockBackend>();
  Gateway gw(dir.path.string(), false, backend, /*max_in_flight=*/2);
  ModelConfig cfg = mock_config();
  std::vector<std::thread> threads;
  for (int i = 0; i < 16; ++i)
    threads.emplace_back([&gw, &cfg, i] {
      (void)gw.complete("prompt " + std::to_string(i), cfg);
    });
  for (std::thread& t : threads) t.join();
  CHECK(backend->calls() == 16);
  CHECK(backend->max_in_flight_seen() <= 2);
}
